#ifndef PVCOMP_REPORT_HPP
#define PVCOMP_REPORT_HPP

#include <cstdint>
#include <string>

#include "pvcomp/em.hpp"
#include "pvcomp/inference.hpp"
#include "pvcomp/mi.hpp"
#include "pvcomp/sem.hpp"

namespace pvcomp {

inline constexpr const char* kVersion = "1.0.0";

struct EmSemOptions {
    double delta = 1e-12;
    int max_iter = 10000;
    double confidence = 0.95;
    double alpha = 0.05;
};

/// Full output of the EM-SEM pipeline on one table.
struct EmSemReport {
    VerificationTable table;
    EmSemOptions options;
    EmResult em;
    SemResult sem;
    std::array<double, 4> se{};  // of (PPV1, NPV1, PPV2, NPV2)
    TestReport tests;
};

struct MiOptions {
    int m = 20;
    int cycles = 100;
    std::uint64_t seed = 1;
    RubinConvention convention = RubinConvention::paper;  // for the individual pooled tests
    double confidence = 0.95;
    double alpha = 0.05;
};

/// Full output of the multiple-imputation pipeline on one table.
struct MiReport {
    VerificationTable table;
    MiOptions options;
    PooledEstimates pooled;
    GlobalMiTest wald, combined, lrt;
    MiIndividual wang, kosinski, leisenring;
    Decisions wang_raw, wang_bonferroni, wang_holm;
    Decisions kosinski_raw, kosinski_bonferroni, kosinski_holm;
    Decisions leisenring_raw, leisenring_bonferroni, leisenring_holm;
    Interval ci_ppv_diff, ci_npv_diff;  // from the pooled delta-method contrast
};

EmSemReport run_emsem(const VerificationTable& table, const EmSemOptions& opts = {});
MiReport run_mi(const VerificationTable& table, const MiOptions& opts = {});

std::string render_text(const EmSemReport& r);
std::string render_json(const EmSemReport& r);
std::string render_text(const MiReport& r);
std::string render_json(const MiReport& r);

/// Shared numeric formatting for the text reports; the JSON renderings
/// carry the same values at full precision.
std::string fmt_num(double v);

}  // namespace pvcomp

#endif
