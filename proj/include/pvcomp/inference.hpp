#ifndef PVCOMP_INFERENCE_HPP
#define PVCOMP_INFERENCE_HPP

#include <array>
#include <utility>

#include "pvcomp/matrix.hpp"

namespace pvcomp {

/// Predictive-value estimates (PPV1, NPV1, PPV2, NPV2) with their 4x4
/// covariance; the common input of every test path.
struct PvInference {
    std::array<double, 4> eta{};
    Matrix sigma{4, 4};
    double n = 0.0;
};

enum class AdjustMethod { raw, bonferroni, holm };

struct Decisions {
    bool reject_ppv = false;
    bool reject_npv = false;
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

/// Everything the test paths report for one PvInference.
struct TestReport {
    double q2 = 0.0;
    double q2_pvalue = 1.0;
    double z_ppv = 0.0, z_npv = 0.0;
    double p_ppv = 1.0, p_npv = 1.0;
    Decisions raw, bonferroni, holm;
    Interval ci_ppv_diff, ci_npv_diff;
    double confidence = 0.95;
    double alpha = 0.05;
};

/// Chi-square global statistic for H0: PPV1 = PPV2 and NPV1 = NPV2,
/// using the fixed 2x4 contrast [[1,0,-1,0],[0,1,0,-1]].
std::pair<double, double> global_test(const PvInference& inf);

/// The two z statistics for the individual contrasts and their
/// two-sided p-values: (z_ppv, z_npv, p_ppv, p_npv).
std::array<double, 4> individual_tests(const PvInference& inf);

/// Multiplicity adjustment for the pair of individual p-values.
/// Bonferroni tests each at alpha/2; Holm steps down.
Decisions adjust(double p_ppv, double p_npv, AdjustMethod method, double alpha);

/// Wald intervals for (PPV1 - PPV2) and (NPV1 - NPV2).
std::pair<Interval, Interval> difference_cis(const PvInference& inf, double level);

/// Full report at the given confidence level and test size.
TestReport make_report(const PvInference& inf, double level, double alpha);

}  // namespace pvcomp

#endif
