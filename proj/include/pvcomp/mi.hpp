#ifndef PVCOMP_MI_HPP
#define PVCOMP_MI_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "pvcomp/matrix.hpp"
#include "pvcomp/paired.hpp"
#include "pvcomp/rng.hpp"
#include "pvcomp/tables.hpp"

namespace pvcomp {

/// Logistic regression of disease status on the two test results over
/// the verified subjects: logit P(D=1 | T1, T2) = b0 + b1*T1 + b2*T2.
struct LogisticFit {
    std::array<double, 3> beta{};
    Matrix cov{3, 3};
    int iterations = 0;
};

LogisticFit fit_logistic(const VerificationTable& table);

/// Everything computed once per imputed table.
struct PerImputation {
    CompleteTable table;
    PairedEstimates est;
    double wald_stat = 0.0;  // full 2-df quadratic form
    double lrt = 0.0;
    ZPair leisenring{};
    ContrastStat wang_ppv{}, wang_npv{};
    ContrastStat kosinski_ppv{}, kosinski_npv{};
    std::array<double, 8> psi_hat{};   // unrestricted cell probabilities
    std::array<double, 8> psi_null{};  // cell probabilities under the null
};

struct ImputationSet {
    std::vector<PerImputation> imputations;
    int m_count = 0;
    int cycles = 0;
    std::uint64_t seed = 0;
    double n = 0.0;
};

/// Draw M complete tables. Each imputation draws a coefficient vector
/// from the asymptotic normal posterior of the logistic fit, turns it
/// into per-cell disease probabilities, and fills the unverified counts
/// with binomial draws. With a single incomplete variable every cycle's
/// draw supersedes the previous one, so one draw per imputation is
/// performed; `cycles` is kept for interface fidelity.
ImputationSet impute_m(const VerificationTable& table, int m, int cycles, Rng& rng);

enum class RubinConvention { paper, standard };

struct PooledScalar {
    double estimate = 0.0;
    double variance = 0.0;
    double df = 0.0;  // +inf when the between-imputation variance is zero
    double statistic = 0.0;
    double pvalue = 1.0;
};

/// Combine per-imputation point estimates and variances of one scalar
/// contrast. The `paper` convention uses total variance
/// Ubar + B/(M+1) and df (M-1)*(1 + M/(M+1) * total/B)^2; `standard`
/// uses Ubar + (1+1/M)B and df (M-1)*(1 + 1/r)^2 with
/// r = (1+1/M)B/Ubar.
PooledScalar rubin_pool(const std::vector<double>& diffs, const std::vector<double>& variances,
                        RubinConvention conv);

struct GlobalMiTest {
    double stat = 0.0;
    double df2 = 0.0;  // +inf means the chi-square limit was used
    double pvalue = 1.0;
    double r = 0.0;  // missing-information ratio entering the statistic
    bool r_floored = false;
};

GlobalMiTest wald_global(const ImputationSet& set);
GlobalMiTest combine_pvalues(const ImputationSet& set);
GlobalMiTest combined_lrt(const ImputationSet& set);

enum class IndividualMethod { leisenring, wang, kosinski };

struct MiIndividual {
    PooledScalar ppv, npv;
};

MiIndividual individual_mi(const ImputationSet& set, IndividualMethod method,
                           RubinConvention conv);

/// Pooled estimates with the standard-rule total covariance
/// sigma_bar + (1+1/M) b_between (the variance actually reported for
/// the combined point estimates).
struct PooledEstimates {
    std::array<double, 4> eta_bar{};
    Matrix sigma_bar{4, 4};
    Matrix b_between{4, 4};
    Matrix total{4, 4};
    std::array<double, 4> se{};
};

PooledEstimates pooled_estimates(const ImputationSet& set);

}  // namespace pvcomp

#endif
