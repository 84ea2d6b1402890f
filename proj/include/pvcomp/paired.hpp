#ifndef PVCOMP_PAIRED_HPP
#define PVCOMP_PAIRED_HPP

#include <utility>

#include "pvcomp/inference.hpp"
#include "pvcomp/matrix.hpp"
#include "pvcomp/tables.hpp"

namespace pvcomp {

/// Complete-data predictive-value estimates with the delta-method
/// covariance of (PPV1, NPV1, PPV2, NPV2). Cov(PPV_h, NPV_h) is
/// structurally zero.
struct PairedEstimates {
    double ppv1, npv1, ppv2, npv2;
    Matrix sigma{4, 4};

    PvInference inference(double n) const;
};

struct ZPair {
    double z_ppv, z_npv;
};

/// Difference and variance for one contrast; what Rubin pooling consumes.
struct ContrastStat {
    double diff;
    double variance;
};

PairedEstimates estimates(const CompleteTable& t);

/// Wald statistics from the delta-method covariance.
ZPair wang_tests(const CompleteTable& t);

/// Score statistics from marginal-regression estimating equations.
ZPair leisenring_tests(const CompleteTable& t);

/// Weighted generalized score statistics built on the pooled predictive
/// values.
ZPair kosinski_tests(const CompleteTable& t);

/// The pieces behind wang_tests / kosinski_tests, one contrast at a time.
ContrastStat wang_contrast(const CompleteTable& t, bool positive);
ContrastStat kosinski_contrast(const CompleteTable& t, bool positive);

/// Chi-square global statistic on the delta-method covariance.
std::pair<double, double> complete_global(const CompleteTable& t);

/// Likelihood-ratio statistic for symmetry of the discordant cells,
/// 0*log(0) = 0.
double lrt_statistic(const CompleteTable& t);

}  // namespace pvcomp

#endif
