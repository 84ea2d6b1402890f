#include "pvcomp/inference.hpp"

#include <cmath>

#include "pvcomp/distributions.hpp"
#include "pvcomp/errors.hpp"

namespace pvcomp {

namespace {

// contrast differences and their variances under sigma
struct Contrasts {
    double d_ppv, d_npv;
    double v_ppv, v_npv, cov;
};

Contrasts contrasts(const PvInference& inf) {
    Contrasts c;
    c.d_ppv = inf.eta[0] - inf.eta[2];
    c.d_npv = inf.eta[1] - inf.eta[3];
    const Matrix& s = inf.sigma;
    c.v_ppv = s(0, 0) + s(2, 2) - 2.0 * s(0, 2);
    c.v_npv = s(1, 1) + s(3, 3) - 2.0 * s(1, 3);
    c.cov = s(0, 1) - s(0, 3) - s(2, 1) + s(2, 3);
    return c;
}

}  // namespace

std::pair<double, double> global_test(const PvInference& inf) {
    const Contrasts c = contrasts(inf);
    Matrix gsg(2, 2);
    gsg(0, 0) = c.v_ppv;
    gsg(1, 1) = c.v_npv;
    gsg(0, 1) = gsg(1, 0) = c.cov;
    Matrix inv(2, 2);
    try {
        inv = invert(gsg);
    } catch (const SingularMatrix&) {
        throw SingularContrastCovariance("contrast covariance is singular");
    }
    const double q2 = quadratic_form({c.d_ppv, c.d_npv}, inv);
    return {q2, chi2_tail(2.0, std::max(q2, 0.0))};
}

std::array<double, 4> individual_tests(const PvInference& inf) {
    const Contrasts c = contrasts(inf);
    if (c.v_ppv <= 0.0 || c.v_npv <= 0.0)
        throw ZeroVarianceContrast("non-positive contrast variance");
    const double z_ppv = c.d_ppv / std::sqrt(c.v_ppv);
    const double z_npv = c.d_npv / std::sqrt(c.v_npv);
    return {z_ppv, z_npv, normal_two_sided(z_ppv), normal_two_sided(z_npv)};
}

Decisions adjust(double p_ppv, double p_npv, AdjustMethod method, double alpha) {
    Decisions d;
    switch (method) {
        case AdjustMethod::raw:
            d.reject_ppv = p_ppv < alpha;
            d.reject_npv = p_npv < alpha;
            break;
        case AdjustMethod::bonferroni:
            d.reject_ppv = p_ppv < alpha / 2.0;
            d.reject_npv = p_npv < alpha / 2.0;
            break;
        case AdjustMethod::holm: {
            const bool ppv_first = p_ppv <= p_npv;
            const double p1 = ppv_first ? p_ppv : p_npv;
            const double p2 = ppv_first ? p_npv : p_ppv;
            const bool rej1 = p1 < alpha / 2.0;
            const bool rej2 = rej1 && p2 < alpha;  // step-down stops at the first failure
            d.reject_ppv = ppv_first ? rej1 : rej2;
            d.reject_npv = ppv_first ? rej2 : rej1;
            break;
        }
    }
    return d;
}

std::pair<Interval, Interval> difference_cis(const PvInference& inf, double level) {
    const Contrasts c = contrasts(inf);
    if (c.v_ppv < 0.0 || c.v_npv < 0.0) throw ZeroVarianceContrast("negative contrast variance");
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double m_ppv = z * std::sqrt(c.v_ppv);
    const double m_npv = z * std::sqrt(c.v_npv);
    return {Interval{c.d_ppv - m_ppv, c.d_ppv + m_ppv}, Interval{c.d_npv - m_npv, c.d_npv + m_npv}};
}

TestReport make_report(const PvInference& inf, double level, double alpha) {
    TestReport r;
    r.confidence = level;
    r.alpha = alpha;
    auto [q2, pq] = global_test(inf);
    r.q2 = q2;
    r.q2_pvalue = pq;
    auto z = individual_tests(inf);
    r.z_ppv = z[0];
    r.z_npv = z[1];
    r.p_ppv = z[2];
    r.p_npv = z[3];
    r.raw = adjust(r.p_ppv, r.p_npv, AdjustMethod::raw, alpha);
    r.bonferroni = adjust(r.p_ppv, r.p_npv, AdjustMethod::bonferroni, alpha);
    r.holm = adjust(r.p_ppv, r.p_npv, AdjustMethod::holm, alpha);
    auto [ci_p, ci_n] = difference_cis(inf, level);
    r.ci_ppv_diff = ci_p;
    r.ci_npv_diff = ci_n;
    return r;
}

}  // namespace pvcomp
