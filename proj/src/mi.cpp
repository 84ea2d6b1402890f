#include "pvcomp/mi.hpp"

#include <cmath>
#include <limits>

#include "pvcomp/distributions.hpp"
#include "pvcomp/errors.hpp"

namespace pvcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double expit(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// lower Cholesky factor of a 3x3 SPD matrix
Matrix cholesky3(const Matrix& m) {
    Matrix l(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw NumericalFailure("posterior covariance not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

double wald_statistic(const PairedEstimates& e, double n) {
    auto [q2, p] = global_test(e.inference(n));
    (void)p;
    return q2;
}

// multinomial log-likelihood of a complete table at fixed cell
// probabilities (x cells first, then y cells)
double cell_loglik(const CompleteTable& t, const std::array<double, 8>& probs) {
    double ll = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (t.x[k] > 0.0) {
            if (probs[k] <= 0.0) throw LogOfNonpositive("zero probability with positive count");
            ll += t.x[k] * std::log(probs[k]);
        }
        if (t.y[k] > 0.0) {
            if (probs[4 + k] <= 0.0) throw LogOfNonpositive("zero probability with positive count");
            ll += t.y[k] * std::log(probs[4 + k]);
        }
    }
    return ll;
}

// degrees of freedom shared by the Wald and likelihood-ratio combinations
double wald_lrt_df(int m, double r) {
    if (r <= 0.0) return kInf;
    if (2.0 * (m - 1) > 4.0) {
        const double b = 1.0 + (m - 2.0) / ((m - 1.0) * r);
        return 4.0 + (2.0 * m - 6.0) * b * b;
    }
    const double b = 1.0 + 1.0 / r;
    return 1.5 * (m - 1.0) * b * b;
}

double f2_pvalue(double stat, double df2) {
    if (stat <= 0.0) return 1.0;
    if (std::isinf(df2)) return chi2_tail(2.0, 2.0 * stat);
    return f_tail(2.0, df2, stat);
}

}  // namespace

LogisticFit fit_logistic(const VerificationTable& t) {
    for (std::size_t k = 0; k < 4; ++k) {
        if (t.a[k] <= 0.0) throw ZeroCellForMi("a" + cell_name(k) + " is zero");
        if (t.b[k] <= 0.0) throw ZeroCellForMi("b" + cell_name(k) + " is zero");
    }

    LogisticFit fit;
    std::array<double, 3>& beta = fit.beta;
    const int max_iter = 100;
    for (int it = 1; it <= max_iter; ++it) {
        std::array<double, 3> grad{};
        Matrix info(3, 3);
        for (std::size_t k = 0; k < 4; ++k) {
            const double xk[3] = {1.0, static_cast<double>(kT1[k]), static_cast<double>(kT2[k])};
            const double m = t.a[k] + t.b[k];
            const double pi = expit(beta[0] * xk[0] + beta[1] * xk[1] + beta[2] * xk[2]);
            const double resid = t.a[k] - m * pi;
            const double w = m * pi * (1.0 - pi);
            for (std::size_t r = 0; r < 3; ++r) {
                grad[r] += xk[r] * resid;
                for (std::size_t s = 0; s < 3; ++s) info(r, s) += w * xk[r] * xk[s];
            }
        }
        fit.iterations = it;
        const double gnorm = std::max({std::fabs(grad[0]), std::fabs(grad[1]), std::fabs(grad[2])});
        Matrix inv = invert(info);
        if (gnorm < 1e-10) {
            fit.cov = inv.symmetrized();
            for (double b : beta)
                if (std::fabs(b) > 30.0) throw Separation("coefficient diverged");
            return fit;
        }
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t s = 0; s < 3; ++s) beta[r] += inv(r, s) * grad[s];
        if (std::fabs(beta[0]) > 50.0 || std::fabs(beta[1]) > 50.0 || std::fabs(beta[2]) > 50.0)
            throw Separation("coefficient diverged");
    }
    throw NonConvergence("logistic fit did not reach the gradient tolerance");
}

ImputationSet impute_m(const VerificationTable& t, int m, int cycles, Rng& rng) {
    if (m < 2) throw InvalidInput("at least two imputations required");
    const LogisticFit fit = fit_logistic(t);
    const Matrix chol = cholesky3(fit.cov);

    ImputationSet set;
    set.m_count = m;
    set.cycles = cycles;
    set.n = t.n();
    set.imputations.reserve(m);

    for (int im = 0; im < m; ++im) {
        double z[3] = {rng.normal(), rng.normal(), rng.normal()};
        double bstar[3];
        for (std::size_t r = 0; r < 3; ++r) {
            bstar[r] = fit.beta[r];
            for (std::size_t s = 0; s <= r; ++s) bstar[r] += chol(r, s) * z[s];
        }
        PerImputation pi;
        for (std::size_t k = 0; k < 4; ++k) {
            const double prob = expit(bstar[0] + bstar[1] * kT1[k] + bstar[2] * kT2[k]);
            const long draw = rng.binomial(static_cast<long>(t.c[k]), prob);
            pi.table.x[k] = t.a[k] + draw;
            pi.table.y[k] = t.b[k] + t.c[k] - draw;
        }
        pi.est = estimates(pi.table);
        pi.wald_stat = wald_statistic(pi.est, set.n);
        pi.lrt = lrt_statistic(pi.table);
        pi.leisenring = leisenring_tests(pi.table);
        pi.wang_ppv = wang_contrast(pi.table, true);
        pi.wang_npv = wang_contrast(pi.table, false);
        pi.kosinski_ppv = kosinski_contrast(pi.table, true);
        pi.kosinski_npv = kosinski_contrast(pi.table, false);
        const double n = set.n;
        for (std::size_t k = 0; k < 4; ++k) {
            pi.psi_hat[k] = pi.table.x[k] / n;
            pi.psi_hat[4 + k] = pi.table.y[k] / n;
        }
        // null estimators: diagonal cells unchanged, discordant cells averaged
        pi.psi_null = pi.psi_hat;
        pi.psi_null[kCell10] = pi.psi_null[kCell01] =
            0.5 * (pi.psi_hat[kCell10] + pi.psi_hat[kCell01]);
        pi.psi_null[4 + kCell10] = pi.psi_null[4 + kCell01] =
            0.5 * (pi.psi_hat[4 + kCell10] + pi.psi_hat[4 + kCell01]);
        set.imputations.push_back(std::move(pi));
    }
    return set;
}

PooledScalar rubin_pool(const std::vector<double>& diffs, const std::vector<double>& variances,
                        RubinConvention conv) {
    const int m = static_cast<int>(diffs.size());
    if (m < 2 || variances.size() != diffs.size())
        throw InvalidInput("rubin_pool needs at least two matched (estimate, variance) pairs");

    PooledScalar out;
    double mean = 0.0, ubar = 0.0;
    for (int i = 0; i < m; ++i) {
        mean += diffs[i];
        ubar += variances[i];
    }
    mean /= m;
    ubar /= m;
    double b = 0.0;
    for (int i = 0; i < m; ++i) b += (diffs[i] - mean) * (diffs[i] - mean);
    b /= (m - 1);

    out.estimate = mean;
    // a between-variance at rounding scale is a zero between-variance
    if (b <= 1e-12 * (ubar + 1e-300)) {
        out.variance = ubar;
        out.df = kInf;
    } else if (conv == RubinConvention::paper) {
        out.variance = ubar + b / (m + 1.0);
        const double f = 1.0 + (m / (m + 1.0)) * out.variance / b;
        out.df = (m - 1.0) * f * f;
    } else {
        out.variance = ubar + (1.0 + 1.0 / m) * b;
        const double r = (1.0 + 1.0 / m) * b / ubar;
        const double f = 1.0 + 1.0 / r;
        out.df = (m - 1.0) * f * f;
    }
    if (out.variance <= 0.0) throw ZeroVarianceContrast("pooled variance not positive");
    out.statistic = out.estimate / std::sqrt(out.variance);
    out.pvalue = std::isinf(out.df) ? normal_two_sided(out.statistic)
                                    : t_two_sided(out.df, out.statistic);
    return out;
}

PooledEstimates pooled_estimates(const ImputationSet& set) {
    const int m = set.m_count;
    PooledEstimates out;
    for (const PerImputation& pi : set.imputations) {
        const double eta[4] = {pi.est.ppv1, pi.est.npv1, pi.est.ppv2, pi.est.npv2};
        for (std::size_t i = 0; i < 4; ++i) {
            out.eta_bar[i] += eta[i] / m;
            for (std::size_t j = 0; j < 4; ++j) out.sigma_bar(i, j) += pi.est.sigma(i, j) / m;
        }
    }
    for (const PerImputation& pi : set.imputations) {
        const double eta[4] = {pi.est.ppv1, pi.est.npv1, pi.est.ppv2, pi.est.npv2};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                out.b_between(i, j) +=
                    (eta[i] - out.eta_bar[i]) * (eta[j] - out.eta_bar[j]) / (m - 1.0);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            out.total(i, j) = out.sigma_bar(i, j) + (1.0 + 1.0 / m) * out.b_between(i, j);
    for (std::size_t i = 0; i < 4; ++i) out.se[i] = std::sqrt(out.total(i, i));
    return out;
}

GlobalMiTest wald_global(const ImputationSet& set) {
    const int m = set.m_count;
    const PooledEstimates pe = pooled_estimates(set);

    Matrix sigma_bar_inv(4, 4);
    try {
        sigma_bar_inv = invert(pe.sigma_bar);
    } catch (const SingularMatrix&) {
        throw SingularPooledCovariance("within-imputation covariance is singular");
    }
    const Matrix prod = pe.b_between * sigma_bar_inv;
    double trace = 0.0;
    for (std::size_t i = 0; i < 4; ++i) trace += prod(i, i);

    GlobalMiTest out;
    out.r = (1.0 + 1.0 / m) * trace / 2.0;
    if (out.r < 1e-12) out.r = 0.0;

    PvInference inf;
    inf.eta = pe.eta_bar;
    inf.sigma = pe.sigma_bar;
    inf.n = set.n;
    auto [q2, pv] = global_test(inf);
    (void)pv;
    out.stat = q2 / (2.0 * (1.0 + out.r));
    out.df2 = wald_lrt_df(m, out.r);
    out.pvalue = f2_pvalue(out.stat, out.df2);
    return out;
}

GlobalMiTest combine_pvalues(const ImputationSet& set) {
    const int m = set.m_count;
    double fbar = 0.0, root_mean = 0.0;
    for (const PerImputation& pi : set.imputations) {
        if (pi.wald_stat < 0.0) throw NumericalFailure("negative per-imputation Wald statistic");
        fbar += pi.wald_stat / m;
        root_mean += std::sqrt(pi.wald_stat) / m;
    }
    double var_roots = 0.0;
    for (const PerImputation& pi : set.imputations) {
        const double d = std::sqrt(pi.wald_stat) - root_mean;
        var_roots += d * d;
    }
    var_roots /= (m - 1.0);

    GlobalMiTest out;
    out.r = (1.0 + 1.0 / m) * var_roots;
    if (out.r <= 1e-12 * (1.0 + fbar)) {
        out.r = 0.0;
        out.stat = fbar / 2.0;
        out.df2 = kInf;
    } else {
        out.stat = (fbar / 2.0 - ((m + 1.0) / (m - 1.0)) * out.r) / (1.0 + out.r);
        const double b = 1.0 + 1.0 / out.r;
        out.df2 = std::pow(2.0, -3.0 / m) * (m - 1.0) * b * b;
    }
    out.pvalue = f2_pvalue(out.stat, out.df2);
    return out;
}

GlobalMiTest combined_lrt(const ImputationSet& set) {
    const int m = set.m_count;

    double fbar = 0.0;
    std::array<double, 8> psi_bar{}, psi0_bar{};
    for (const PerImputation& pi : set.imputations) {
        fbar += pi.lrt / m;
        for (std::size_t k = 0; k < 8; ++k) {
            psi_bar[k] += pi.psi_hat[k] / m;
            psi0_bar[k] += pi.psi_null[k] / m;
        }
    }
    double ftilde = 0.0;
    for (const PerImputation& pi : set.imputations)
        ftilde += 2.0 * (cell_loglik(pi.table, psi_bar) - cell_loglik(pi.table, psi0_bar)) / m;

    GlobalMiTest out;
    out.r = ((m + 1.0) / (2.0 * (m - 1.0))) * (fbar - ftilde);
    if (out.r < 0.0) {
        out.r = 0.0;
        out.r_floored = true;
    } else if (out.r <= 1e-12 * (1.0 + std::fabs(ftilde))) {
        out.r = 0.0;
    }
    out.stat = ftilde / (2.0 * (1.0 + out.r));
    if (out.stat < 0.0) out.stat = 0.0;
    out.df2 = wald_lrt_df(m, out.r);
    out.pvalue = f2_pvalue(out.stat, out.df2);
    return out;
}

MiIndividual individual_mi(const ImputationSet& set, IndividualMethod method,
                           RubinConvention conv) {
    const int m = set.m_count;
    MiIndividual out;
    if (method == IndividualMethod::leisenring) {
        double zp = 0.0, zn = 0.0;
        for (const PerImputation& pi : set.imputations) {
            zp += pi.leisenring.z_ppv / m;
            zn += pi.leisenring.z_npv / m;
        }
        out.ppv.statistic = zp;
        out.ppv.df = kInf;
        out.ppv.pvalue = normal_two_sided(zp);
        out.npv.statistic = zn;
        out.npv.df = kInf;
        out.npv.pvalue = normal_two_sided(zn);
        return out;
    }

    std::vector<double> dp, vp, dn, vn;
    dp.reserve(m);
    vp.reserve(m);
    dn.reserve(m);
    vn.reserve(m);
    for (const PerImputation& pi : set.imputations) {
        const ContrastStat& cp = method == IndividualMethod::wang ? pi.wang_ppv : pi.kosinski_ppv;
        const ContrastStat& cn = method == IndividualMethod::wang ? pi.wang_npv : pi.kosinski_npv;
        dp.push_back(cp.diff);
        vp.push_back(cp.variance);
        dn.push_back(cn.diff);
        vn.push_back(cn.variance);
    }
    out.ppv = rubin_pool(dp, vp, conv);
    out.npv = rubin_pool(dn, vn, conv);
    return out;
}

}  // namespace pvcomp
