#include "pvcomp/em.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

namespace {

double safe_div(double num, double den, const char* what) {
    if (den <= 0.0) throw DegenerateCell(std::string("zero denominator in ") + what);
    return num / den;
}

// Joint cells by the same algebra as joint_probabilities but without the
// feasibility guards. The estimator map sends any imputed split to cell
// values x_k/n, y_k/n even when the intermediate parameter point lies
// outside the statistical region (early iterates from an extreme d0 do),
// so the iteration must be able to evaluate there.
JointProbs joint_cells_unchecked(const Theta& t) {
    const double q = t.q();
    const double y1 = t.youden1();
    const double y2 = t.youden2();
    if (y1 == 0.0 || y2 == 0.0 || t.p <= 0.0 || t.p >= 1.0)
        throw EvaluationFailure("cell probabilities undefined: a predictive value equals the base rate (uninformative test)");
    const double se1 = t.ppv1 * (t.npv1 - q) / (t.p * y1);
    const double se2 = t.ppv2 * (t.npv2 - q) / (t.p * y2);
    const double sp1 = t.npv1 * (t.ppv1 - t.p) / (q * y1);
    const double sp2 = t.npv2 * (t.ppv2 - t.p) / (q * y2);
    const double eps1 = se1 * se2 * (t.alpha1 - 1.0);
    const double eps0 = (1.0 - sp1) * (1.0 - sp2) * (t.alpha0 - 1.0);
    JointProbs jp;
    for (std::size_t k = 0; k < 4; ++k) {
        const double sgn = (kT1[k] == kT2[k]) ? 1.0 : -1.0;
        const double s1 = kT1[k] ? se1 : 1.0 - se1;
        const double s2 = kT2[k] ? se2 : 1.0 - se2;
        jp.phi[k] = t.p * (s1 * s2 + sgn * eps1);
        const double u1 = kT1[k] ? 1.0 - sp1 : sp1;
        const double u2 = kT2[k] ? 1.0 - sp2 : sp2;
        jp.varphi[k] = q * (u1 * u2 + sgn * eps0);
        if (!std::isfinite(jp.phi[k]) || !std::isfinite(jp.varphi[k]))
            throw EvaluationFailure("non-finite cell value");
    }
    return jp;
}

}  // namespace

Theta m_step(const VerificationTable& t, const Cells& d) {
    for (std::size_t k = 0; k < 4; ++k)
        if (d[k] < 0.0 || d[k] > t.c[k] + 1e-9)
            throw InvalidInput("imputed count d" + cell_name(k) + " outside [0, c]");

    Cells x, y;
    for (std::size_t k = 0; k < 4; ++k) {
        x[k] = t.a[k] + d[k];
        y[k] = t.b[k] + t.c[k] - d[k];
    }
    const double xs = sum(x);
    const double ys = sum(y);
    const double n = t.n();

    Theta th;
    th.ppv1 = safe_div(x[kCell11] + x[kCell10], t.column_total(kCell11) + t.column_total(kCell10),
                       "PPV1");
    th.ppv2 = safe_div(x[kCell11] + x[kCell01], t.column_total(kCell11) + t.column_total(kCell01),
                       "PPV2");
    th.npv1 = safe_div(y[kCell01] + y[kCell00], t.column_total(kCell01) + t.column_total(kCell00),
                       "NPV1");
    th.npv2 = safe_div(y[kCell10] + y[kCell00], t.column_total(kCell10) + t.column_total(kCell00),
                       "NPV2");
    th.p = safe_div(xs, n, "prevalence");
    th.alpha1 = safe_div(xs * x[kCell11], (x[kCell11] + x[kCell01]) * (x[kCell11] + x[kCell10]),
                         "alpha1");
    th.alpha0 = safe_div(ys * y[kCell11], (y[kCell11] + y[kCell01]) * (y[kCell11] + y[kCell10]),
                         "alpha0");
    return th;
}

Cells e_step(const VerificationTable& t, const Theta& theta) {
    const JointProbs jp = joint_cells_unchecked(theta);
    Cells d{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (t.c[k] == 0.0) {
            d[k] = 0.0;
            continue;
        }
        const double mass = jp.phi[k] + jp.varphi[k];
        if (mass <= 0.0) throw ZeroMass("no probability mass in cell " + cell_name(k));
        d[k] = t.c[k] * jp.phi[k] / mass;
        if (d[k] < 0.0) d[k] = 0.0;
        if (d[k] > t.c[k]) d[k] = t.c[k];
    }
    return d;
}

double log_likelihood(const VerificationTable& t, const Cells& d, const Theta& theta) {
    const JointProbs jp = joint_cells_unchecked(theta);
    double ll = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double w1 = t.a[k] + d[k];
        const double w0 = t.b[k] + t.c[k] - d[k];
        if (w1 > 0.0) {
            if (jp.phi[k] <= 0.0)
                throw LogOfNonpositive("zero probability with positive weight, diseased cell " +
                                       cell_name(k));
            ll += w1 * std::log(jp.phi[k]);
        }
        if (w0 > 0.0) {
            if (jp.varphi[k] <= 0.0)
                throw LogOfNonpositive("zero probability with positive weight, non-diseased cell " +
                                       cell_name(k));
            ll += w0 * std::log(jp.varphi[k]);
        }
    }
    return ll;
}

double observed_loglik(const VerificationTable& t, const Theta& theta) {
    const JointProbs jp = joint_cells_unchecked(theta);
    double ll = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (t.a[k] > 0.0) {
            if (jp.phi[k] <= 0.0)
                throw LogOfNonpositive("zero probability with positive count, diseased cell " +
                                       cell_name(k));
            ll += t.a[k] * std::log(jp.phi[k]);
        }
        if (t.b[k] > 0.0) {
            if (jp.varphi[k] <= 0.0)
                throw LogOfNonpositive("zero probability with positive count, non-diseased cell " +
                                       cell_name(k));
            ll += t.b[k] * std::log(jp.varphi[k]);
        }
        if (t.c[k] > 0.0) {
            const double mass = jp.phi[k] + jp.varphi[k];
            if (mass <= 0.0) throw LogOfNonpositive("unverified cell " + cell_name(k));
            ll += t.c[k] * std::log(mass);
        }
    }
    return ll;
}

EmResult run_em(const VerificationTable& t, const Cells& d0, const EmOptions& opts) {
    t.validate(true);

    EmResult res;
    Cells d = d0;
    Theta theta = m_step(t, d);
    res.theta_history.push_back(theta);
    res.loglik_trajectory.push_back(observed_loglik(t, theta));

    for (int it = 1; it <= opts.max_iter; ++it) {
        d = e_step(t, theta);
        const Theta next = m_step(t, d);
        res.theta_history.push_back(next);
        res.loglik_trajectory.push_back(observed_loglik(t, next));
        double change = 0.0;
        for (std::size_t i = 0; i < Theta::size(); ++i)
            change += std::fabs(next[i] - theta[i]);
        theta = next;
        res.iterations = it;
        if (change < opts.delta) {
            res.converged = true;
            break;
        }
    }

    res.theta_hat = theta;
    res.d_final = d;
    const double pvs[4] = {theta.ppv1, theta.npv1, theta.ppv2, theta.npv2};
    for (double v : pvs)
        if (v <= 0.0 || v >= 1.0) res.boundary = true;
    return res;
}

EmResult run_em(const VerificationTable& t, const EmOptions& opts) {
    return run_em(t, half_unverified(t), opts);
}

}  // namespace pvcomp
