#include "pvcomp/sem.hpp"

#include <cmath>
#include <limits>

#include "pvcomp/errors.hpp"
#include "pvcomp/hessian.hpp"

namespace pvcomp {

namespace {

Theta theta_from_vec(const std::vector<double>& v) {
    return Theta{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

Theta em_map(const VerificationTable& t, const Theta& theta) {
    return m_step(t, e_step(t, theta));
}

}  // namespace

Matrix complete_info_inverse(const VerificationTable& t, const EmResult& em) {
    if (!em.converged) throw NotConverged("EM did not converge; information matrix undefined");
    if (em.boundary) throw BoundaryEstimate("estimate on the boundary; information matrix undefined");

    const Cells d = em.d_final;
    auto loglik = [&](const std::vector<double>& v) {
        return log_likelihood(t, d, theta_from_vec(v));
    };
    std::vector<double> x0(7);
    for (std::size_t i = 0; i < 7; ++i) x0[i] = em.theta_hat[i];
    Matrix hess = numeric_hessian(loglik, x0);
    Matrix neg(7, 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) neg(i, j) = -hess(i, j);
    return invert(neg).symmetrized();
}

Matrix dm_matrix(const VerificationTable& t, const Theta& theta_hat, const Theta& theta0,
                 const SemOptions& opts, std::array<int, 7>* iterations_out) {
    // Per-element secant slopes through successive EM iterates. Each
    // element keeps the estimate whose consecutive-sweep agreement is
    // best; an element stops rescanning once it has stabilized to tol
    // and its agreement has started degrading (the rounding regime).
    struct ElementState {
        double best_diff = std::numeric_limits<double>::infinity();
        double prev_rate = std::numeric_limits<double>::quiet_NaN();
        double prev_diff = std::numeric_limits<double>::infinity();
        int rising = 0;
        bool done = false;
    };
    Matrix rates(7, 7);  // zero when a component never moves: no missing information there
    ElementState state[7][7];
    std::array<int, 7> last_k{};
    std::array<bool, 7> row_done{};

    Theta theta_k = theta0;
    int k = 0;
    while (k < opts.max_sweeps) {
        ++k;
        bool any_active = false;
        for (std::size_t i = 0; i < 7; ++i) {
            if (row_done[i]) continue;
            bool row_active = false;
            for (std::size_t j = 0; j < 7; ++j) row_active = row_active || !state[i][j].done;
            if (!row_active) {
                row_done[i] = true;
                continue;
            }
            const double den = theta_k[i] - theta_hat[i];
            if (std::fabs(den) < opts.freeze_denom) {
                row_done[i] = true;
                continue;
            }
            any_active = true;
            Theta probe = theta_hat;
            probe.set(i, theta_k[i]);
            Theta mapped{};
            try {
                mapped = em_map(t, probe);
            } catch (const Error&) {
                continue;  // probe outside the feasible region; later iterates are closer
            }
            last_k[i] = k;
            for (std::size_t j = 0; j < 7; ++j) {
                ElementState& el = state[i][j];
                if (el.done) continue;
                const double r = (mapped[j] - theta_hat[j]) / den;
                if (!std::isnan(el.prev_rate)) {
                    const double diff = std::fabs(r - el.prev_rate);
                    if (diff < el.best_diff) {
                        el.best_diff = diff;
                        rates(i, j) = r;
                    }
                    el.rising = diff > el.prev_diff ? el.rising + 1 : 0;
                    if (el.best_diff <= opts.tol && el.rising >= 2) el.done = true;
                    el.prev_diff = diff;
                }
                el.prev_rate = r;
            }
        }
        if (!any_active) break;
        try {
            theta_k = em_map(t, theta_k);
        } catch (const Error&) {
            break;  // iterate sequence exhausted
        }
    }

    if (k >= opts.max_sweeps) {
        for (std::size_t i = 0; i < 7; ++i)
            if (!row_done[i])
                throw DmNotConverged("rate row " + std::to_string(i) + " did not stabilize");
    }
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j)
            if (std::isinf(state[i][j].best_diff) && !std::isnan(state[i][j].prev_rate))
                rates(i, j) = state[i][j].prev_rate;  // single usable sweep; keep its estimate

    if (iterations_out) *iterations_out = last_k;
    return rates;
}

SemResult sem_covariance(const VerificationTable& t, const EmResult& em, const SemOptions& opts) {
    SemResult out;
    out.i_oc_inv = complete_info_inverse(t, em);

    // theta^(0) for the rate sweep: the state after one EM iteration from
    // d0 = c/2, i.e. the second entry of the stored iterate history.
    const Theta theta0 = em.theta_history.size() > 1 ? em.theta_history[1] : em.theta_hat;
    out.dm = dm_matrix(t, em.theta_hat, theta0, opts, &out.dm_iterations);

    const Matrix m_inv = invert(Matrix::identity(7) - out.dm);
    const Matrix sigma_raw = out.i_oc_inv * m_inv;
    out.asymmetry = sigma_raw.asymmetry();
    out.sigma = sigma_raw.symmetrized();
    out.delta_sigma = (sigma_raw - out.i_oc_inv).symmetrized();
    return out;
}

Matrix pv_block(const Matrix& sigma7) {
    Matrix out(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out(i, j) = sigma7(i, j);
    return out;
}

}  // namespace pvcomp
