#ifndef PVCOMP_EM_HPP
#define PVCOMP_EM_HPP

#include <vector>

#include "pvcomp/model.hpp"
#include "pvcomp/tables.hpp"

namespace pvcomp {

struct EmOptions {
    double delta = 1e-12;
    int max_iter = 10000;
};

struct EmResult {
    Theta theta_hat{};
    Cells d_final{};
    int iterations = 0;
    std::vector<double> loglik_trajectory;  // observed-data log-likelihood per iteration
    std::vector<Theta> theta_history;       // iterates theta^(0), theta^(1), ...
    bool converged = false;
    bool boundary = false;  // some predictive-value estimate hit 0 or 1
};

/// Closed-form maximizers of the complete-data likelihood given the
/// imputed diseased counts d. Throws DegenerateCell on a zero
/// denominator.
Theta m_step(const VerificationTable& table, const Cells& d);

/// Expected diseased counts among the unverified,
/// d_k = c_k * phi_k / (phi_k + varphi_k). Throws ZeroMass when a cell
/// with c_k > 0 has no probability mass.
Cells e_step(const VerificationTable& table, const Theta& theta);

/// Complete-data log-likelihood with weights (a + d) and (b + c - d),
/// convention 0*log(0) = 0. Throws LogOfNonpositive when a positive
/// weight meets a non-positive probability.
double log_likelihood(const VerificationTable& table, const Cells& d, const Theta& theta);

/// Observed-data log-likelihood: a*log(phi) + b*log(varphi)
/// + c*log(phi + varphi). The verification factors are omitted; they do
/// not depend on theta.
double observed_loglik(const VerificationTable& table, const Theta& theta);

/// Full EM run from initial imputed counts d0 (default c/2). Stops when
/// the L1 change of the parameter vector falls below delta, which on
/// convergence leaves successive log-likelihoods far closer than delta.
EmResult run_em(const VerificationTable& table, const Cells& d0, const EmOptions& opts = {});
EmResult run_em(const VerificationTable& table, const EmOptions& opts = {});

inline Cells half_unverified(const VerificationTable& t) {
    return {0.5 * t.c[0], 0.5 * t.c[1], 0.5 * t.c[2], 0.5 * t.c[3]};
}

}  // namespace pvcomp

#endif
