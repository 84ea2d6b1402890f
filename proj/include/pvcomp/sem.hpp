#ifndef PVCOMP_SEM_HPP
#define PVCOMP_SEM_HPP

#include <array>

#include "pvcomp/em.hpp"
#include "pvcomp/matrix.hpp"

namespace pvcomp {

struct SemOptions {
    // An element may stop rescanning once consecutive rate estimates
    // agree to tol (sqrt of the EM delta) and further sweeps no longer
    // improve the agreement.
    double tol = 1e-6;
    double freeze_denom = 1e-11;  // rate estimation ends once theta^(k) is this close to theta-hat
    int max_sweeps = 5000;
};

struct SemResult {
    Matrix i_oc_inv;     // 7x7 inverse complete-data information, symmetric
    Matrix dm;           // 7x7 matrix of componentwise EM convergence rates
    Matrix sigma;        // symmetrized covariance of theta-hat
    Matrix delta_sigma;  // symmetrized increase owed to missing information
    double asymmetry = 0.0;
    std::array<int, 7> dm_iterations{};  // last iterate index used per row
};

/// Inverse of the negated Hessian of the complete-data log-likelihood at
/// theta-hat, holding the final fractional counts fixed.
Matrix complete_info_inverse(const VerificationTable& table, const EmResult& em);

/// Componentwise convergence-rate matrix of the EM map. Each element is
/// the secant slope through successive EM iterates theta^(k), frozen at
/// the k where consecutive slope estimates agree best; wherever the
/// |r^(k+1) - r^(k)| <= tol stop rule is attainable the frozen value
/// satisfies it.
Matrix dm_matrix(const VerificationTable& table, const Theta& theta_hat, const Theta& theta0,
                 const SemOptions& opts = {}, std::array<int, 7>* iterations_out = nullptr);

/// Full covariance assembly: sigma_raw = I_oc^{-1} (I - DM)^{-1},
/// symmetrized, with the asymmetry of the raw product reported.
SemResult sem_covariance(const VerificationTable& table, const EmResult& em,
                         const SemOptions& opts = {});

/// The 4x4 predictive-value block of a 7x7 covariance matrix.
Matrix pv_block(const Matrix& sigma7);

}  // namespace pvcomp

#endif
