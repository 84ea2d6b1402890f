#ifndef PVCOMP_MODEL_HPP
#define PVCOMP_MODEL_HPP

#include <array>

#include "pvcomp/tables.hpp"

namespace pvcomp {

/// The seven-parameter vector (PPV1, NPV1, PPV2, NPV2, p, alpha1, alpha0).
/// alpha1/alpha0 are the dependence covariances between the two tests
/// among diseased / non-diseased subjects; 1 means conditional
/// independence.
struct Theta {
    double ppv1, npv1, ppv2, npv2;
    double p;
    double alpha1, alpha0;

    double q() const { return 1.0 - p; }
    double youden1() const { return ppv1 + npv1 - 1.0; }
    double youden2() const { return ppv2 + npv2 - 1.0; }

    double operator[](std::size_t i) const;
    void set(std::size_t i, double v);

    static constexpr std::size_t size() { return 7; }
};

struct Accuracy {
    double se1, sp1, se2, sp2;
};

/// Verification probabilities P(V=1 | T1=i, T2=j), cell order as Cells.
struct Lambdas {
    Cells lam{1.0, 1.0, 1.0, 1.0};
};

/// Joint probabilities of (T1, T2, D): phi for D=1, varphi for D=0.
struct JointProbs {
    Cells phi{};
    Cells varphi{};
    double mass(std::size_t k) const { return phi[k] + varphi[k]; }
};

/// Probabilities of the 12 observable cells: xi (verified diseased),
/// psi (verified non-diseased), zeta (unverified).
struct CellProbs {
    Cells xi{};
    Cells psi{};
    Cells zeta{};
    std::array<double, 12> flat() const;
};

/// Predictive values from (sensitivity, specificity, prevalence).
std::pair<double, double> pv_from_accuracy(double se, double sp, double p);

/// Sensitivities and specificities implied by a Theta. Throws
/// DegenerateTest when a Youden index is non-positive or a predictive
/// value does not exceed the corresponding base rate.
Accuracy accuracy_from_theta(const Theta& theta);

/// The eight joint cell probabilities. Computed in the accuracy
/// parameterization with the dependence terms
/// eps1 = Se1*Se2*(alpha1 - 1), eps0 = (1-Sp1)*(1-Sp2)*(alpha0 - 1).
/// Throws InfeasibleAlpha if any cell comes out negative.
JointProbs joint_probabilities(const Theta& theta);

/// The twelve observable cell probabilities given verification rates.
CellProbs cell_probabilities(const Theta& theta, const Lambdas& lam);

/// Upper bounds (alpha1_max, alpha0_max) = (1/max(Se1,Se2),
/// 1/max(1-Sp1,1-Sp2)); the lower bound for both is 1.
std::pair<double, double> alpha_bounds(double ppv1, double npv1, double ppv2, double npv2,
                                       double p);

}  // namespace pvcomp

#endif
