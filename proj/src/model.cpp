#include "pvcomp/model.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

double Theta::operator[](std::size_t i) const {
    switch (i) {
        case 0: return ppv1;
        case 1: return npv1;
        case 2: return ppv2;
        case 3: return npv2;
        case 4: return p;
        case 5: return alpha1;
        case 6: return alpha0;
    }
    throw InvalidInput("Theta index out of range");
}

void Theta::set(std::size_t i, double v) {
    switch (i) {
        case 0: ppv1 = v; return;
        case 1: npv1 = v; return;
        case 2: ppv2 = v; return;
        case 3: npv2 = v; return;
        case 4: p = v; return;
        case 5: alpha1 = v; return;
        case 6: alpha0 = v; return;
    }
    throw InvalidInput("Theta index out of range");
}

std::array<double, 12> CellProbs::flat() const {
    std::array<double, 12> out;
    for (std::size_t k = 0; k < 4; ++k) {
        out[k] = xi[k];
        out[4 + k] = psi[k];
        out[8 + k] = zeta[k];
    }
    return out;
}

std::pair<double, double> pv_from_accuracy(double se, double sp, double p) {
    const double q = 1.0 - p;
    const double ppv = p * se / (p * se + q * (1.0 - sp));
    const double npv = q * sp / (p * (1.0 - se) + q * sp);
    return {ppv, npv};
}

Accuracy accuracy_from_theta(const Theta& t) {
    const double q = t.q();
    const double y1 = t.youden1();
    const double y2 = t.youden2();
    if (!(t.p > 0.0 && t.p < 1.0)) throw DegenerateTest("prevalence outside (0,1)");
    if (y1 <= 0.0 || y2 <= 0.0) throw DegenerateTest("Youden index not positive");
    if (t.ppv1 <= t.p || t.ppv2 <= t.p) throw DegenerateTest("PPV does not exceed prevalence");
    if (t.npv1 <= q || t.npv2 <= q) throw DegenerateTest("NPV does not exceed 1 - prevalence");
    Accuracy acc;
    acc.se1 = t.ppv1 * (t.npv1 - q) / (t.p * y1);
    acc.se2 = t.ppv2 * (t.npv2 - q) / (t.p * y2);
    acc.sp1 = t.npv1 * (t.ppv1 - t.p) / (q * y1);
    acc.sp2 = t.npv2 * (t.ppv2 - t.p) / (q * y2);
    return acc;
}

JointProbs joint_probabilities(const Theta& t) {
    const Accuracy acc = accuracy_from_theta(t);
    const double q = t.q();
    const double eps1 = acc.se1 * acc.se2 * (t.alpha1 - 1.0);
    const double eps0 = (1.0 - acc.sp1) * (1.0 - acc.sp2) * (t.alpha0 - 1.0);
    JointProbs jp;
    for (std::size_t k = 0; k < 4; ++k) {
        const double sgn = (kT1[k] == kT2[k]) ? 1.0 : -1.0;
        const double s1 = kT1[k] ? acc.se1 : 1.0 - acc.se1;
        const double s2 = kT2[k] ? acc.se2 : 1.0 - acc.se2;
        jp.phi[k] = t.p * (s1 * s2 + sgn * eps1);
        const double u1 = kT1[k] ? 1.0 - acc.sp1 : acc.sp1;
        const double u2 = kT2[k] ? 1.0 - acc.sp2 : acc.sp2;
        jp.varphi[k] = q * (u1 * u2 + sgn * eps0);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        // tolerate tiny negative round-off at a feasibility boundary
        if (jp.phi[k] < 0.0) {
            if (jp.phi[k] < -1e-14) throw InfeasibleAlpha("negative diseased cell " + cell_name(k));
            jp.phi[k] = 0.0;
        }
        if (jp.varphi[k] < 0.0) {
            if (jp.varphi[k] < -1e-14)
                throw InfeasibleAlpha("negative non-diseased cell " + cell_name(k));
            jp.varphi[k] = 0.0;
        }
    }
    return jp;
}

CellProbs cell_probabilities(const Theta& t, const Lambdas& lam) {
    for (double l : lam.lam)
        if (!(l > 0.0 && l <= 1.0)) throw InvalidInput("verification probability outside (0,1]");
    const JointProbs jp = joint_probabilities(t);
    CellProbs cp;
    for (std::size_t k = 0; k < 4; ++k) {
        cp.xi[k] = lam.lam[k] * jp.phi[k];
        cp.psi[k] = lam.lam[k] * jp.varphi[k];
        cp.zeta[k] = (1.0 - lam.lam[k]) * (jp.phi[k] + jp.varphi[k]);
    }
    return cp;
}

std::pair<double, double> alpha_bounds(double ppv1, double npv1, double ppv2, double npv2,
                                       double p) {
    Theta t{ppv1, npv1, ppv2, npv2, p, 1.0, 1.0};
    const Accuracy acc = accuracy_from_theta(t);
    const double a1max = 1.0 / std::max(acc.se1, acc.se2);
    const double a0max = 1.0 / std::max(1.0 - acc.sp1, 1.0 - acc.sp2);
    return {a1max, a0max};
}

}  // namespace pvcomp
