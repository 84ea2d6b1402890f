#ifndef PVCOMP_TESTS_FIXTURES_HPP
#define PVCOMP_TESTS_FIXTURES_HPP

#include <cmath>

#include "pvcomp/model.hpp"
#include "pvcomp/rng.hpp"
#include "pvcomp/tables.hpp"

namespace pvcomp::fixtures {

/// Two cognitive screening tests for dementia against a clinical
/// assessment, 588 subjects, gold standard applied to a subset.
inline VerificationTable dementia_table() {
    VerificationTable t;
    t.a = {31, 5, 3, 1};
    t.b = {25, 10, 19, 55};
    t.c = {22, 6, 65, 346};
    return t;
}

/// The verified subjects only, as a complete 2x4 table.
inline CompleteTable dementia_verified() {
    CompleteTable t;
    t.x = {31, 5, 3, 1};
    t.y = {25, 10, 19, 55};
    return t;
}

inline Theta random_feasible_theta(Rng& rng, double se_lo = 0.55, double se_hi = 0.98) {
    const double p = 0.1 + 0.8 * rng.uniform01();
    const double se1 = se_lo + (se_hi - se_lo) * rng.uniform01();
    const double sp1 = se_lo + (se_hi - se_lo) * rng.uniform01();
    const double se2 = se_lo + (se_hi - se_lo) * rng.uniform01();
    const double sp2 = se_lo + (se_hi - se_lo) * rng.uniform01();
    auto [ppv1, npv1] = pv_from_accuracy(se1, sp1, p);
    auto [ppv2, npv2] = pv_from_accuracy(se2, sp2, p);
    const double a1max = 1.0 / std::max(se1, se2);
    const double a0max = 1.0 / std::max(1.0 - sp1, 1.0 - sp2);
    Theta t{ppv1, npv1, ppv2, npv2, p, 1.0, 1.0};
    t.alpha1 = 1.0 + (a1max - 1.0) * 0.9 * rng.uniform01();
    t.alpha0 = 1.0 + (a0max - 1.0) * 0.9 * rng.uniform01();
    return t;
}

}  // namespace pvcomp::fixtures

#endif
