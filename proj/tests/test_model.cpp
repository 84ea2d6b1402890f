#include <doctest.h>

#include <cmath>

#include "pvcomp/errors.hpp"
#include "pvcomp/model.hpp"
#include "pvcomp/rng.hpp"

using namespace pvcomp;

namespace {

// feasible parameter vectors drawn through the accuracy map, so the
// predictive-value constraints hold by construction
Theta random_feasible(Rng& rng) {
    const double p = 0.1 + 0.8 * rng.uniform01();
    const double se1 = 0.55 + 0.43 * rng.uniform01();
    const double sp1 = 0.55 + 0.43 * rng.uniform01();
    const double se2 = 0.55 + 0.43 * rng.uniform01();
    const double sp2 = 0.55 + 0.43 * rng.uniform01();
    auto [ppv1, npv1] = pv_from_accuracy(se1, sp1, p);
    auto [ppv2, npv2] = pv_from_accuracy(se2, sp2, p);
    const double a1max = 1.0 / std::max(se1, se2);
    const double a0max = 1.0 / std::max(1.0 - sp1, 1.0 - sp2);
    Theta t{ppv1, npv1, ppv2, npv2, p, 1.0, 1.0};
    t.alpha1 = 1.0 + (a1max - 1.0) * 0.9 * rng.uniform01();
    t.alpha0 = 1.0 + (a0max - 1.0) * 0.9 * rng.uniform01();
    return t;
}

}  // namespace

TEST_CASE("predictive values from accuracy") {
    {
        auto [ppv, npv] = pv_from_accuracy(1.0, 1.0, 0.3);
        CHECK(ppv == 1.0);
        CHECK(npv == 1.0);
    }
    {
        auto [ppv, npv] = pv_from_accuracy(0.8, 0.8, 0.5);
        CHECK(ppv == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(npv == doctest::Approx(0.8).epsilon(1e-14));
    }
    {
        auto [ppv, npv] = pv_from_accuracy(0.85, 0.95, 0.25);
        CHECK(ppv == doctest::Approx(0.85).epsilon(1e-12));
        CHECK(npv == doctest::Approx(0.95).epsilon(1e-12));
    }
}

TEST_CASE("accuracy from the parameter vector") {
    {
        const Theta t{1.0, 1.0, 1.0, 1.0, 0.4, 1.0, 1.0};
        const Accuracy acc = accuracy_from_theta(t);
        CHECK(acc.se1 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(acc.sp1 == doctest::Approx(1.0).epsilon(1e-14));
    }
    {
        const Theta t{0.90, 0.80, 0.85, 0.75, 0.75, 1.0, 1.0};
        const Accuracy acc = accuracy_from_theta(t);
        CHECK(acc.se1 == doctest::Approx(0.943).epsilon(1e-3));
        CHECK(acc.sp1 == doctest::Approx(0.686).epsilon(1e-3));
        CHECK(acc.se2 == doctest::Approx(0.944).epsilon(1e-3));
        CHECK(acc.sp2 == doctest::Approx(0.50).epsilon(1e-3));
    }
    CHECK_THROWS_AS(accuracy_from_theta(Theta{0.3, 0.9, 0.8, 0.9, 0.5, 1, 1}), DegenerateTest);
    CHECK_THROWS_AS(accuracy_from_theta(Theta{0.6, 0.3, 0.8, 0.9, 0.5, 1, 1}), DegenerateTest);
}

TEST_CASE("accuracy and predictive values are inverse maps") {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const Theta t = random_feasible(rng);
        const Accuracy acc = accuracy_from_theta(t);
        auto [ppv1, npv1] = pv_from_accuracy(acc.se1, acc.sp1, t.p);
        auto [ppv2, npv2] = pv_from_accuracy(acc.se2, acc.sp2, t.p);
        CHECK(std::fabs(ppv1 - t.ppv1) < 1e-12);
        CHECK(std::fabs(npv1 - t.npv1) < 1e-12);
        CHECK(std::fabs(ppv2 - t.ppv2) < 1e-12);
        CHECK(std::fabs(npv2 - t.npv2) < 1e-12);
    }
}

TEST_CASE("independence case gives product cells") {
    Theta t{0.8, 0.9, 0.75, 0.85, 0.4, 1.0, 1.0};
    const Accuracy acc = accuracy_from_theta(t);
    const JointProbs jp = joint_probabilities(t);
    CHECK(jp.phi[kCell11] == doctest::Approx(t.p * acc.se1 * acc.se2).epsilon(1e-13));
    CHECK(jp.varphi[kCell00] == doctest::Approx(t.q() * acc.sp1 * acc.sp2).epsilon(1e-13));
}

TEST_CASE("joint probabilities satisfy the dependence identity and normalization") {
    Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const Theta t = random_feasible(rng);
        const Accuracy acc = accuracy_from_theta(t);
        const JointProbs jp = joint_probabilities(t);
        // phi_11 / (p Se1 Se2) recovers alpha1
        CHECK(jp.phi[kCell11] / (t.p * acc.se1 * acc.se2) == doctest::Approx(t.alpha1).epsilon(1e-10));
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(jp.phi[k] >= 0.0);
            CHECK(jp.varphi[k] >= 0.0);
            total += jp.phi[k] + jp.varphi[k];
        }
        CHECK(std::fabs(total - 1.0) < 1e-12);
        // single-test margins
        CHECK(jp.phi[kCell11] + jp.phi[kCell10] == doctest::Approx(t.p * acc.se1).epsilon(1e-12));
        CHECK(jp.phi[kCell11] + jp.phi[kCell01] == doctest::Approx(t.p * acc.se2).epsilon(1e-12));
        CHECK(jp.varphi[kCell01] + jp.varphi[kCell00] ==
              doctest::Approx(t.q() * acc.sp1).epsilon(1e-12));
        CHECK(jp.varphi[kCell10] + jp.varphi[kCell00] ==
              doctest::Approx(t.q() * acc.sp2).epsilon(1e-12));
    }
}

TEST_CASE("alpha outside its bounds is rejected") {
    Theta t{0.85, 0.95, 0.85, 0.95, 0.25, 1.0, 1.0};
    auto [a1max, a0max] = alpha_bounds(t.ppv1, t.npv1, t.ppv2, t.npv2, t.p);
    t.alpha1 = a1max * 1.05;
    CHECK_THROWS_AS(joint_probabilities(t), InfeasibleAlpha);
    t.alpha1 = 1.0;
    t.alpha0 = a0max * 1.05;
    CHECK_THROWS_AS(joint_probabilities(t), InfeasibleAlpha);
}

TEST_CASE("observable cells with full verification collapse to the joint cells") {
    const Theta t{0.8, 0.9, 0.75, 0.85, 0.4, 1.02, 1.3};
    const JointProbs jp = joint_probabilities(t);
    const CellProbs cp = cell_probabilities(t, Lambdas{});
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(cp.zeta[k] == 0.0);
        CHECK(cp.xi[k] == doctest::Approx(jp.phi[k]).epsilon(1e-14));
        CHECK(cp.psi[k] == doctest::Approx(jp.varphi[k]).epsilon(1e-14));
    }
}

TEST_CASE("unverified mass obeys the odds identity") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const Theta t = random_feasible(rng);
        Lambdas lam;
        for (std::size_t k = 0; k < 4; ++k) lam.lam[k] = 0.05 + 0.95 * rng.uniform01();
        const CellProbs cp = cell_probabilities(t, lam);
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            total += cp.xi[k] + cp.psi[k] + cp.zeta[k];
            if (cp.xi[k] + cp.psi[k] > 0.0)
                CHECK(cp.zeta[k] / (cp.xi[k] + cp.psi[k]) ==
                      doctest::Approx((1.0 - lam.lam[k]) / lam.lam[k]).epsilon(1e-10));
        }
        CHECK(std::fabs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("a published null configuration is feasible") {
    const Theta t{0.85, 0.95, 0.85, 0.95, 0.25, 1.09, 10.50};
    Lambdas lam;
    lam.lam = {0.50, 0.30, 0.30, 0.05};
    const CellProbs cp = cell_probabilities(t, lam);
    double total = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(cp.xi[k] >= 0.0);
        CHECK(cp.psi[k] >= 0.0);
        CHECK(cp.zeta[k] >= 0.0);
        total += cp.xi[k] + cp.psi[k] + cp.zeta[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alpha bounds") {
    {
        // perfect sensitivity forces alpha1 to one
        auto [a1max, a0max] = alpha_bounds(1.0, 1.0, 1.0, 1.0, 0.3);
        CHECK(a1max == doctest::Approx(1.0).epsilon(1e-12));
        (void)a0max;
    }
    {
        auto [a1max, a0max] = alpha_bounds(0.85, 0.95, 0.85, 0.95, 0.25);
        CHECK(a1max == doctest::Approx(1.0 / 0.85).epsilon(1e-12));
        CHECK(a0max == doctest::Approx(20.0).epsilon(1e-10));
        CHECK(1.09 < a1max);
        CHECK(1.13 < a1max);
        CHECK(10.50 < a0max);
        CHECK(15.25 < a0max);
    }
}
