#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pvcomp/em.hpp"
#include "pvcomp/errors.hpp"

using namespace pvcomp;
using fixtures::dementia_table;

TEST_CASE("closed-form estimates on a fully verified table") {
    VerificationTable t;
    t.a = {10, 5, 5, 5};
    t.b = {5, 5, 5, 10};
    t.c = {0, 0, 0, 0};
    const Theta th = m_step(t, {0, 0, 0, 0});
    CHECK(th.ppv1 == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(th.p == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(th.alpha1 == doctest::Approx(25.0 * 10.0 / (15.0 * 15.0)).epsilon(1e-14));
}

TEST_CASE("imputing every unverified subject as diseased moves the prevalence to (a+c)/n") {
    const VerificationTable t = dementia_table();
    const Theta th = m_step(t, t.c);
    CHECK(th.p == doctest::Approx((sum(t.a) + sum(t.c)) / t.n()).epsilon(1e-14));
}

TEST_CASE("NPV1 uses the negative-first-test columns including unverified counts") {
    const VerificationTable t = dementia_table();
    const Cells d = half_unverified(t);
    const Theta th = m_step(t, d);
    // hand sum: y cells of columns 01 and 00 over those column totals
    const double num = (t.b[2] + t.c[2] - d[2]) + (t.b[3] + t.c[3] - d[3]);
    const double den = t.column_total(2) + t.column_total(3);
    CHECK(th.npv1 == doctest::Approx(num / den).epsilon(1e-14));
}

TEST_CASE("expectation step splits cells by the conditional disease probability") {
    const VerificationTable t = dementia_table();

    SUBCASE("no unverified subjects means nothing to impute") {
        VerificationTable full = t;
        full.c = {0, 0, 0, 0};
        const Cells d = e_step(full, m_step(full, {0, 0, 0, 0}));
        for (double v : d) CHECK(v == 0.0);
    }

    SUBCASE("a cell with equal diseased and non-diseased mass splits in half") {
        // p chosen so both-positive cells carry equal mass:
        // p s^2 = (1-p)(1-s)^2 at s = 0.7
        const double s = 0.7;
        const double p = (1 - s) * (1 - s) / (s * s + (1 - s) * (1 - s));
        auto [ppv, npv] = pv_from_accuracy(s, s, p);
        const Theta th{ppv, npv, ppv, npv, p, 1.0, 1.0};
        const Cells d = e_step(t, th);
        CHECK(d[kCell11] == doctest::Approx(t.c[kCell11] / 2.0).epsilon(1e-12));
    }

    SUBCASE("split fractions match the Bayes rule on the joint cells") {
        Rng rng(5);
        for (int rep = 0; rep < 100; ++rep) {
            const Theta th = fixtures::random_feasible_theta(rng);
            const JointProbs jp = joint_probabilities(th);
            const Cells d = e_step(t, th);
            for (std::size_t k = 0; k < 4; ++k) {
                CHECK(d[k] >= 0.0);
                CHECK(d[k] <= t.c[k]);
                const double cond = jp.phi[k] / (jp.phi[k] + jp.varphi[k]);
                if (t.c[k] > 0.0)
                    CHECK(d[k] / t.c[k] == doctest::Approx(cond).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("complete-data likelihood at its own maximizer is the multinomial plug-in") {
    const VerificationTable t = dementia_table();
    const Cells d = half_unverified(t);
    const Theta th = m_step(t, d);
    const double ll = log_likelihood(t, d, th);
    double plug_in = 0.0;
    const double n = t.n();
    for (std::size_t k = 0; k < 4; ++k) {
        const double x = t.a[k] + d[k];
        const double y = t.b[k] + t.c[k] - d[k];
        if (x > 0) plug_in += x * std::log(x / n);
        if (y > 0) plug_in += y * std::log(y / n);
    }
    CHECK(ll == doctest::Approx(plug_in).epsilon(1e-12));
}

TEST_CASE("likelihood value is invariant to swapping the test labels") {
    const VerificationTable t = dementia_table();
    const Cells d = half_unverified(t);
    const Theta th = m_step(t, d);

    VerificationTable swapped = t;
    std::swap(swapped.a[kCell10], swapped.a[kCell01]);
    std::swap(swapped.b[kCell10], swapped.b[kCell01]);
    std::swap(swapped.c[kCell10], swapped.c[kCell01]);
    Cells d_swapped = d;
    std::swap(d_swapped[kCell10], d_swapped[kCell01]);
    Theta th_swapped = th;
    std::swap(th_swapped.ppv1, th_swapped.ppv2);
    std::swap(th_swapped.npv1, th_swapped.npv2);

    CHECK(log_likelihood(swapped, d_swapped, th_swapped) ==
          doctest::Approx(log_likelihood(t, d, th)).epsilon(1e-13));
}

TEST_CASE("near-uniform cells give a likelihood near -n log 8") {
    // the exactly uniform table is degenerate in this parameterization,
    // so probe a hair away from it
    const double s = 0.5 + 1e-7;
    const double p = 0.5;
    auto [ppv, npv] = pv_from_accuracy(s, s, p);
    const Theta th{ppv, npv, ppv, npv, p, 1.0, 1.0};
    VerificationTable t;
    t.a = {5, 5, 5, 5};
    t.b = {5, 5, 5, 5};
    t.c = {2, 2, 2, 2};
    const double ll = log_likelihood(t, {1, 1, 1, 1}, th);
    CHECK(ll == doctest::Approx(-t.n() * std::log(8.0)).epsilon(1e-9));
}

TEST_CASE("estimation run on the dementia study") {
    const VerificationTable t = dementia_table();
    const EmResult em = run_em(t);
    REQUIRE(em.converged);
    CHECK_FALSE(em.boundary);

    CHECK(em.theta_hat.ppv1 == doctest::Approx(0.507).epsilon(2e-3));
    CHECK(em.theta_hat.npv1 == doctest::Approx(0.961).epsilon(1e-3));
    CHECK(em.theta_hat.ppv2 == doctest::Approx(0.334).epsilon(3e-3));
    CHECK(em.theta_hat.npv2 == doctest::Approx(0.966).epsilon(1e-3));
    CHECK(em.theta_hat.p == doctest::Approx(0.1177).epsilon(1e-3));

    CHECK(em.iterations >= 180);
    CHECK(em.iterations <= 190);

    SUBCASE("log-likelihood trajectory never decreases") {
        for (std::size_t i = 1; i < em.loglik_trajectory.size(); ++i)
            CHECK(em.loglik_trajectory[i] >= em.loglik_trajectory[i - 1] - 1e-9);
    }

    SUBCASE("the stop certificate bounds the final log-likelihood step") {
        const auto& traj = em.loglik_trajectory;
        CHECK(std::fabs(traj.back() - traj[traj.size() - 2]) < 1e-12);
    }

    SUBCASE("converged point is a fixed point of the update pair") {
        const Cells d = e_step(t, em.theta_hat);
        const Theta next = m_step(t, d);
        for (std::size_t i = 0; i < 7; ++i)
            CHECK(std::fabs(next[i] - em.theta_hat[i]) < 1e-10);
    }

    SUBCASE("the solution does not depend on the starting split") {
        const EmResult from_zero = run_em(t, Cells{0, 0, 0, 0});
        const EmResult from_full = run_em(t, t.c);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(std::fabs(from_zero.theta_hat[i] - em.theta_hat[i]) < 1e-6);
            CHECK(std::fabs(from_full.theta_hat[i] - em.theta_hat[i]) < 1e-6);
        }
    }

    SUBCASE("no nearby parameter beats the maximizer") {
        Rng rng(31);
        const double base = observed_loglik(t, em.theta_hat);
        int checked = 0;
        while (checked < 200) {
            Theta probe = em.theta_hat;
            for (std::size_t i = 0; i < 7; ++i)
                probe.set(i, probe[i] + (rng.uniform01() - 0.5) * 2e-3);
            try {
                const double ll = observed_loglik(t, probe);
                CHECK(ll <= base + 1e-9);
                ++checked;
            } catch (const Error&) {
                // infeasible probe; draw another
            }
        }
    }
}

TEST_CASE("fully verified table converges in one iteration to the closed form") {
    VerificationTable t;
    t.a = {10, 5, 5, 5};
    t.b = {5, 5, 5, 10};
    t.c = {0, 0, 0, 0};
    const EmResult em = run_em(t);
    REQUIRE(em.converged);
    CHECK(em.iterations == 1);
    const Theta direct = m_step(t, {0, 0, 0, 0});
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(em.theta_hat[i] == doctest::Approx(direct[i]).epsilon(1e-14));
}

TEST_CASE("iteration cap reports non-convergence") {
    EmOptions opts;
    opts.max_iter = 3;
    const EmResult em = run_em(dementia_table(), opts);
    CHECK_FALSE(em.converged);
    CHECK(em.iterations == 3);
}

TEST_CASE("zero column total is rejected") {
    VerificationTable t;
    t.a = {10, 5, 5, 0};
    t.b = {5, 5, 5, 0};
    t.c = {2, 2, 2, 0};
    CHECK_THROWS_AS(run_em(t), DegenerateCell);
}
