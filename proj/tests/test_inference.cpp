#include <doctest.h>

#include <cmath>

#include "pvcomp/errors.hpp"
#include "pvcomp/inference.hpp"
#include "pvcomp/rng.hpp"

using namespace pvcomp;

namespace {

PvInference sample_inference() {
    PvInference inf;
    inf.eta = {0.55, 0.90, 0.40, 0.88};
    inf.sigma = Matrix{{4e-3, 0.0, 1e-3, -2e-4},
                       {0.0, 5e-4, -1e-4, 2e-4},
                       {1e-3, -1e-4, 3e-3, 0.0},
                       {-2e-4, 2e-4, 0.0, 4e-4}};
    inf.n = 500;
    return inf;
}

PvInference swapped(const PvInference& inf) {
    PvInference out = inf;
    std::swap(out.eta[0], out.eta[2]);
    std::swap(out.eta[1], out.eta[3]);
    // permute rows/cols (0<->2, 1<->3)
    const std::size_t perm[4] = {2, 3, 0, 1};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out.sigma(i, j) = inf.sigma(perm[i], perm[j]);
    return out;
}

}  // namespace

TEST_CASE("equal predictive values give a zero statistic") {
    PvInference inf = sample_inference();
    inf.eta = {0.5, 0.9, 0.5, 0.9};
    auto [q2, p] = global_test(inf);
    CHECK(q2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(p == 1.0);
    const auto z = individual_tests(inf);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == 1.0);
    CHECK(z[3] == 1.0);
}

TEST_CASE("global statistic is invariant to swapping the two tests") {
    const PvInference inf = sample_inference();
    auto [q2a, pa] = global_test(inf);
    auto [q2b, pb] = global_test(swapped(inf));
    CHECK(q2a == doctest::Approx(q2b).epsilon(1e-12));
    CHECK(pa == doctest::Approx(pb).epsilon(1e-12));
}

TEST_CASE("individual statistics flip sign under a swap, p-values unchanged") {
    const PvInference inf = sample_inference();
    const auto z1 = individual_tests(inf);
    const auto z2 = individual_tests(swapped(inf));
    CHECK(z1[0] == doctest::Approx(-z2[0]).epsilon(1e-12));
    CHECK(z1[1] == doctest::Approx(-z2[1]).epsilon(1e-12));
    CHECK(z1[2] == doctest::Approx(z2[2]).epsilon(1e-12));
    CHECK(z1[3] == doctest::Approx(z2[3]).epsilon(1e-12));
}

TEST_CASE("uncorrelated contrasts make the global statistic a sum of squares") {
    PvInference inf;
    inf.eta = {0.6, 0.9, 0.5, 0.86};
    // Built so the two contrasts have zero covariance:
    // cov = s01 - s03 - s21 + s23 = 0 with all four terms zero.
    inf.sigma = Matrix{{3e-3, 0.0, 5e-4, 0.0},
                       {0.0, 6e-4, 0.0, 1e-4},
                       {5e-4, 0.0, 2e-3, 0.0},
                       {0.0, 1e-4, 0.0, 5e-4}};
    inf.n = 400;
    auto [q2, p] = global_test(inf);
    const auto z = individual_tests(inf);
    CHECK(q2 == doctest::Approx(z[0] * z[0] + z[1] * z[1]).epsilon(1e-12));
    (void)p;
}

TEST_CASE("repeat evaluation is bit-identical") {
    const PvInference inf = sample_inference();
    auto [q2a, pa] = global_test(inf);
    auto [q2b, pb] = global_test(inf);
    CHECK(q2a == q2b);
    CHECK(pa == pb);
}

TEST_CASE("multiplicity adjustments") {
    SUBCASE("published example rejects only the first hypothesis") {
        for (auto method : {AdjustMethod::bonferroni, AdjustMethod::holm}) {
            const Decisions d = adjust(0.001, 0.718, method, 0.05);
            CHECK(d.reject_ppv);
            CHECK_FALSE(d.reject_npv);
        }
    }
    SUBCASE("both moderately small p-values fail both procedures") {
        const Decisions b = adjust(0.03, 0.04, AdjustMethod::bonferroni, 0.05);
        CHECK_FALSE(b.reject_ppv);
        CHECK_FALSE(b.reject_npv);
        const Decisions h = adjust(0.03, 0.04, AdjustMethod::holm, 0.05);
        CHECK_FALSE(h.reject_ppv);
        CHECK_FALSE(h.reject_npv);
    }
    SUBCASE("step-down rejects the second hypothesis where the single-step cannot") {
        const Decisions b = adjust(0.01, 0.04, AdjustMethod::bonferroni, 0.05);
        CHECK(b.reject_ppv);
        CHECK_FALSE(b.reject_npv);
        const Decisions h = adjust(0.01, 0.04, AdjustMethod::holm, 0.05);
        CHECK(h.reject_ppv);
        CHECK(h.reject_npv);
    }
    SUBCASE("step-down rejections contain the single-step rejections") {
        Rng rng(99);
        for (int rep = 0; rep < 10000; ++rep) {
            const double p1 = rng.uniform01();
            const double p2 = rng.uniform01();
            const Decisions b = adjust(p1, p2, AdjustMethod::bonferroni, 0.05);
            const Decisions h = adjust(p1, p2, AdjustMethod::holm, 0.05);
            if (b.reject_ppv) CHECK(h.reject_ppv);
            if (b.reject_npv) CHECK(h.reject_npv);
        }
    }
}

TEST_CASE("difference intervals") {
    const PvInference inf = sample_inference();
    auto [ci_p, ci_n] = difference_cis(inf, 0.95);
    const double se_p = std::sqrt(inf.sigma(0, 0) + inf.sigma(2, 2) - 2 * inf.sigma(0, 2));
    CHECK(ci_p.hi - ci_p.lo == doctest::Approx(2 * 1.959964 * se_p).epsilon(1e-6));
    CHECK(0.5 * (ci_p.lo + ci_p.hi) == doctest::Approx(0.15).epsilon(1e-12));
    (void)ci_n;

    SUBCASE("zero variance collapses the interval to a point") {
        PvInference degenerate = inf;
        degenerate.sigma = Matrix(4, 4);  // all zero
        auto [cp, cn] = difference_cis(degenerate, 0.95);
        CHECK(cp.lo == cp.hi);
        CHECK(cn.lo == cn.hi);
    }
}

TEST_CASE("degenerate covariance inputs raise typed errors") {
    PvInference inf = sample_inference();
    inf.sigma = Matrix(4, 4);
    CHECK_THROWS_AS(global_test(inf), SingularContrastCovariance);
    CHECK_THROWS_AS(individual_tests(inf), ZeroVarianceContrast);
}
