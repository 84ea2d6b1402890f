#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pvcomp/errors.hpp"
#include "pvcomp/paired.hpp"
#include "pvcomp/sem.hpp"

using namespace pvcomp;
using fixtures::dementia_table;

namespace {

double spectral_radius(const Matrix& m) {
    std::vector<double> v(m.rows(), 1.0);
    double norm = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<double> w(m.rows(), 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) w[i] += m(i, j) * v[j];
        norm = 0.0;
        for (double x : w) norm = std::max(norm, std::fabs(x));
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / norm;
    }
    return norm;
}

bool positive_definite(const Matrix& m) {
    // Cholesky without pivoting; good enough for 4x4 covariance blocks
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

VerificationTable fully_verified(const CompleteTable& ct) {
    VerificationTable t;
    t.a = ct.x;
    t.b = ct.y;
    t.c = {0, 0, 0, 0};
    return t;
}

}  // namespace

TEST_CASE("complete information inverse matches the delta-method variances when nothing is missing") {
    CompleteTable ct;
    ct.x = {40, 12, 9, 6};
    ct.y = {11, 14, 20, 70};
    const VerificationTable t = fully_verified(ct);
    const EmResult em = run_em(t);
    REQUIRE(em.converged);
    const Matrix info_inv = complete_info_inverse(t, em);
    const PairedEstimates pe = estimates(ct);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(info_inv(i, i) == doctest::Approx(pe.sigma(i, i)).epsilon(1e-4));
}

TEST_CASE("doubling every count halves the information inverse") {
    const VerificationTable t = dementia_table();
    VerificationTable doubled = t;
    for (std::size_t k = 0; k < 4; ++k) {
        doubled.a[k] *= 2;
        doubled.b[k] *= 2;
        doubled.c[k] *= 2;
    }
    const EmResult em1 = run_em(t);
    const EmResult em2 = run_em(doubled);
    const Matrix inv1 = complete_info_inverse(t, em1);
    const Matrix inv2 = complete_info_inverse(doubled, em2);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            if (std::fabs(inv1(i, j)) < 1e-12) continue;
            CHECK(inv2(i, j) == doctest::Approx(0.5 * inv1(i, j)).epsilon(1e-6));
        }
}

TEST_CASE("no missing data means a zero rate matrix and sigma equal to the information inverse") {
    CompleteTable ct;
    ct.x = {40, 12, 9, 6};
    ct.y = {11, 14, 20, 70};
    const VerificationTable t = fully_verified(ct);
    const EmResult em = run_em(t);
    const SemResult sem = sem_covariance(t, em);
    CHECK(sem.dm.max_abs() == 0.0);
    CHECK((sem.sigma - sem.i_oc_inv).max_abs() < 1e-14);
    CHECK(sem.delta_sigma.max_abs() < 1e-14);
}

TEST_CASE("covariance assembly on the dementia study") {
    const VerificationTable t = dementia_table();
    const EmResult em = run_em(t);
    REQUIRE(em.converged);
    const SemResult sem = sem_covariance(t, em);

    SUBCASE("standard errors reproduce the published analysis") {
        CHECK(std::sqrt(sem.sigma(0, 0)) == doctest::Approx(0.059).epsilon(0.02));
        CHECK(std::sqrt(sem.sigma(1, 1)) == doctest::Approx(0.020).epsilon(0.03));
        CHECK(std::sqrt(sem.sigma(2, 2)) == doctest::Approx(0.052).epsilon(0.02));
        CHECK(std::sqrt(sem.sigma(3, 3)) == doctest::Approx(0.018).epsilon(0.03));
    }

    SUBCASE("raw product is nearly symmetric") {
        CHECK(sem.asymmetry < 1e-4);
    }

    SUBCASE("rate matrix is a contraction") {
        CHECK(spectral_radius(sem.dm) < 1.0);
    }

    SUBCASE("missing information splits off additively") {
        const Matrix resid = (sem.sigma - sem.i_oc_inv) - sem.delta_sigma;
        CHECK(resid.max_abs() < 1e-8);
    }

    SUBCASE("missing information never shrinks a variance") {
        for (std::size_t i = 0; i < 7; ++i)
            CHECK(sem.sigma(i, i) >= sem.i_oc_inv(i, i) - 1e-10);
    }

    SUBCASE("predictive-value block is positive definite") {
        CHECK(positive_definite(pv_block(sem.sigma)));
    }
}

TEST_CASE("covariance requires a converged interior solution") {
    const VerificationTable t = dementia_table();
    EmOptions opts;
    opts.max_iter = 3;
    const EmResult em = run_em(t, opts);
    CHECK_THROWS_AS(complete_info_inverse(t, em), NotConverged);
}
