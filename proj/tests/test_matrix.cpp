#include <doctest.h>

#include <cmath>

#include "pvcomp/errors.hpp"
#include "pvcomp/matrix.hpp"
#include "pvcomp/rng.hpp"

using namespace pvcomp;

namespace {

Matrix random_spd(std::size_t n, Rng& rng) {
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = rng.uniform01() - 0.5;
    Matrix spd = b.transpose() * b;
    for (std::size_t i = 0; i < n; ++i) spd(i, i) += 0.5;
    return spd;
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("identity inverts to itself") {
    const Matrix id = Matrix::identity(7);
    CHECK(max_diff(invert(id), id) == 0.0);
}

TEST_CASE("diagonal matrix inverts elementwise") {
    Matrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const Matrix inv = invert(d);
    CHECK(inv(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inv(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(inv(0, 1) == 0.0);
}

TEST_CASE("multiply-back residual stays tiny for random SPD matrices") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_spd(4, rng);
        const Matrix prod = a * invert(a);
        CHECK(max_diff(prod, Matrix::identity(4)) < 1e-10);
    }
}

TEST_CASE("inversion is an involution on well-conditioned matrices") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_spd(5, rng);
        CHECK(max_diff(invert(invert(a)), a) < 1e-9);
    }
}

TEST_CASE("singular and oversized inputs are rejected") {
    Matrix z(3, 3);  // all zeros
    CHECK_THROWS_AS(invert(z), SingularMatrix);

    Matrix rank1(2, 2);
    rank1(0, 0) = 1.0;
    rank1(0, 1) = 2.0;
    rank1(1, 0) = 2.0;
    rank1(1, 1) = 4.0;
    CHECK_THROWS_AS(invert(rank1), SingularMatrix);

    CHECK_THROWS_AS(invert(Matrix(9, 9, 1.0)), InvalidInput);
    CHECK_THROWS_AS(invert(Matrix(2, 3)), InvalidInput);
}

TEST_CASE("symmetrized and asymmetry agree") {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 3.0;
    CHECK(m.asymmetry() == doctest::Approx(2.0));
    const Matrix s = m.symmetrized();
    CHECK(s(0, 1) == doctest::Approx(2.0));
    CHECK(s.asymmetry() == 0.0);
}

TEST_CASE("quadratic form matches direct expansion") {
    Matrix m{{2.0, 1.0}, {1.0, 3.0}};
    CHECK(quadratic_form({1.0, 2.0}, m) == doctest::Approx(2.0 + 4.0 + 12.0));
}
