#include "pvcomp/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "pvcomp/errors.hpp"

namespace pvcomp {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InvalidInput("ragged matrix initializer");
        for (double v : r) data_.push_back(v);
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw InvalidInput("matrix product shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("matrix sum shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("matrix diff shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::symmetrized() const {
    if (rows_ != cols_) throw InvalidInput("symmetrized: matrix not square");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return out;
}

double Matrix::asymmetry() const {
    if (rows_ != cols_) throw InvalidInput("asymmetry: matrix not square");
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            worst = std::max(worst, std::fabs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

double Matrix::max_abs() const {
    double worst = 0.0;
    for (double v : data_) worst = std::max(worst, std::fabs(v));
    return worst;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix invert(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw InvalidInput("invert: matrix not square");
    if (n == 0 || n > 8) throw InvalidInput("invert: size outside [1,8]");

    Matrix work = m;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(work(r, col)) > std::fabs(work(piv, col))) piv = r;
        if (std::fabs(work(piv, col)) < 1e-12)
            throw SingularMatrix("pivot below 1e-12 at column " + std::to_string(col));
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work(piv, j), work(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const double d = work(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = work(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

double quadratic_form(const std::vector<double>& v, const Matrix& m) {
    if (m.rows() != m.cols() || v.size() != m.rows())
        throw InvalidInput("quadratic_form: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) acc += v[i] * m(i, j) * v[j];
    return acc;
}

}  // namespace pvcomp
