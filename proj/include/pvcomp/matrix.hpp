#ifndef PVCOMP_MATRIX_HPP
#define PVCOMP_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace pvcomp {

/// Small dense matrix, row-major. Everything in this project is at most
/// 7x7 (the parameter vector has seven components), so the inversion
/// routine caps the size at 8 and uses plain Gauss-Jordan elimination.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;

    /// (M + M^T)/2
    Matrix symmetrized() const;
    /// max_ij |M_ij - M_ji|
    double asymmetry() const;
    double max_abs() const;

    bool all_finite() const;

  private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

/// Inverse by Gauss-Jordan with partial pivoting. Throws SingularMatrix
/// when a pivot magnitude falls below 1e-12, InvalidInput for non-square
/// input or size above 8.
Matrix invert(const Matrix& m);

/// Quadratic form v' M v for a square M.
double quadratic_form(const std::vector<double>& v, const Matrix& m);

}  // namespace pvcomp

#endif
