#ifndef PVCOMP_TABLES_HPP
#define PVCOMP_TABLES_HPP

#include <array>
#include <cstddef>
#include <string>

namespace pvcomp {

/// Cell order used everywhere: (T1,T2) = (1,1), (1,0), (0,1), (0,0).
inline constexpr std::array<int, 4> kT1 = {1, 1, 0, 0};
inline constexpr std::array<int, 4> kT2 = {1, 0, 1, 0};

inline constexpr std::size_t kCell11 = 0;
inline constexpr std::size_t kCell10 = 1;
inline constexpr std::size_t kCell01 = 2;
inline constexpr std::size_t kCell00 = 3;

using Cells = std::array<double, 4>;

inline double sum(const Cells& c) { return c[0] + c[1] + c[2] + c[3]; }

/// Observed 3x4 table under partial verification: verified diseased (a),
/// verified non-diseased (b), unverified (c).
struct VerificationTable {
    Cells a{};
    Cells b{};
    Cells c{};

    double n() const { return sum(a) + sum(b) + sum(c); }
    double column_total(std::size_t k) const { return a[k] + b[k] + c[k]; }

    /// Throws InvalidInput unless all counts are non-negative integers,
    /// the total is positive, and (when require_columns) every column
    /// total is at least 1.
    void validate(bool require_columns = true) const;

    /// Parse the 12 counts in the order
    /// a11 a10 a01 a00 b11 b10 b01 b00 c11 c10 c01 c00.
    static VerificationTable from_counts(const std::array<double, 12>& v);
};

/// 2x4 complete-data table: diseased (x), non-diseased (y). Entries may
/// be fractional when they come from an expectation step.
struct CompleteTable {
    Cells x{};
    Cells y{};

    double n() const { return sum(x) + sum(y); }
    double column_total(std::size_t k) const { return x[k] + y[k]; }
};

std::string cell_name(std::size_t k);

}  // namespace pvcomp

#endif
