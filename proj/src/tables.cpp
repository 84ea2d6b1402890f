#include "pvcomp/tables.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

std::string cell_name(std::size_t k) {
    static const char* names[4] = {"11", "10", "01", "00"};
    return names[k];
}

void VerificationTable::validate(bool require_columns) const {
    auto check = [](const Cells& cells, const char* label) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double v = cells[k];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InvalidInput(std::string(label) + cell_name(k) + " is negative or non-finite");
            if (v != std::floor(v))
                throw InvalidInput(std::string(label) + cell_name(k) + " is not an integer");
        }
    };
    check(a, "a");
    check(b, "b");
    check(c, "c");
    if (n() < 1.0) throw InvalidInput("table is empty");
    if (require_columns) {
        for (std::size_t k = 0; k < 4; ++k)
            if (column_total(k) < 1.0)
                throw DegenerateCell("column total n" + cell_name(k) + " is zero");
    }
}

VerificationTable VerificationTable::from_counts(const std::array<double, 12>& v) {
    VerificationTable t;
    for (std::size_t k = 0; k < 4; ++k) {
        t.a[k] = v[k];
        t.b[k] = v[4 + k];
        t.c[k] = v[8 + k];
    }
    return t;
}

}  // namespace pvcomp
