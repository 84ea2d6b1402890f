#include "pvcomp/hessian.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

Matrix numeric_hessian(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& x0, double h) {
    if (!(h > 0.0)) throw InvalidInput("numeric_hessian: step must be positive");
    const std::size_t n = x0.size();
    std::vector<double> steps(n);
    for (std::size_t i = 0; i < n; ++i) steps[i] = h * std::max(1.0, std::fabs(x0[i]));

    auto eval = [&](std::vector<double>& x) {
        const double v = f(x);
        if (!std::isfinite(v)) throw EvaluationFailure("objective non-finite at probe point");
        return v;
    };

    Matrix hess(n, n);
    std::vector<double> x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double hi = steps[i], hj = steps[j];
            x = x0;
            x[i] += hi;
            x[j] += hj;
            const double fpp = eval(x);
            x = x0;
            x[i] += hi;
            x[j] -= hj;
            const double fpm = eval(x);
            x = x0;
            x[i] -= hi;
            x[j] += hj;
            const double fmp = eval(x);
            x = x0;
            x[i] -= hi;
            x[j] -= hj;
            const double fmm = eval(x);
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess.symmetrized();
}

}  // namespace pvcomp
