#ifndef PVCOMP_HESSIAN_HPP
#define PVCOMP_HESSIAN_HPP

#include <functional>
#include <vector>

#include "pvcomp/matrix.hpp"

namespace pvcomp {

/// Central-difference Hessian with componentwise steps
/// h_i = h * max(1, |x_i|), symmetrized as (H + H')/2. Throws
/// EvaluationFailure if the function is non-finite at any probe point.
Matrix numeric_hessian(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& x0, double h = 1e-5);

}  // namespace pvcomp

#endif
