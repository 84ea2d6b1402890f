#ifndef PVCOMP_ERRORS_HPP
#define PVCOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pvcomp {

// Root of all library errors. Input validation and numerical failures
// derive from this so callers can distinguish them from std exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

struct NumericalFailure : Error {
    using Error::Error;
};

// matrix / numerics
struct SingularMatrix : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct EvaluationFailure : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct InvalidDf : InvalidInput {
    using InvalidInput::InvalidInput;
};

// model
struct DegenerateTest : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct InfeasibleAlpha : InvalidInput {
    using InvalidInput::InvalidInput;
};

// em
struct DegenerateCell : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct ZeroMass : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct LogOfNonpositive : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct NotConverged : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct BoundaryEstimate : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

// sem
struct DmNotConverged : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

// inference
struct SingularContrastCovariance : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct ZeroVarianceContrast : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

// paired
struct EmptyMargin : InvalidInput {
    using InvalidInput::InvalidInput;
};

// mi
struct ZeroCellForMi : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct Separation : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct NonConvergence : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct SingularPooledCovariance : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

// sim
struct InfeasibleScenario : InvalidInput {
    using InvalidInput::InvalidInput;
};

}  // namespace pvcomp

#endif
