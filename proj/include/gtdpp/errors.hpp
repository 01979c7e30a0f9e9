#pragma once

#include <stdexcept>
#include <string>

namespace gtdpp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation point coincides with a pole (atom position or the chi pole).
struct PoleError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

/// Geometric degeneracy (collision with an atom, empty enclosure, ...).
struct DegenerateError : Error {
    using Error::Error;
};

/// Iterative refinement failed to converge.
struct ConvergenceError : Error {
    using Error::Error;
};

/// The point does not belong to the region required by the operation.
struct NotInRegionError : Error {
    using Error::Error;
};

/// Parameter is not in the domain R of the edge curve.
struct NotInRError : Error {
    using Error::Error;
};

/// Witnesses sit within tolerance of two label conditions.
struct AmbiguousError : Error {
    using Error::Error;
};

/// Problem size exceeds the limit of the exact evaluation path.
struct SizeError : Error {
    using Error::Error;
};

/// Contours violate the enclosure preconditions.
struct ContourError : Error {
    using Error::Error;
};

/// Quadrature failed to converge within the point budget.
struct NonConvergedError : Error {
    using Error::Error;
};

/// Epsilon too large for the near-edge sufficiency inequalities.
struct EpsTooLargeError : Error {
    using Error::Error;
};

/// A refined root escaped its guaranteed bracket.
struct RootEscapeError : Error {
    using Error::Error;
};

/// Contour geometry invalid (imaginary part squared went negative).
struct GeometryError : Error {
    using Error::Error;
};

/// Eigensolver failed to converge.
struct EigensolverError : Error {
    using Error::Error;
};

/// Rejection sampler exhausted its proposal budget.
struct RejectionBudgetError : Error {
    using Error::Error;
};

}  // namespace gtdpp
