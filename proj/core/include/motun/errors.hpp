#pragma once

#include <stdexcept>
#include <string>

namespace motun {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An evaluator produced NaN or Inf; the point is outside the usable domain.
struct NonFiniteEvaluation : Error {
    using Error::Error;
};

/// The simplex QP solver exhausted its iteration budget above tolerance.
struct SubproblemFailure : Error {
    using Error::Error;
};

/// A tunneling objective was evaluated too close to its pole.
struct PoleViolation : Error {
    using Error::Error;
};

/// No admissible perturbed restart point could be drawn.
struct PerturbationFailure : Error {
    using Error::Error;
};

/// Requested problem name is not in the registry.
struct UnknownProblem : Error {
    using Error::Error;
};

/// Operation requires structure (e.g. box bounds) the problem lacks.
struct UnsupportedProblem : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Bad command line; carries a message naming the offending flag.
struct UsageError : Error {
    using Error::Error;
};

struct IoFailure : Error {
    using Error::Error;
};

} // namespace motun
