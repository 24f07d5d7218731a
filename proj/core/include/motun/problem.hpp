#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "motun/errors.hpp"

namespace motun {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

struct Box {
    Vector lower;
    Vector upper;
};

/// An m-objective problem with p inequality constraints g_i(x) <= 0 and
/// optional box bounds. Gradient evaluators may be left empty, in which case
/// evaluation falls back to scaled central differences.
///
/// Immutable after construction by convention; safe to share across threads.
struct ProblemSpec {
    std::string name;
    int n = 0; ///< decision dimension
    int m = 0; ///< objective count (>= 2)
    int p = 0; ///< inequality constraint count

    std::vector<ScalarFn> objectives;
    std::vector<GradientFn> objective_grads;
    std::vector<ScalarFn> constraints;
    std::vector<GradientFn> constraint_grads;

    std::optional<Box> box;

    /// Throws Error if dimensions or box bounds are inconsistent.
    void validate() const;
};

/// Objective/constraint values and both Jacobians at a point. Only finite
/// entries are admitted; see evaluate().
struct EvalRecord {
    Vector x;
    Vector fvals; ///< size m
    Vector gvals; ///< size p
    Matrix jf;    ///< m x n, row k = grad f_k
    Matrix jg;    ///< p x n, row i = grad g_i
};

/// Fully evaluates the problem at x. Deterministic for fixed x.
/// Throws NonFiniteEvaluation if any value or gradient entry is NaN/Inf.
EvalRecord evaluate(const ProblemSpec& problem, const Vector& x);

/// Objective and constraint values only (no Jacobians). Same finiteness check.
std::pair<Vector, Vector> evaluate_values(const ProblemSpec& problem, const Vector& x);

/// Central-difference Jacobians with fixed step h. Test oracle and gradient
/// check backend; never used on the solve path when analytic gradients exist.
std::pair<Matrix, Matrix> fd_jacobians(const ProblemSpec& problem, const Vector& x, double h);

/// Central difference of a scalar function with step 1e-6 scaled by
/// max(1, |x_j|); the fallback used when no gradient evaluator is registered.
Vector fd_gradient(const ScalarFn& fn, const Vector& x);

/// max(0, max_i g_i(x)); zero exactly when x is feasible.
double max_violation(const EvalRecord& record);
double max_violation(const Vector& gvals);

/// Componentwise clamp into the box when one is present, identity otherwise.
Vector clip_to_box(const ProblemSpec& problem, const Vector& x);

/// Registers lower/upper bounds both structurally and as 2n explicit
/// constraints: -(x_j - l_j) <= 0 for j = 1..n, then x_j - u_j <= 0.
void add_box_constraints(ProblemSpec& problem, const Vector& lower, const Vector& upper);

} // namespace motun
