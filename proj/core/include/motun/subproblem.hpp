#pragma once

#include <Eigen/Core>

#include "motun/problem.hpp"

namespace motun {

/// min over the unit simplex {w >= 0, sum w = 1} of  1/2 w'Qw + c'w.
/// Q is the Gram matrix of piece gradients, c the piece offsets.
struct SimplexQP {
    Matrix Q; ///< q x q, symmetric positive semidefinite
    Vector c; ///< size q
};

struct SimplexQPResult {
    Vector weights;
    double value = 0.0;
    int iterations = 0;
    double kkt_residual = 0.0;
};

/// Euclidean projection onto the unit simplex.
Vector project_to_simplex(const Vector& v);

/// Accelerated projected gradient (FISTA with adaptive restart) followed by
/// an active-face refinement that drives the KKT residual to machine
/// precision on these small instances. The residual is the fixed-point
/// measure ||w - P(w - grad/L)||_inf.
/// Throws SubproblemFailure when the budget is exhausted above tolerance.
SimplexQPResult solve_simplex_qp(const SimplexQP& qp, double tol = 1e-10, int max_iter = 10000);

/// Descent direction d, subproblem optimal value theta, and dual weights for
/// the regularized min-max direction problem
///   min_d  max{ grad f_k(x)'d,  g_i(x) + grad g_i(x)'d } + 1/2 ||d||^2.
/// At a feasible x, theta <= 0, and theta = 0 exactly at critical points.
struct DirectionResult {
    Vector d;
    double theta = 0.0;
    Vector weights; ///< on the simplex over the m + p pieces
};

DirectionResult solve_direction(const EvalRecord& record);

} // namespace motun
