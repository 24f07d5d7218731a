#pragma once

#include <vector>

#include "motun/problem.hpp"

namespace motun {

enum class Classification {
    Critical,      ///< Fritz-John with weight on at least one objective
    FritzJohnOnly, ///< multipliers concentrate on constraints alone
    NonStationary,
};

const char* to_string(Classification c);

/// Normalized Fritz-John certificate: multipliers (lambda, mu) >= 0 with
/// sum lambda + sum mu = 1 minimizing the norm of the weighted gradient sum.
/// mu vanishes off the active set.
struct CriticalityCertificate {
    double residual = 0.0;
    Vector lambda; ///< size m
    Vector mu;     ///< size p, zero off active_set
    Classification classification = Classification::NonStationary;
    std::vector<int> active_set; ///< indices i with g_i(x) >= -tol_active
};

/// Solves min || sum lambda_k grad f_k + sum_{i active} mu_i grad g_i || over
/// the normalized simplex and classifies the point.
CriticalityCertificate fj_certificate(const EvalRecord& record, double tol_active = 1e-6,
                                      double tol_res = 1e-5);

/// Mangasarian-Fromovitz check through Gordan's alternative: true iff no
/// nonzero nonnegative combination of active constraint gradients vanishes.
bool mfcq_holds(const EvalRecord& record, double tol_active = 1e-6, double tol_res = 1e-5);

} // namespace motun
