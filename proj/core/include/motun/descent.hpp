#pragma once

#include "motun/problem.hpp"
#include "motun/subproblem.hpp"

namespace motun {

struct DescentOptions {
    double eps_crit = 1e-8;        ///< stationarity tolerance on theta
    double dir_tol = 1e-6;         ///< additional ||d|| tolerance at stops
    double cert_tol = 1e-6;        ///< Fritz-John residual required to stop Critical
    int max_iter = 500;
    double armijo_sigma = 1e-4;    ///< sufficient-decrease factor, in (0,1)
    double backtrack_factor = 0.5; ///< step shrink factor, in (0,1)
    double min_step = 1e-12;

    void validate() const;
};

enum class DescentStatus {
    Critical,    ///< stationarity reached (possibly at an infeasible point)
    IterLimit,
    StepFailure, ///< backtracking underflowed min_step
};

const char* to_string(DescentStatus s);

struct DescentResult {
    Vector x_final;
    EvalRecord record;
    DescentStatus status = DescentStatus::IterLimit;
    int iterations = 0;
    /// Final stationarity measure theta - max(0, violation); equals the
    /// subproblem value theta at feasible points and satisfies
    /// |theta_final| <= eps_crit whenever status is Critical.
    double theta_final = 0.0;
    bool feasible = false; ///< max_violation(record) == 0
};

/// Invoked with the start record and every accepted iterate.
using IterateObserver = std::function<void(const EvalRecord&)>;

/// Iterates direction finding plus backtracking line search until the
/// stationarity measure theta - max(0, violation) vanishes. Feasible starts
/// stay feasible on box-only problems (trial points are clipped); infeasible
/// iterates are driven toward feasibility by the constraint pieces of the
/// direction subproblem and may terminate at an infeasible stationary point,
/// reported as Critical with feasible = false.
DescentResult minimize(const ProblemSpec& problem, const Vector& x0,
                       const DescentOptions& opts = {},
                       const IterateObserver& observer = {});

/// Largest step t in {1, beta, beta^2, ...} with t >= min_step such that the
/// clipped trial point satisfies f_k(trial) <= f_k(x) + sigma * t * theta for
/// every objective and does not worsen max(0, violation). Returns 0 on
/// failure. Requires theta < 0 and d != 0.
double armijo_backtrack(const ProblemSpec& problem, const Vector& x, const Vector& d,
                        double theta, const DescentOptions& opts = {});

} // namespace motun
