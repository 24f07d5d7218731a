#include "motun/descent.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "motun/criticality.hpp"
#include "motun/errors.hpp"

namespace motun {

void DescentOptions::validate() const {
    if (!(eps_crit > 0.0))
        throw Error("descent options: eps_crit must be positive");
    if (!(dir_tol > 0.0))
        throw Error("descent options: dir_tol must be positive");
    if (!(cert_tol > 0.0))
        throw Error("descent options: cert_tol must be positive");
    if (max_iter < 1)
        throw Error("descent options: max_iter must be at least 1");
    if (!(armijo_sigma > 0.0 && armijo_sigma < 1.0))
        throw Error("descent options: armijo_sigma must lie in (0,1)");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw Error("descent options: backtrack_factor must lie in (0,1)");
    if (!(min_step > 0.0))
        throw Error("descent options: min_step must be positive");
}

const char* to_string(DescentStatus s) {
    switch (s) {
    case DescentStatus::Critical: return "Critical";
    case DescentStatus::IterLimit: return "IterLimit";
    case DescentStatus::StepFailure: return "StepFailure";
    }
    return "?";
}

namespace {

struct Step {
    double t = 0.0;
    std::optional<EvalRecord> record;
};

// Armijo backtracking over the full record so that points with non-finite
// gradients (or inside a tunneling pole) are rejected as trial points rather
// than surfacing as evaluation errors on the next iteration.
Step armijo_step(const ProblemSpec& problem, const EvalRecord& current, const Vector& d,
                 double theta, const DescentOptions& opts) {
    const double v0 = max_violation(current);
    for (double t = 1.0; t >= opts.min_step; t *= opts.backtrack_factor) {
        const Vector trial = clip_to_box(problem, current.x + t * d);
        EvalRecord rec;
        try {
            rec = evaluate(problem, trial);
        } catch (const NonFiniteEvaluation&) {
            continue;
        } catch (const PoleViolation&) {
            continue;
        }
        if (max_violation(rec) > v0)
            continue;
        const double allowance = opts.armijo_sigma * t * theta;
        if ((rec.fvals.array() <= current.fvals.array() + allowance).all())
            return {t, std::move(rec)};
    }
    return {};
}

// Violation-reduction search used at infeasible iterates whose subproblem
// value is nonnegative; theta - v0 < 0 is the guaranteed descent rate of the
// linearized max violation along d.
Step restoration_step(const ProblemSpec& problem, const EvalRecord& current, const Vector& d,
                      double theta, const DescentOptions& opts) {
    const double v0 = max_violation(current);
    const double slope = theta - v0;
    for (double t = 1.0; t >= opts.min_step; t *= opts.backtrack_factor) {
        const Vector trial = clip_to_box(problem, current.x + t * d);
        EvalRecord rec;
        try {
            rec = evaluate(problem, trial);
        } catch (const NonFiniteEvaluation&) {
            continue;
        } catch (const PoleViolation&) {
            continue;
        }
        if (max_violation(rec) <= v0 + opts.armijo_sigma * t * slope)
            return {t, std::move(rec)};
    }
    return {};
}

} // namespace

DescentResult minimize(const ProblemSpec& problem, const Vector& x0, const DescentOptions& opts,
                       const IterateObserver& observer) {
    opts.validate();
    DescentResult out;
    out.x_final = clip_to_box(problem, x0);
    out.record = evaluate(problem, out.x_final);
    if (observer)
        observer(out.record);

    double stat = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const DirectionResult dir = solve_direction(out.record);
        const double v = max_violation(out.record);
        stat = dir.theta - v;

        // Stationarity measure: theta - max(0, violation) <= 0 always, zero
        // exactly when no piece of the subproblem can improve. The direction
        // norm gate tightens the stop so that Critical results carry a
        // Fritz-John residual at certificate accuracy, not just |theta| <=
        // eps_crit (which only bounds the residual by sqrt(2 eps_crit)); the
        // certificate itself is the final arbiter because its active set can
        // differ from the pieces the subproblem leaned on. A nonnegative
        // theta at a feasible point pins the true optimal value between it
        // and zero, so no descent direction exists there either.
        const bool no_descent = v == 0.0 && dir.theta >= 0.0;
        if ((dir.theta - v >= -opts.eps_crit && dir.d.norm() <= opts.dir_tol) || no_descent) {
            if (fj_certificate(out.record).residual <= opts.cert_tol) {
                out.status = DescentStatus::Critical;
                out.iterations = it;
                out.theta_final = dir.theta - v;
                out.feasible = v == 0.0;
                return out;
            }
        }

        const Step step = no_descent ? Step{}
                          : (v > 0.0 && dir.theta >= 0.0)
                              ? restoration_step(problem, out.record, dir.d, dir.theta, opts)
                              : armijo_step(problem, out.record, dir.d, dir.theta, opts);
        if (step.t == 0.0) {
            out.status = DescentStatus::StepFailure;
            out.iterations = it;
            out.theta_final = dir.theta - v;
            out.feasible = v == 0.0;
            return out;
        }
        out.record = std::move(*step.record);
        out.x_final = out.record.x;
        if (observer)
            observer(out.record);
    }

    out.status = DescentStatus::IterLimit;
    out.iterations = opts.max_iter;
    out.theta_final = stat;
    out.feasible = max_violation(out.record) == 0.0;
    return out;
}

double armijo_backtrack(const ProblemSpec& problem, const Vector& x, const Vector& d,
                        double theta, const DescentOptions& opts) {
    if (!(theta < 0.0))
        throw Error("armijo_backtrack: requires theta < 0");
    if (d.norm() == 0.0)
        throw Error("armijo_backtrack: requires a nonzero direction");
    const auto [f0, g0] = evaluate_values(problem, x);
    const double v0 = max_violation(g0);
    for (double t = 1.0; t >= opts.min_step; t *= opts.backtrack_factor) {
        const Vector trial = clip_to_box(problem, x + t * d);
        try {
            const auto [f, g] = evaluate_values(problem, trial);
            if (max_violation(g) <= v0 &&
                (f.array() <= f0.array() + opts.armijo_sigma * t * theta).all())
                return t;
        } catch (const NonFiniteEvaluation&) {
        } catch (const PoleViolation&) {
        }
    }
    return 0.0;
}

} // namespace motun
