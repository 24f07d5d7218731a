#include "motun/tunneling.hpp"

#include <cmath>
#include <utility>

#include "motun/errors.hpp"

namespace motun {

void TunnelingParams::validate() const {
    if (!(eta > 0.0))
        throw Error("tunneling params: eta must be positive");
    if (!(eps_pole > 0.0))
        throw Error("tunneling params: eps_pole must be positive");
}

namespace {

double resolve_delta(const ProblemSpec& base, const TunnelingParams& params) {
    if (params.delta > 0.0)
        return params.delta;
    if (base.box)
        return 0.05 * (base.box->upper - base.box->lower).norm();
    return 0.1;
}

double pole_distance_sq(const Vector& x, const Vector& pole, double eps_pole,
                        const std::string& name) {
    const double r2 = (x - pole).squaredNorm();
    if (r2 < eps_pole * eps_pole)
        throw PoleViolation(name + ": evaluation within eps_pole of the pole");
    return r2;
}

} // namespace

double TunnelingProblem::tunnel_value(const Vector& x, int k) const {
    const double r2 = pole_distance_sq(x, pole, params.eps_pole, derived.name);
    return (base->objectives[k](x) - f_star[k]) / std::pow(r2, params.eta);
}

Vector TunnelingProblem::tunnel_gradient(const Vector& x, int k) const {
    const double r2 = pole_distance_sq(x, pole, params.eps_pole, derived.name);
    const double denom = std::pow(r2, params.eta);
    const double tk = (base->objectives[k](x) - f_star[k]) / denom;
    const Vector base_grad = base->objective_grads[k] ? base->objective_grads[k](x)
                                                      : fd_gradient(base->objectives[k], x);
    return base_grad / denom - (2.0 * params.eta * tk / r2) * (x - pole);
}

TunnelingProblem build_tunneling_problem(const ProblemSpec& base, const Vector& x_star,
                                         const Vector& f_star, TunnelingParams params) {
    params.validate();
    if (x_star.size() != base.n)
        throw DimensionMismatch(base.name + ": pole has wrong dimension");
    if (f_star.size() != base.m)
        throw DimensionMismatch(base.name + ": f_star has wrong dimension");
    const auto [fvals, gvals] = evaluate_values(base, x_star);
    if (max_violation(gvals) > 1e-10)
        throw Error(base.name + ": tunneling pole must be feasible");
    params.delta = resolve_delta(base, params);

    TunnelingProblem tp;
    tp.base = std::make_shared<const ProblemSpec>(base);
    tp.pole = x_star;
    tp.f_star = f_star;
    tp.params = params;

    ProblemSpec& derived = tp.derived;
    derived.name = base.name + "_tp";
    derived.n = base.n;
    derived.m = base.m;
    derived.box = base.box;

    const auto bp = tp.base;
    const Vector pole = x_star;
    const double eta = params.eta;
    const double eps_pole = params.eps_pole;

    std::vector<ScalarFn> tunnel_values;
    std::vector<GradientFn> tunnel_grads;
    for (int k = 0; k < base.m; ++k) {
        const double fk = f_star[k];
        tunnel_values.push_back([bp, pole, fk, eta, eps_pole, k](const Vector& x) {
            const double r2 = pole_distance_sq(x, pole, eps_pole, bp->name + "_tp");
            return (bp->objectives[k](x) - fk) / std::pow(r2, eta);
        });
        if (bp->objective_grads[k]) {
            tunnel_grads.push_back([bp, pole, fk, eta, eps_pole, k](const Vector& x) {
                const double r2 = pole_distance_sq(x, pole, eps_pole, bp->name + "_tp");
                const double denom = std::pow(r2, eta);
                const double tk = (bp->objectives[k](x) - fk) / denom;
                return Vector(bp->objective_grads[k](x) / denom -
                              (2.0 * eta * tk / r2) * (x - pole));
            });
        } else {
            tunnel_grads.emplace_back(); // fall back to finite differences of T_k
        }
    }

    derived.objectives = tunnel_values;
    derived.objective_grads = tunnel_grads;
    // Constraints: the base g_i first, then T_k <= 0 sharing the objective
    // evaluators, so the feasible set is {g <= 0} intersected with the region
    // weakly dominating the pole.
    derived.constraints = base.constraints;
    derived.constraint_grads = base.constraint_grads;
    derived.constraints.insert(derived.constraints.end(), tunnel_values.begin(),
                               tunnel_values.end());
    derived.constraint_grads.insert(derived.constraint_grads.end(), tunnel_grads.begin(),
                                    tunnel_grads.end());
    derived.p = base.p + base.m;
    derived.validate();
    return tp;
}

Vector perturbed_start(const ProblemSpec& base, const Vector& x_star,
                       const TunnelingParams& params, Rng& rng) {
    const double delta = resolve_delta(base, params);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Vector candidate = clip_to_box(base, x_star + delta * rng.unit_sphere(base.n));
        if ((candidate - x_star).norm() < params.eps_pole)
            continue;
        // Clipping can land on box faces where the base problem has no finite
        // record (unbounded boundary derivatives); such draws are as unusable
        // as pole hits, so redraw.
        try {
            evaluate(base, candidate);
        } catch (const NonFiniteEvaluation&) {
            continue;
        }
        return candidate;
    }
    throw PerturbationFailure(base.name +
                              ": no perturbed start admissible after 100 draws");
}

} // namespace motun
