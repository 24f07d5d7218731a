#pragma once

#include <memory>

#include "motun/problem.hpp"
#include "motun/rng.hpp"

namespace motun {

struct TunnelingParams {
    double eta = 1.2;       ///< pole strength, > 0
    double eps_pole = 1e-8; ///< minimum admissible distance to the pole
    /// Restart perturbation radius. Non-positive selects the default:
    /// 0.05 * box diagonal when bounds exist, 0.1 otherwise.
    double delta = 0.0;

    void validate() const;
};

/// Derived problem whose objectives are the pole-centered transforms
///   T_k(x) = (f_k(x) - f_k(x*)) / ||x - x*||^(2 eta),
/// minimized subject to the base constraints plus T_k(x) <= 0. A T_k is
/// nonpositive exactly where x improves on x* in objective k, so the feasible
/// set of the derived problem is the region weakly dominating x*.
struct TunnelingProblem {
    std::shared_ptr<const ProblemSpec> base;
    Vector pole;   ///< x*, a weak efficient solution of the base problem
    Vector f_star; ///< f(x*)
    TunnelingParams params; ///< with delta resolved to its effective value
    ProblemSpec derived;    ///< m objectives T_k, p + m constraints (g then T)

    /// T_k(x). Throws PoleViolation within eps_pole of the pole.
    double tunnel_value(const Vector& x, int k) const;

    /// grad T_k(x) = grad f_k(x)/||x-x*||^(2 eta)
    ///               - 2 eta (x-x*) T_k(x)/||x-x*||^2.
    Vector tunnel_gradient(const Vector& x, int k) const;
};

/// Builds the derived problem around pole x_star with f_star = f(x_star).
TunnelingProblem build_tunneling_problem(const ProblemSpec& base, const Vector& x_star,
                                         const Vector& f_star, TunnelingParams params = {});

/// clip_to_box(x_star + delta * u) for u uniform on the unit sphere, redrawn
/// until the result is at least eps_pole away from x_star. Deterministic for
/// a given rng state. Throws PerturbationFailure after 100 draws.
Vector perturbed_start(const ProblemSpec& base, const Vector& x_star,
                       const TunnelingParams& params, Rng& rng);

} // namespace motun
