#include "motun/problem.hpp"

#include <cmath>

namespace motun {

void ProblemSpec::validate() const {
    if (n < 1)
        throw Error(name + ": decision dimension must be >= 1");
    if (m < 2)
        throw Error(name + ": at least two objectives required");
    if (p < 0)
        throw Error(name + ": negative constraint count");
    if (static_cast<int>(objectives.size()) != m ||
        static_cast<int>(objective_grads.size()) != m)
        throw Error(name + ": objective evaluator count does not match m");
    if (static_cast<int>(constraints.size()) != p ||
        static_cast<int>(constraint_grads.size()) != p)
        throw Error(name + ": constraint evaluator count does not match p");
    if (box) {
        if (box->lower.size() != n || box->upper.size() != n)
            throw Error(name + ": box dimension does not match n");
        for (int j = 0; j < n; ++j)
            if (!(box->lower[j] < box->upper[j]))
                throw Error(name + ": box requires lower < upper componentwise");
    }
}

namespace {

void require_dimension(const ProblemSpec& problem, const Vector& x) {
    if (x.size() != problem.n)
        throw DimensionMismatch(problem.name + ": point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(problem.n));
}

} // namespace

Vector fd_gradient(const ScalarFn& fn, const Vector& x) {
    Vector g(x.size());
    Vector xp = x, xm = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        g[j] = (fn(xp) - fn(xm)) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return g;
}

EvalRecord evaluate(const ProblemSpec& problem, const Vector& x) {
    require_dimension(problem, x);
    EvalRecord rec;
    rec.x = x;
    rec.fvals.resize(problem.m);
    rec.gvals.resize(problem.p);
    rec.jf.resize(problem.m, problem.n);
    rec.jg.resize(problem.p, problem.n);
    for (int k = 0; k < problem.m; ++k) {
        rec.fvals[k] = problem.objectives[k](x);
        rec.jf.row(k) = problem.objective_grads[k]
                            ? problem.objective_grads[k](x).transpose()
                            : fd_gradient(problem.objectives[k], x).transpose();
    }
    for (int i = 0; i < problem.p; ++i) {
        rec.gvals[i] = problem.constraints[i](x);
        rec.jg.row(i) = problem.constraint_grads[i]
                            ? problem.constraint_grads[i](x).transpose()
                            : fd_gradient(problem.constraints[i], x).transpose();
    }
    if (!rec.fvals.allFinite() || !rec.gvals.allFinite() || !rec.jf.allFinite() ||
        !rec.jg.allFinite())
        throw NonFiniteEvaluation(problem.name + ": non-finite evaluation");
    return rec;
}

std::pair<Vector, Vector> evaluate_values(const ProblemSpec& problem, const Vector& x) {
    require_dimension(problem, x);
    Vector f(problem.m), g(problem.p);
    for (int k = 0; k < problem.m; ++k)
        f[k] = problem.objectives[k](x);
    for (int i = 0; i < problem.p; ++i)
        g[i] = problem.constraints[i](x);
    if (!f.allFinite() || !g.allFinite())
        throw NonFiniteEvaluation(problem.name + ": non-finite evaluation");
    return {std::move(f), std::move(g)};
}

std::pair<Matrix, Matrix> fd_jacobians(const ProblemSpec& problem, const Vector& x, double h) {
    require_dimension(problem, x);
    if (!(h > 0))
        throw Error("fd_jacobians: step must be positive");
    Matrix jf(problem.m, problem.n), jg(problem.p, problem.n);
    Vector xp = x, xm = x;
    for (int j = 0; j < problem.n; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        for (int k = 0; k < problem.m; ++k)
            jf(k, j) = (problem.objectives[k](xp) - problem.objectives[k](xm)) / (2.0 * h);
        for (int i = 0; i < problem.p; ++i)
            jg(i, j) = (problem.constraints[i](xp) - problem.constraints[i](xm)) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    if (!jf.allFinite() || !jg.allFinite())
        throw NonFiniteEvaluation(problem.name + ": non-finite finite-difference Jacobian");
    return {std::move(jf), std::move(jg)};
}

double max_violation(const Vector& gvals) {
    return gvals.size() == 0 ? 0.0 : std::max(0.0, gvals.maxCoeff());
}

double max_violation(const EvalRecord& record) { return max_violation(record.gvals); }

Vector clip_to_box(const ProblemSpec& problem, const Vector& x) {
    require_dimension(problem, x);
    if (!problem.box)
        return x;
    return x.cwiseMax(problem.box->lower).cwiseMin(problem.box->upper);
}

void add_box_constraints(ProblemSpec& problem, const Vector& lower, const Vector& upper) {
    const int n = problem.n;
    if (lower.size() != n || upper.size() != n)
        throw DimensionMismatch(problem.name + ": box dimension does not match n");
    problem.box = Box{lower, upper};
    for (int j = 0; j < n; ++j) {
        const double l = lower[j];
        problem.constraints.push_back([j, l](const Vector& x) { return l - x[j]; });
        problem.constraint_grads.push_back([j, n](const Vector&) {
            Vector g = Vector::Zero(n);
            g[j] = -1.0;
            return g;
        });
    }
    for (int j = 0; j < n; ++j) {
        const double u = upper[j];
        problem.constraints.push_back([j, u](const Vector& x) { return x[j] - u; });
        problem.constraint_grads.push_back([j, n](const Vector&) {
            Vector g = Vector::Zero(n);
            g[j] = 1.0;
            return g;
        });
    }
    problem.p = static_cast<int>(problem.constraints.size());
}

} // namespace motun
