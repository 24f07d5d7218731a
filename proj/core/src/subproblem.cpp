#include "motun/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "motun/errors.hpp"

namespace motun {

Vector project_to_simplex(const Vector& v) {
    const Eigen::Index q = v.size();
    std::vector<double> u(v.data(), v.data() + q);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = u[0] - 1.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        cumsum += u[j];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0)
            tau = t;
    }
    return (v.array() - tau).cwiseMax(0.0);
}

namespace {

// Solves K z = rhs for a symmetric indefinite KKT block whose rows can span
// many orders of magnitude (Gram entries of tunneling gradients against unit
// box normals). Symmetric Ruiz equilibration followed by a rank-revealing
// solve and one round of iterative refinement keeps all blocks resolved.
Vector solve_kkt(const Matrix& kkt, const Vector& rhs) {
    const Eigen::Index sz = kkt.rows();
    Vector scale = Vector::Ones(sz);
    Matrix keq = kkt;
    for (int pass = 0; pass < 8; ++pass) {
        bool balanced = true;
        for (Eigen::Index i = 0; i < sz; ++i) {
            const double r = keq.row(i).cwiseAbs().maxCoeff();
            if (r <= 0.0)
                continue;
            if (r > 4.0 || r < 0.25)
                balanced = false;
            const double s = 1.0 / std::sqrt(r);
            keq.row(i) *= s;
            keq.col(i) *= s;
            scale[i] *= s;
        }
        if (balanced)
            break;
    }
    const auto solver = keq.completeOrthogonalDecomposition();
    const Vector rhs_eq = scale.asDiagonal() * rhs;
    Vector z = solver.solve(rhs_eq);
    z += solver.solve(rhs_eq - keq * z); // one refinement round
    return scale.asDiagonal() * z;
}

// Solves the QP restricted to one support set through its KKT system and
// returns the weight vector (zeros off the support), or an empty vector when
// the face solution is not usable (negative weights, non-finite entries).
Vector solve_face(const SimplexQP& qp, const std::vector<Eigen::Index>& s) {
    const Eigen::Index q = qp.Q.rows();
    const Eigen::Index k = static_cast<Eigen::Index>(s.size());
    // Stationarity on the face: Q_SS w_S - nu 1 = -c_S, 1' w_S = 1.
    Matrix kkt = Matrix::Zero(k + 1, k + 1);
    Vector rhs(k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b)
            kkt(a, b) = qp.Q(s[a], s[b]);
        kkt(a, k) = -1.0;
        kkt(k, a) = 1.0;
        rhs[a] = -qp.c[s[a]];
    }
    rhs[k] = 1.0;
    const Vector sol = solve_kkt(kkt, rhs);
    if (!sol.allFinite())
        return {};
    Vector cand = Vector::Zero(q);
    double total = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) {
        if (sol[a] < -1e-9)
            return {};
        cand[s[a]] = std::max(sol[a], 0.0);
        total += cand[s[a]];
    }
    if (!(total > 0.0))
        return {};
    return cand / total;
}

// Polishes an approximate simplex-QP solution by enumerating small candidate
// supports. Some optimal support of size <= rank(Q) + 1 always exists, and
// faces larger than that are degenerate whenever the pieces outnumber the
// ambient dimension, which defeats incremental active-set updates; plain
// enumeration over a reduced candidate column set is robust and, at these
// sizes, cheap.
Vector refine_by_enumeration(const SimplexQP& qp, const Vector& w_start) {
    const Eigen::Index q = qp.Q.rows();
    const auto objective = [&](const Vector& w) {
        return 0.5 * w.dot(qp.Q * w) + qp.c.dot(w);
    };

    // Candidate columns: the approximate support plus the smallest reduced
    // gradients, capped at 12.
    const Vector grad = qp.Q * w_start + qp.c;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(q));
    for (Eigen::Index i = 0; i < q; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double wa = w_start[a] > 1e-10 ? 1.0 : 0.0;
        const double wb = w_start[b] > 1e-10 ? 1.0 : 0.0;
        if (wa != wb)
            return wa > wb;
        return grad[a] < grad[b];
    });
    const std::size_t n_cand = std::min<std::size_t>(order.size(), 12);
    std::vector<Eigen::Index> candidates(order.begin(),
                                         order.begin() + static_cast<long>(n_cand));

    const Eigen::Index rank = qp.Q.completeOrthogonalDecomposition().rank();
    const std::size_t max_size =
        std::min<std::size_t>(n_cand, static_cast<std::size_t>(rank) + 2);

    Vector best = w_start;
    double best_val = objective(w_start);
    std::vector<Eigen::Index> subset;
    // Enumerate subsets of candidates of size 1..max_size via bitmask.
    const std::uint32_t limit = 1u << n_cand;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_size)
            continue;
        subset.clear();
        for (std::size_t b = 0; b < n_cand; ++b)
            if (mask & (1u << b))
                subset.push_back(candidates[b]);
        const Vector cand = solve_face(qp, subset);
        if (cand.size() == 0)
            continue;
        const double val = objective(cand);
        if (val < best_val) {
            best_val = val;
            best = cand;
        }
    }
    return best;
}

} // namespace

SimplexQPResult solve_simplex_qp(const SimplexQP& qp, double tol, int max_iter) {
    const Eigen::Index q = qp.Q.rows();
    if (q < 1 || qp.Q.cols() != q || qp.c.size() != q)
        throw Error("solve_simplex_qp: inconsistent dimensions");
    if (!(tol > 0.0))
        throw Error("solve_simplex_qp: tolerance must be positive");

    SimplexQPResult res;
    if (q == 1) {
        res.weights = Vector::Ones(1);
        res.value = 0.5 * qp.Q(0, 0) + qp.c[0];
        return res;
    }

    const auto objective = [&](const Vector& w) {
        return 0.5 * w.dot(qp.Q * w) + qp.c.dot(w);
    };

    // Gershgorin upper bound on the spectral radius. Dividing the gradient by
    // it makes the projected-gradient step and the fixed-point residual
    // invariant under a common rescaling of Q and c, so the tolerance is
    // scale-free even when tunneling gradients blow the Gram entries up.
    const double lip = qp.Q.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(lip > 0.0)) {
        // Q = 0: linear objective, optimum at a vertex.
        Eigen::Index imin = 0;
        qp.c.minCoeff(&imin);
        res.weights = Vector::Zero(q);
        res.weights[imin] = 1.0;
        res.value = qp.c[imin];
        return res;
    }

    const auto fixed_point_residual = [&](const Vector& w) {
        return (w - project_to_simplex(w - (qp.Q * w + qp.c) / lip))
            .lpNorm<Eigen::Infinity>();
    };

    // FISTA with gradient-based adaptive restart, interleaved with the
    // enumeration polish whenever progress stalls. Gram matrices of tunneling
    // gradients can be arbitrarily ill conditioned, so the first-order sweep
    // alone may crawl; the polish jumps to the exact optimum of the best
    // candidate face and the sweep resumes from there with fresh momentum.
    Vector w = Vector::Constant(q, 1.0 / static_cast<double>(q));
    Vector y = w;
    double momentum = 1.0;
    int it = 0;
    double resid = fixed_point_residual(w);
    double stall_mark = resid;
    int stall_iter = 0;
    int stall_window = 300; // doubled after each polish so they stay rare
    while (it < max_iter && resid > tol) {
        Vector w_next = project_to_simplex(y - (qp.Q * y + qp.c) / lip);
        if ((y - w_next).dot(w_next - w) > 0.0) {
            momentum = 1.0;
            y = w;
            w_next = project_to_simplex(y - (qp.Q * y + qp.c) / lip);
        }
        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        y = w_next + ((momentum - 1.0) / next_momentum) * (w_next - w);
        w = std::move(w_next);
        momentum = next_momentum;
        resid = fixed_point_residual(w);
        ++it;
        if (resid < 0.5 * stall_mark) {
            stall_mark = resid;
            stall_iter = it;
        } else if (it - stall_iter > stall_window) {
            const Vector refined = refine_by_enumeration(qp, w);
            if (refined.allFinite() && objective(refined) < objective(w))
                w = refined;
            y = w;
            momentum = 1.0;
            resid = fixed_point_residual(w);
            stall_mark = resid;
            stall_iter = it;
            stall_window *= 2;
        }
    }

    if (resid > tol) {
        const Vector refined = refine_by_enumeration(qp, w);
        if (refined.allFinite() && objective(refined) <= objective(w)) {
            w = refined;
            resid = fixed_point_residual(w);
        }
    } else {
        // Converged: one exact solve on the identified face sharpens the
        // last digits, which certificate consumers rely on.
        std::vector<Eigen::Index> support;
        for (Eigen::Index i = 0; i < q; ++i)
            if (w[i] > 1e-12)
                support.push_back(i);
        const Vector cand = solve_face(qp, support);
        if (cand.size() != 0 && objective(cand) <= objective(w)) {
            const double cand_resid = fixed_point_residual(cand);
            if (cand_resid <= resid) {
                w = cand;
                resid = cand_resid;
            }
        }
    }

    if (resid > tol)
        throw SubproblemFailure("solve_simplex_qp: KKT residual " + std::to_string(resid) +
                                " above tolerance after " + std::to_string(it) +
                                " iterations");

    res.weights = w;
    res.value = objective(w);
    res.iterations = it;
    res.kkt_residual = resid;
    return res;
}

DirectionResult solve_direction(const EvalRecord& record) {
    const Eigen::Index m = record.fvals.size();
    const Eigen::Index p = record.gvals.size();
    const Eigen::Index n = record.x.size();
    const Eigen::Index q = m + p;

    // Pieces: grad f_k' d for objectives, g_i + grad g_i' d for constraints.
    Matrix pieces(n, q);
    Vector offsets(q);
    pieces.leftCols(m) = record.jf.transpose();
    offsets.head(m).setZero();
    if (p > 0) {
        pieces.rightCols(p) = record.jg.transpose();
        offsets.tail(p) = record.gvals;
    }

    const SimplexQP qp{pieces.transpose() * pieces, -offsets};
    const SimplexQPResult dual = solve_simplex_qp(qp);

    DirectionResult out;
    out.weights = dual.weights;
    out.d = -(pieces * dual.weights);
    out.theta = (offsets + pieces.transpose() * out.d).maxCoeff() + 0.5 * out.d.squaredNorm();
    return out;
}

} // namespace motun
