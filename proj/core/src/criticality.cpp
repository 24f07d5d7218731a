#include "motun/criticality.hpp"

#include "motun/errors.hpp"
#include "motun/subproblem.hpp"

namespace motun {

const char* to_string(Classification c) {
    switch (c) {
    case Classification::Critical: return "Critical";
    case Classification::FritzJohnOnly: return "FritzJohnOnly";
    case Classification::NonStationary: return "NonStationary";
    }
    return "?";
}

namespace {

std::vector<int> active_constraints(const EvalRecord& record, double tol_active) {
    std::vector<int> active;
    for (Eigen::Index i = 0; i < record.gvals.size(); ++i)
        if (record.gvals[i] >= -tol_active)
            active.push_back(static_cast<int>(i));
    return active;
}

} // namespace

CriticalityCertificate fj_certificate(const EvalRecord& record, double tol_active,
                                      double tol_res) {
    if (!(tol_active > 0.0) || !(tol_res > 0.0))
        throw Error("fj_certificate: tolerances must be positive");
    const Eigen::Index m = record.fvals.size();
    const Eigen::Index n = record.x.size();
    const std::vector<int> active = active_constraints(record, tol_active);
    const Eigen::Index q = m + static_cast<Eigen::Index>(active.size());

    Matrix grads(n, q);
    grads.leftCols(m) = record.jf.transpose();
    for (std::size_t a = 0; a < active.size(); ++a)
        grads.col(m + static_cast<Eigen::Index>(a)) = record.jg.row(active[a]).transpose();

    const SimplexQP qp{grads.transpose() * grads, Vector::Zero(q)};
    const SimplexQPResult sol = solve_simplex_qp(qp);

    CriticalityCertificate cert;
    cert.lambda = sol.weights.head(m);
    cert.mu = Vector::Zero(record.gvals.size());
    for (std::size_t a = 0; a < active.size(); ++a)
        cert.mu[active[a]] = sol.weights[m + static_cast<Eigen::Index>(a)];
    cert.residual = (grads * sol.weights).norm();
    cert.active_set = active;
    if (cert.residual <= tol_res)
        cert.classification = cert.lambda.maxCoeff() >= 1e-8 ? Classification::Critical
                                                             : Classification::FritzJohnOnly;
    else
        cert.classification = Classification::NonStationary;
    return cert;
}

bool mfcq_holds(const EvalRecord& record, double tol_active, double tol_res) {
    if (!(tol_active > 0.0) || !(tol_res > 0.0))
        throw Error("mfcq_holds: tolerances must be positive");
    const std::vector<int> active = active_constraints(record, tol_active);
    if (active.empty())
        return true;
    const Eigen::Index n = record.x.size();
    const Eigen::Index q = static_cast<Eigen::Index>(active.size());
    Matrix grads(n, q);
    for (Eigen::Index a = 0; a < q; ++a)
        grads.col(a) = record.jg.row(active[static_cast<std::size_t>(a)]).transpose();

    // Gordan: MFCQ fails exactly when some nonzero nonnegative combination of
    // active gradients vanishes; on the simplex that reads min ||G mu|| = 0.
    const SimplexQP qp{grads.transpose() * grads, Vector::Zero(q)};
    const SimplexQPResult sol = solve_simplex_qp(qp);
    return (grads * sol.weights).norm() > tol_res;
}

} // namespace motun
