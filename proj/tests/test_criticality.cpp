#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <motun/corpus.hpp>
#include <motun/criticality.hpp>
#include <motun/descent.hpp>
#include <motun/rng.hpp>

#include "oracles.hpp"

using namespace motun;

namespace {

EvalRecord unconstrained_record(const Matrix& jf) {
    EvalRecord rec;
    rec.x = Vector::Zero(jf.cols());
    rec.fvals = Vector::Zero(jf.rows());
    rec.gvals = Vector(0);
    rec.jf = jf;
    rec.jg = Matrix(0, jf.cols());
    return rec;
}

} // namespace

TEST_CASE("certificate at the DTLZ1n2 bound corner") {
    const ProblemSpec& p = get_problem("DTLZ1n2");
    const EvalRecord rec = evaluate(p, Vector{{1.0, 0.0}});
    const CriticalityCertificate cert = fj_certificate(rec);

    CHECK(cert.classification == Classification::Critical);
    CHECK(cert.residual <= 1e-8);
    // Support on the second objective and the x1 <= 1 bound; the unnormalized
    // multiplier ratio cancels (-13, 0) against (1, 0).
    CHECK(cert.lambda[1] > 1e-8);
    CHECK(cert.mu[2] > 1e-8);
    CHECK(cert.mu[2] / cert.lambda[1] == doctest::Approx(13.0).epsilon(1e-7));
    CHECK(cert.lambda[0] <= 1e-12);
    CHECK(cert.mu[0] == 0.0);
    CHECK(cert.mu[3] <= 1e-12);
    CHECK(std::count(cert.active_set.begin(), cert.active_set.end(), 2) == 1);

    // Residual agrees with the enumeration oracle over the same columns.
    Matrix cols(2, 2 + cert.active_set.size());
    cols.col(0) = rec.jf.row(0).transpose();
    cols.col(1) = rec.jf.row(1).transpose();
    for (std::size_t a = 0; a < cert.active_set.size(); ++a)
        cols.col(2 + a) = rec.jg.row(cert.active_set[a]).transpose();
    CHECK(cert.residual == doctest::Approx(oracle::min_norm_over_simplex(cols)).epsilon(1e-8));
}

TEST_CASE("balanced opposing gradients are critical") {
    const CriticalityCertificate cert =
        fj_certificate(unconstrained_record(Matrix{{1.0, 0.0}, {-1.0, 0.0}}));
    CHECK(cert.classification == Classification::Critical);
    CHECK(cert.residual <= 1e-12);
    CHECK(cert.lambda[0] == doctest::Approx(0.5));
    CHECK(cert.lambda[1] == doctest::Approx(0.5));
}

TEST_CASE("aligned gradients are nonstationary with unit residual") {
    const CriticalityCertificate cert =
        fj_certificate(unconstrained_record(Matrix{{1.0, 0.0}, {1.0, 0.0}}));
    CHECK(cert.classification == Classification::NonStationary);
    CHECK(cert.residual == doctest::Approx(1.0));
}

TEST_CASE("normalization: multipliers sum to one") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        Matrix jf(2, 3);
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 3; ++j)
                jf(k, j) = rng.next_normal();
        const CriticalityCertificate cert = fj_certificate(unconstrained_record(jf));
        CHECK(cert.lambda.sum() + cert.mu.sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(cert.lambda.minCoeff() >= -1e-12);
    }
}

TEST_CASE("residual is invariant under objective and constraint permutations") {
    Rng rng(5);
    // Columns in general position in R^5 make the minimizer unique, so the
    // multipliers must permute exactly; with more pieces than dimensions only
    // the residual is well defined.
    for (int trial = 0; trial < 20; ++trial) {
        EvalRecord rec;
        rec.x = Vector::Zero(5);
        rec.fvals = Vector::Zero(3);
        rec.jf = Matrix(3, 5);
        rec.jg = Matrix(2, 5);
        rec.gvals = Vector{{0.0, -1e-9}}; // both active
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 5; ++j)
                rec.jf(k, j) = rng.next_normal();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 5; ++j)
                rec.jg(i, j) = rng.next_normal();

        EvalRecord permuted = rec;
        permuted.jf.row(0) = rec.jf.row(2);
        permuted.jf.row(2) = rec.jf.row(0);
        permuted.jg.row(0) = rec.jg.row(1);
        permuted.jg.row(1) = rec.jg.row(0);
        permuted.gvals = Vector{{-1e-9, 0.0}};

        const CriticalityCertificate a = fj_certificate(rec);
        const CriticalityCertificate b = fj_certificate(permuted);
        CHECK(a.residual == doctest::Approx(b.residual).epsilon(1e-8));
        CHECK(a.lambda[0] == doctest::Approx(b.lambda[2]).epsilon(1e-6));
        CHECK(a.lambda[2] == doctest::Approx(b.lambda[0]).epsilon(1e-6));
        CHECK(a.mu[0] == doctest::Approx(b.mu[1]).epsilon(1e-6));
    }
    // Degenerate (overcomplete) instances: residual still permutation
    // invariant even though multipliers need not be unique.
    for (int trial = 0; trial < 20; ++trial) {
        EvalRecord rec;
        rec.x = Vector::Zero(3);
        rec.fvals = Vector::Zero(4);
        rec.jf = Matrix(4, 3);
        rec.jg = Matrix(0, 3);
        rec.gvals = Vector(0);
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 3; ++j)
                rec.jf(k, j) = rng.next_normal();
        EvalRecord permuted = rec;
        permuted.jf.row(1) = rec.jf.row(3);
        permuted.jf.row(3) = rec.jf.row(1);
        CHECK(fj_certificate(rec).residual ==
              doctest::Approx(fj_certificate(permuted).residual).epsilon(1e-8));
    }
}

TEST_CASE("descent-solver criticality is certified") {
    const DescentOptions opts;
    for (const char* name : {"DTLZ1n2", "Fonseca", "ex005"}) {
        const ProblemSpec& p = get_problem(name);
        Rng rng(11);
        int certified = 0;
        for (int trial = 0; trial < 6; ++trial) {
            Vector x0(p.n);
            for (int j = 0; j < p.n; ++j)
                x0[j] = p.box->lower[j] +
                        (p.box->upper[j] - p.box->lower[j]) * rng.next_double();
            const DescentResult res = minimize(p, x0, opts);
            if (res.status != DescentStatus::Critical || !res.feasible)
                continue;
            const CriticalityCertificate cert = fj_certificate(res.record);
            CHECK(cert.classification != Classification::NonStationary);
            CHECK(cert.residual <= 1e-5);
            ++certified;
        }
        CHECK(certified > 0);
    }
}

TEST_CASE("mfcq via Gordan's alternative") {
    SUBCASE("single active gradient cannot vanish") {
        EvalRecord rec;
        rec.x = Vector::Zero(2);
        rec.fvals = Vector::Zero(2);
        rec.jf = Matrix::Ones(2, 2);
        rec.gvals = Vector{{0.0}};
        rec.jg = Matrix{{-1.0, 0.0}};
        CHECK(mfcq_holds(rec));
    }
    SUBCASE("opposing active gradients defeat it") {
        EvalRecord rec;
        rec.x = Vector::Zero(2);
        rec.fvals = Vector::Zero(2);
        rec.jf = Matrix::Ones(2, 2);
        rec.gvals = Vector{{0.0, 0.0}};
        rec.jg = Matrix{{1.0, 0.0}, {-1.0, 0.0}};
        CHECK_FALSE(mfcq_holds(rec));
    }
    SUBCASE("empty active set holds trivially") {
        EvalRecord rec;
        rec.x = Vector::Zero(2);
        rec.fvals = Vector::Zero(2);
        rec.jf = Matrix::Ones(2, 2);
        rec.gvals = Vector{{-1.0}};
        rec.jg = Matrix{{1.0, 1.0}};
        CHECK(mfcq_holds(rec));
    }
    SUBCASE("DTLZ1n2 corner activities are independent") {
        const EvalRecord rec = evaluate(get_problem("DTLZ1n2"), Vector{{1.0, 0.0}});
        CHECK(mfcq_holds(rec));
    }
}
