#include <benchmark/benchmark.h>

#include <motun/corpus.hpp>
#include <motun/criticality.hpp>
#include <motun/descent.hpp>
#include <motun/pareto.hpp>
#include <motun/rng.hpp>
#include <motun/subproblem.hpp>
#include <motun/tunneling.hpp>

using namespace motun;

namespace {

EvalRecord corner_record() {
    return evaluate(get_problem("DTLZ1n2"), Vector{{1.0, 0.0}});
}

void bm_evaluate(benchmark::State& state) {
    const ProblemSpec& p = get_problem("DTLZ3n2");
    const Vector x{{0.3, 0.7}};
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate(p, x));
}
BENCHMARK(bm_evaluate);

void bm_solve_direction(benchmark::State& state) {
    const EvalRecord rec = corner_record();
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_direction(rec));
}
BENCHMARK(bm_solve_direction);

void bm_simplex_qp(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    Rng rng(5);
    Matrix g(4, q);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < q; ++j)
            g(i, j) = rng.next_normal();
    const SimplexQP qp{g.transpose() * g, Vector::Zero(q)};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_simplex_qp(qp));
}
BENCHMARK(bm_simplex_qp)->Arg(4)->Arg(8)->Arg(16);

void bm_fj_certificate(benchmark::State& state) {
    const EvalRecord rec = corner_record();
    for (auto _ : state)
        benchmark::DoNotOptimize(fj_certificate(rec));
}
BENCHMARK(bm_fj_certificate);

void bm_minimize(benchmark::State& state) {
    const ProblemSpec& p = get_problem("DTLZ1n2");
    const Vector x0{{0.62, 0.34}};
    for (auto _ : state)
        benchmark::DoNotOptimize(minimize(p, x0));
}
BENCHMARK(bm_minimize);

void bm_tunnel_solve(benchmark::State& state) {
    const ProblemSpec& base = get_problem("DTLZ1n2");
    const DescentResult local = minimize(base, Vector{{0.62, 0.34}});
    const TunnelingProblem tp =
        build_tunneling_problem(base, local.x_final, local.record.fvals, {});
    Rng rng(11);
    const Vector restart = perturbed_start(base, tp.pole, tp.params, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(minimize(tp.derived, restart));
}
BENCHMARK(bm_tunnel_solve);

void bm_pareto_filter(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    Rng rng(17);
    ParetoArchive archive;
    for (int i = 0; i < count; ++i) {
        ArchiveEntry e;
        e.x = Vector::Zero(1);
        e.run_id = i;
        e.fvals = Vector{{rng.next_double(), rng.next_double()}};
        archive.entries.push_back(std::move(e));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(filter_nondominated(archive));
}
BENCHMARK(bm_pareto_filter)->Arg(200)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
