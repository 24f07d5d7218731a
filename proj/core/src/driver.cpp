#include "motun/driver.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "motun/criticality.hpp"
#include "motun/rng.hpp"

namespace motun {

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

void RunConfig::validate() const {
    if (problem.empty())
        throw Error("run config: problem name is empty");
    if (n_starts < 1)
        throw Error("run config: n_starts must be at least 1");
    if (cycles < 1)
        throw Error("run config: cycles must be at least 1");
    if (workers < 1)
        throw Error("run config: workers must be at least 1");
    descent.validate();
    tunneling.validate();
}

bool RunConfig::operator==(const RunConfig& o) const {
    return problem == o.problem && n_starts == o.n_starts && start_mode == o.start_mode &&
           seed == o.seed && tunneling.eta == o.tunneling.eta &&
           tunneling.eps_pole == o.tunneling.eps_pole && tunneling.delta == o.tunneling.delta &&
           descent.eps_crit == o.descent.eps_crit && descent.dir_tol == o.descent.dir_tol &&
           descent.max_iter == o.descent.max_iter &&
           descent.armijo_sigma == o.descent.armijo_sigma &&
           descent.backtrack_factor == o.descent.backtrack_factor &&
           descent.min_step == o.descent.min_step && cycles == o.cycles &&
           workers == o.workers && output_path == o.output_path && format == o.format;
}

namespace {

bool certificate_equal(const CriticalityCertificate& a, const CriticalityCertificate& b) {
    return a.residual == b.residual && a.classification == b.classification &&
           a.lambda == b.lambda && a.mu == b.mu && a.active_set == b.active_set;
}

bool phase_equal(const PhaseRecord& a, const PhaseRecord& b) {
    // wall_ms is informational and deliberately excluded
    return a.run_id == b.run_id && a.phase == b.phase && a.x == b.x && a.f == b.f &&
           certificate_equal(a.certificate, b.certificate) && a.tp_feasible == b.tp_feasible &&
           a.iterations == b.iterations && a.status == b.status;
}

bool entry_equal(const ArchiveEntry& a, const ArchiveEntry& b) {
    return a.run_id == b.run_id && a.phase == b.phase && a.x == b.x && a.fvals == b.fvals &&
           certificate_equal(a.certificate, b.certificate);
}

bool archive_equal(const ParetoArchive& a, const ParetoArchive& b) {
    if (a.entries.size() != b.entries.size())
        return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (!entry_equal(a.entries[i], b.entries[i]))
            return false;
    return true;
}

} // namespace

bool RunReport::operator==(const RunReport& o) const {
    if (!(config == o.config) || starts.size() != o.starts.size() || pfbt != o.pfbt ||
        pfat != o.pfat)
        return false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const StartRecord& a = starts[i];
        const StartRecord& b = o.starts[i];
        if (a.run_id != b.run_id || a.x0 != b.x0 || a.failure != b.failure ||
            a.phases.size() != b.phases.size())
            return false;
        for (std::size_t j = 0; j < a.phases.size(); ++j)
            if (!phase_equal(a.phases[j], b.phases[j]))
                return false;
    }
    return archive_equal(wpf, o.wpf) && archive_equal(wpft, o.wpft) &&
           archive_equal(pf, o.pf) && archive_equal(pft, o.pft);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

PhaseRecord make_phase_record(int run_id, Phase phase, const DescentResult& result,
                              const EvalRecord& base_record, bool solved_feasible,
                              double wall_ms) {
    PhaseRecord rec;
    rec.run_id = run_id;
    rec.phase = phase;
    rec.x = result.x_final;
    rec.f = base_record.fvals;
    rec.certificate = fj_certificate(base_record);
    rec.tp_feasible = solved_feasible;
    rec.iterations = result.iterations;
    rec.status = result.status;
    rec.wall_ms = wall_ms;
    return rec;
}

StartRecord run_single_start(const ProblemSpec& base, const RunConfig& config, int run_id,
                             const Vector& x0) {
    StartRecord sr;
    sr.run_id = run_id;
    sr.x0 = x0;
    Rng rng(Rng::mix(config.seed, static_cast<std::uint64_t>(run_id)));

    Vector start = x0;
    Vector prev_f;
    for (int cycle = 0; cycle < config.cycles; ++cycle) {
        DescentResult min_result;
        auto t0 = Clock::now();
        try {
            min_result = minimize(base, start, config.descent);
        } catch (const Error& e) {
            sr.failure = std::string("minimization: ") + e.what();
            return sr;
        }
        // A repeat cycle that improves no objective by more than 1e-8 over
        // the previous weak efficient point ends the start early.
        if (cycle > 0 && !(min_result.record.fvals.array() < prev_f.array() - 1e-8).any())
            break;
        sr.phases.push_back(make_phase_record(run_id, Phase::BeforeTunnel, min_result,
                                              min_result.record, min_result.feasible,
                                              ms_since(t0)));
        prev_f = min_result.record.fvals;

        t0 = Clock::now();
        try {
            const TunnelingProblem tp = build_tunneling_problem(
                base, min_result.x_final, min_result.record.fvals, config.tunneling);
            const Vector restart = perturbed_start(base, tp.pole, tp.params, rng);
            const DescentResult tun_result = minimize(tp.derived, restart, config.descent);
            const EvalRecord base_record = evaluate(base, tun_result.x_final);
            sr.phases.push_back(make_phase_record(run_id, Phase::AfterTunnel, tun_result,
                                                  base_record, tun_result.feasible,
                                                  ms_since(t0)));
            start = tun_result.x_final;
        } catch (const Error& e) {
            sr.failure = std::string("tunneling: ") + e.what();
            return sr;
        }
    }
    return sr;
}

} // namespace

RunReport run_experiment(const RunConfig& config) {
    config.validate();
    const ProblemSpec& base = get_problem(config.problem);

    RunConfig effective = config;
    if (effective.tunneling.delta <= 0.0) {
        effective.tunneling.delta =
            base.box ? 0.05 * (base.box->upper - base.box->lower).norm() : 0.1;
    }

    const std::vector<Vector> starts =
        uniform_starts(base, config.n_starts, config.start_mode, config.seed);

    std::vector<StartRecord> records(starts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= starts.size())
                break;
            records[i] = run_single_start(base, effective, static_cast<int>(i), starts[i]);
        }
    };
    if (effective.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < effective.workers; ++w)
            pool.emplace_back(work);
        for (std::thread& t : pool)
            t.join();
    }

    RunReport report;
    report.config = effective;
    report.starts = std::move(records);
    for (const StartRecord& sr : report.starts) {
        for (const PhaseRecord& ph : sr.phases) {
            if (ph.status == DescentStatus::StepFailure)
                continue; // failed phases leave no archive entry
            ParetoArchive& archive =
                ph.phase == Phase::BeforeTunnel ? report.wpf : report.wpft;
            archive.entries.push_back(
                ArchiveEntry{ph.x, ph.f, ph.phase, ph.certificate, ph.run_id});
        }
    }
    report.pf = filter_nondominated(report.wpf);
    report.pft = filter_nondominated(report.wpft);
    report.pfbt = report.pf.entries.size();
    report.pfat = report.pft.entries.size();
    return report;
}

} // namespace motun
