#include <doctest.h>

#include <fstream>
#include <sstream>

#include <motun/cli.hpp>
#include <motun/driver.hpp>
#include <motun/rng.hpp>

using namespace motun;

namespace {

RunConfig small_config() {
    RunConfig config;
    config.problem = "DTLZ1n2";
    config.n_starts = 6;
    config.seed = 42;
    config.workers = 2;
    return config;
}

int count_data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (!line.empty() && line[0] != '#')
            ++rows;
    }
    return rows;
}

} // namespace

TEST_CASE("run_experiment on a small configuration") {
    const RunReport report = run_experiment(small_config());
    REQUIRE(report.starts.size() == 6);

    int archivable_before = 0, archivable_after = 0, phase_records = 0;
    for (const StartRecord& sr : report.starts) {
        phase_records += static_cast<int>(sr.phases.size());
        for (const PhaseRecord& ph : sr.phases) {
            if (ph.status == DescentStatus::StepFailure)
                continue;
            (ph.phase == Phase::BeforeTunnel ? archivable_before : archivable_after)++;
        }
    }
    // one archive entry per archivable phase
    CHECK(static_cast<int>(report.wpf.entries.size()) == archivable_before);
    CHECK(static_cast<int>(report.wpft.entries.size()) == archivable_after);
    CHECK(report.pfbt == report.pf.entries.size());
    CHECK(report.pfat == report.pft.entries.size());
    CHECK(report.pfbt == front_size(report.wpf));
    CHECK(report.pfat == front_size(report.wpft));

    // archived certificates are certified or the row is flagged by status
    for (const ParetoArchive* archive : {&report.wpf, &report.wpft})
        for (const ArchiveEntry& e : archive->entries) {
            bool flagged = false;
            for (const StartRecord& sr : report.starts)
                for (const PhaseRecord& ph : sr.phases)
                    if (ph.run_id == e.run_id && ph.phase == e.phase && ph.x == e.x)
                        flagged = ph.status != DescentStatus::Critical;
            CHECK((flagged || e.certificate.classification != Classification::NonStationary));
        }

    // CSV data-row count = phase records + total archive sizes
    std::ostringstream csv;
    write_csv(report, csv);
    const int expected = phase_records + static_cast<int>(report.wpf.entries.size() +
                                                          report.wpft.entries.size() +
                                                          report.pf.entries.size() +
                                                          report.pft.entries.size());
    CHECK(count_data_rows(csv.str()) == expected);
}

TEST_CASE("tunneling solutions never worsen the pole objectives when feasible") {
    RunConfig config = small_config();
    config.n_starts = 12;
    const RunReport report = run_experiment(config);
    for (const StartRecord& sr : report.starts) {
        const PhaseRecord* before = nullptr;
        for (const PhaseRecord& ph : sr.phases) {
            if (ph.phase == Phase::BeforeTunnel)
                before = &ph;
            else if (before != nullptr && ph.tp_feasible)
                CHECK((ph.f.array() <= before->f.array() + 1e-8).all());
        }
    }
}

TEST_CASE("reports are deterministic") {
    const RunReport a = run_experiment(small_config());
    const RunReport b = run_experiment(small_config());
    CHECK(a == b);

    std::ostringstream csv_a, csv_b;
    write_csv(a, csv_a);
    write_csv(b, csv_b);
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("json round trip reconstructs the report") {
    const RunReport report = run_experiment(small_config());
    std::stringstream buffer;
    write_json(report, buffer);
    const RunReport reread = read_json(buffer);
    CHECK(report == reread);
}

TEST_CASE("failed starts are recorded and survive the round trip") {
    RunConfig config;
    config.problem = "DTLZ6n2"; // x2 = 0 lattice row has no finite record
    config.n_starts = 4;
    config.seed = 0;
    const RunReport report = run_experiment(config);
    int failures = 0;
    for (const StartRecord& sr : report.starts)
        failures += sr.failure.has_value();
    CHECK(failures > 0);
    CHECK(report.starts.size() == 4);

    std::stringstream buffer;
    write_json(report, buffer);
    CHECK(read_json(buffer) == report);
}

TEST_CASE("empty report renders a header-only csv") {
    RunReport report;
    std::ostringstream csv;
    write_csv(report, csv);
    CHECK(csv.str() == "run_id,phase,fj_residual,classification,tp_feasible,iterations,status\n");
}

TEST_CASE("emit_report writes files and rejects bad paths") {
    const RunReport report = run_experiment(small_config());
    const std::string path = "motun_test_report.json";
    emit_report(report, OutputFormat::Json, path);
    CHECK(load_json_report(path) == report);
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_report(report, OutputFormat::Csv, "no_such_dir/report.csv"),
                    IoFailure);
    CHECK_THROWS_AS(load_json_report("missing.json"), IoFailure);
}

TEST_CASE("invalid configurations abort the run") {
    RunConfig config = small_config();
    config.problem = "NoSuchProblem";
    CHECK_THROWS_AS(run_experiment(config), UnknownProblem);
    config = small_config();
    config.n_starts = 0;
    CHECK_THROWS_AS(run_experiment(config), Error);
}

TEST_CASE("parse_cli") {
    SUBCASE("run flags land in the config") {
        const CliCommand cmd = parse_cli({"run", "--problem", "DTLZ1n2", "--eta", "1.2",
                                          "--n-starts", "200", "--seed", "42"});
        CHECK(cmd.kind == CliCommand::Kind::Run);
        CHECK(cmd.run.problem == "DTLZ1n2");
        CHECK(cmd.run.tunneling.eta == 1.2);
        CHECK(cmd.run.n_starts == 200);
        CHECK(cmd.run.seed == 42);
        CHECK(cmd.run.start_mode == StartMode::Lattice);
        CHECK(cmd.run.format == OutputFormat::Csv);
        CHECK(cmd.run.cycles == 1);
    }
    SUBCASE("full flag set") {
        const CliCommand cmd = parse_cli(
            {"run", "--problem", "ZDT1", "--start-mode", "random", "--delta", "0.2",
             "--eps-crit", "1e-9", "--max-iter", "100", "--cycles", "2", "--workers", "4",
             "--format", "json", "--out", "report.json"});
        CHECK(cmd.run.start_mode == StartMode::Random);
        CHECK(cmd.run.tunneling.delta == 0.2);
        CHECK(cmd.run.descent.eps_crit == 1e-9);
        CHECK(cmd.run.descent.max_iter == 100);
        CHECK(cmd.run.cycles == 2);
        CHECK(cmd.run.workers == 4);
        CHECK(cmd.run.format == OutputFormat::Json);
        CHECK(cmd.run.output_path == "report.json");
    }
    SUBCASE("negative eta is a usage error") {
        CHECK_THROWS_WITH_AS(parse_cli({"run", "--problem", "DTLZ1n2", "--eta", "-1"}),
                             "--eta must be > 0", UsageError);
    }
    SUBCASE("missing subcommand is a usage error") {
        CHECK_THROWS_AS(parse_cli({}), UsageError);
    }
    SUBCASE("unknown problem is a usage error naming the flag") {
        try {
            parse_cli({"run", "--problem", "Nope"});
            FAIL("expected UsageError");
        } catch (const UsageError& e) {
            CHECK(std::string(e.what()).find("--problem") != std::string::npos);
        }
    }
    SUBCASE("unknown flag is a usage error") {
        CHECK_THROWS_AS(parse_cli({"run", "--problem", "DTLZ1n2", "--frobnicate", "3"}),
                        UsageError);
    }
    SUBCASE("other subcommands") {
        CHECK(parse_cli({"list"}).kind == CliCommand::Kind::List);
        const CliCommand check =
            parse_cli({"check-gradients", "--problem", "ZDT3", "--samples", "25"});
        CHECK(check.kind == CliCommand::Kind::CheckGradients);
        CHECK(check.problem == "ZDT3");
        CHECK(check.samples == 25);
    }
}

TEST_CASE("run_cli exit codes") {
    CHECK(run_cli(parse_cli({"list"})) == 0);
    CHECK(run_cli(parse_cli({"check-gradients", "--problem", "DTLZ2n2", "--samples", "10"})) ==
          0);
}

TEST_CASE("second case study anchor positions") {
    // Full per-start pipeline from x0 = (0.0048, 0.6076): the local solution
    // lands near (0, 0.5997) and the tunneled point near (0, 0.5014), both to
    // within 5e-2 (the reference solver differs, so only coarse positions are
    // comparable).
    const ProblemSpec& base = get_problem("DTLZ1n2");
    const DescentResult local = minimize(base, Vector{{0.0048, 0.6076}});
    CHECK((local.x_final - Vector{{0.0, 0.5997}}).norm() <= 5e-2);

    const TunnelingProblem tp =
        build_tunneling_problem(base, local.x_final, local.record.fvals, {});
    Rng rng(Rng::mix(4, 0));
    const Vector restart = perturbed_start(base, tp.pole, tp.params, rng);
    const DescentResult tunneled = minimize(tp.derived, restart);
    CHECK((tunneled.x_final - Vector{{0.0, 0.5014}}).norm() <= 5e-2);
    CHECK(tunneled.feasible); // feasible for the tunneling problem
    const Vector f_bar = evaluate(base, tunneled.x_final).fvals;
    CHECK(f_bar[1] < local.record.fvals[1]);
}

TEST_CASE("multi-cycle runs chain the tunneling output into the next descent") {
    RunConfig config = small_config();
    config.n_starts = 3;
    config.cycles = 3;
    const RunReport report = run_experiment(config);
    for (const StartRecord& sr : report.starts) {
        // phases alternate BeforeTunnel / AfterTunnel and never exceed cycles pairs
        CHECK(sr.phases.size() <= 6);
        for (std::size_t i = 0; i < sr.phases.size(); ++i)
            CHECK(sr.phases[i].phase ==
                  (i % 2 == 0 ? Phase::BeforeTunnel : Phase::AfterTunnel));
    }
}
