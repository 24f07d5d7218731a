#include "motun/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

namespace motun {

CliCommand parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"multi-objective tunneling optimizer"};
    app.require_subcommand(1);

    CliCommand cmd;
    std::string start_mode = "lattice";
    std::string format = "csv";

    CLI::App* run = app.add_subcommand("run", "run the two-phase tunneling experiment");
    run->add_option("--problem", cmd.run.problem, "registered problem name")->required();
    run->add_option("--n-starts", cmd.run.n_starts, "number of start points");
    run->add_option("--start-mode", start_mode, "lattice|random");
    run->add_option("--seed", cmd.run.seed, "rng seed");
    run->add_option("--eta", cmd.run.tunneling.eta, "pole strength");
    run->add_option("--delta", cmd.run.tunneling.delta, "restart perturbation radius");
    run->add_option("--eps-crit", cmd.run.descent.eps_crit, "stationarity tolerance");
    run->add_option("--max-iter", cmd.run.descent.max_iter, "descent iteration budget");
    run->add_option("--cycles", cmd.run.cycles, "tunneling cycles per start");
    run->add_option("--workers", cmd.run.workers, "worker threads");
    run->add_option("--format", format, "csv|json");
    run->add_option("--out", cmd.run.output_path, "output path (stdout when omitted)");

    app.add_subcommand("list", "list registered problems");

    CLI::App* check = app.add_subcommand("check-gradients",
                                         "compare analytic and finite-difference Jacobians");
    check->add_option("--problem", cmd.problem, "problem name (all problems when omitted)");
    check->add_option("--samples", cmd.samples, "sample points per problem");

    std::vector<const char*> argv;
    argv.push_back("motun");
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n" + app.help());
    }

    if (run->parsed()) {
        cmd.kind = CliCommand::Kind::Run;
        if (!(cmd.run.tunneling.eta > 0.0))
            throw UsageError("--eta must be > 0");
        if (run->count("--delta") > 0 && !(cmd.run.tunneling.delta > 0.0))
            throw UsageError("--delta must be > 0");
        if (!(cmd.run.descent.eps_crit > 0.0))
            throw UsageError("--eps-crit must be > 0");
        if (cmd.run.descent.max_iter < 1)
            throw UsageError("--max-iter must be >= 1");
        if (cmd.run.n_starts < 1)
            throw UsageError("--n-starts must be >= 1");
        if (cmd.run.cycles < 1)
            throw UsageError("--cycles must be >= 1");
        if (cmd.run.workers < 1)
            throw UsageError("--workers must be >= 1");
        if (start_mode == "lattice")
            cmd.run.start_mode = StartMode::Lattice;
        else if (start_mode == "random")
            cmd.run.start_mode = StartMode::Random;
        else
            throw UsageError("--start-mode must be lattice or random");
        if (format == "csv")
            cmd.run.format = OutputFormat::Csv;
        else if (format == "json")
            cmd.run.format = OutputFormat::Json;
        else
            throw UsageError("--format must be csv or json");
        try {
            get_problem(cmd.run.problem);
        } catch (const UnknownProblem&) {
            throw UsageError("--problem: unknown problem '" + cmd.run.problem +
                             "' (see `motun list`)");
        }
    } else if (app.get_subcommand("list")->parsed()) {
        cmd.kind = CliCommand::Kind::List;
    } else {
        cmd.kind = CliCommand::Kind::CheckGradients;
        if (cmd.samples < 1)
            throw UsageError("--samples must be >= 1");
        if (!cmd.problem.empty()) {
            try {
                get_problem(cmd.problem);
            } catch (const UnknownProblem&) {
                throw UsageError("--problem: unknown problem '" + cmd.problem +
                                 "' (see `motun list`)");
            }
        }
    }
    return cmd;
}

namespace {

int run_gradient_checks(const std::string& problem, int samples) {
    std::vector<std::string> names;
    if (problem.empty())
        names = list_problems();
    else
        names.push_back(problem);
    bool all_pass = true;
    for (const std::string& name : names) {
        const GradientCheckResult result = check_gradients(get_problem(name), samples);
        std::cout << name << ": " << (result.pass ? "OK" : "FAIL") << " (" << result.samples
                  << " points)\n";
        all_pass = all_pass && result.pass;
    }
    return all_pass ? 0 : 2;
}

} // namespace

int run_cli(const CliCommand& command) {
    switch (command.kind) {
    case CliCommand::Kind::List:
        for (const std::string& name : list_problems())
            std::cout << name << '\n';
        return 0;
    case CliCommand::Kind::CheckGradients:
        return run_gradient_checks(command.problem, command.samples);
    case CliCommand::Kind::Run: {
        const RunReport report = run_experiment(command.run);
        emit_report(report, command.run.format, command.run.output_path);
        std::cerr << command.run.problem << ": front size " << report.pfbt
                  << " before tunneling, " << report.pfat << " after\n";
        return 0;
    }
    }
    return 2;
}

} // namespace motun
