#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "motun/corpus.hpp"
#include "motun/descent.hpp"
#include "motun/pareto.hpp"
#include "motun/tunneling.hpp"

namespace motun {

enum class OutputFormat { Csv, Json };

const char* to_string(OutputFormat f);

struct RunConfig {
    std::string problem;
    int n_starts = 200;
    StartMode start_mode = StartMode::Lattice;
    std::uint64_t seed = 0;
    TunnelingParams tunneling;
    DescentOptions descent;
    int cycles = 1;
    int workers = 1;
    std::string output_path; ///< empty writes to stdout
    OutputFormat format = OutputFormat::Csv;

    void validate() const;
    bool operator==(const RunConfig&) const;
};

/// One solved phase (minimization or tunneling) of one start.
struct PhaseRecord {
    int run_id = 0;
    Phase phase = Phase::BeforeTunnel;
    Vector x;
    Vector f; ///< base-problem objective values
    CriticalityCertificate certificate; ///< on the base problem
    bool tp_feasible = false; ///< feasibility for the problem solved in this phase
    int iterations = 0;
    DescentStatus status = DescentStatus::IterLimit;
    double wall_ms = 0.0; ///< informational; excluded from equality
};

struct StartRecord {
    int run_id = 0;
    Vector x0;
    std::vector<PhaseRecord> phases; ///< alternating before/after, one pair per cycle
    std::optional<std::string> failure;
};

struct RunReport {
    RunConfig config;
    std::vector<StartRecord> starts;
    ParetoArchive wpf;  ///< weak front before tunneling (one entry per archived start)
    ParetoArchive wpft; ///< weak front after tunneling
    ParetoArchive pf;   ///< nondominated filter of wpf
    ParetoArchive pft;  ///< nondominated filter of wpft
    std::size_t pfbt = 0; ///< front size before tunneling, = pf.entries.size()
    std::size_t pfat = 0; ///< front size after tunneling, = pft.entries.size()

    /// Content equality over everything serialized except wall times.
    bool operator==(const RunReport&) const;
};

/// Runs the two-phase tunneling experiment over all start points: per start,
/// descend to a weak efficient point, build the tunneling problem around it,
/// solve that from a perturbed restart, then filter both archives. Start
/// points are processed by config.workers threads and merged in start-index
/// order, so results are deterministic for fixed seed and workers.
RunReport run_experiment(const RunConfig& config);

/// Writes the report in the given format. Throws IoFailure.
void emit_report(const RunReport& report, OutputFormat format, const std::string& path);
void write_csv(const RunReport& report, std::ostream& out);
void write_json(const RunReport& report, std::ostream& out);

/// Reconstructs a report from its JSON form.
RunReport load_json_report(const std::string& path);
RunReport read_json(std::istream& in);

} // namespace motun
