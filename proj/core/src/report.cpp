#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "motun/driver.hpp"

namespace motun {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

Phase phase_from_string(const std::string& s) {
    if (s == "BeforeTunnel")
        return Phase::BeforeTunnel;
    if (s == "AfterTunnel")
        return Phase::AfterTunnel;
    throw IoFailure("report: unknown phase '" + s + "'");
}

DescentStatus status_from_string(const std::string& s) {
    if (s == "Critical")
        return DescentStatus::Critical;
    if (s == "IterLimit")
        return DescentStatus::IterLimit;
    if (s == "StepFailure")
        return DescentStatus::StepFailure;
    throw IoFailure("report: unknown status '" + s + "'");
}

Classification classification_from_string(const std::string& s) {
    if (s == "Critical")
        return Classification::Critical;
    if (s == "FritzJohnOnly")
        return Classification::FritzJohnOnly;
    if (s == "NonStationary")
        return Classification::NonStationary;
    throw IoFailure("report: unknown classification '" + s + "'");
}

OutputFormat format_from_string(const std::string& s) {
    if (s == "csv")
        return OutputFormat::Csv;
    if (s == "json")
        return OutputFormat::Json;
    throw IoFailure("report: unknown format '" + s + "'");
}

std::pair<Eigen::Index, Eigen::Index> detect_dims(const RunReport& report) {
    for (const StartRecord& sr : report.starts)
        for (const PhaseRecord& ph : sr.phases)
            return {ph.x.size(), ph.f.size()};
    for (const ParetoArchive* a : {&report.wpf, &report.wpft, &report.pf, &report.pft})
        if (!a->entries.empty())
            return {a->entries.front().x.size(), a->entries.front().fvals.size()};
    try {
        const ProblemSpec& p = get_problem(report.config.problem);
        return {p.n, p.m};
    } catch (const Error&) {
        return {0, 0};
    }
}

void write_row(std::ostream& out, int run_id, Phase phase, const Vector& x, const Vector& f,
               double residual, Classification classification, bool tp_feasible,
               int iterations, DescentStatus status) {
    out << run_id << ',' << to_string(phase);
    for (Eigen::Index j = 0; j < x.size(); ++j)
        out << ',' << fmt(x[j]);
    for (Eigen::Index k = 0; k < f.size(); ++k)
        out << ',' << fmt(f[k]);
    out << ',' << fmt(residual) << ',' << to_string(classification) << ','
        << bool_str(tp_feasible) << ',' << iterations << ',' << to_string(status) << '\n';
}

} // namespace

void write_csv(const RunReport& report, std::ostream& out) {
    const auto [n, m] = detect_dims(report);
    out << "run_id,phase";
    for (Eigen::Index j = 1; j <= n; ++j)
        out << ",x_" << j;
    for (Eigen::Index k = 1; k <= m; ++k)
        out << ",f_" << k;
    out << ",fj_residual,classification,tp_feasible,iterations,status\n";

    // Archive rows reuse the columns of the generating phase record.
    std::multimap<std::pair<int, int>, const PhaseRecord*> by_key;
    for (const StartRecord& sr : report.starts) {
        for (const PhaseRecord& ph : sr.phases) {
            write_row(out, ph.run_id, ph.phase, ph.x, ph.f, ph.certificate.residual,
                      ph.certificate.classification, ph.tp_feasible, ph.iterations, ph.status);
            by_key.emplace(std::make_pair(ph.run_id, static_cast<int>(ph.phase)), &ph);
        }
    }

    const std::pair<const char*, const ParetoArchive*> sections[] = {
        {"# WPF", &report.wpf}, {"# PF", &report.pf},
        {"# WPFT", &report.wpft}, {"# PFT", &report.pft}};
    for (const auto& [marker, archive] : sections) {
        if (archive->entries.empty())
            continue;
        out << marker << '\n';
        for (const ArchiveEntry& e : archive->entries) {
            const PhaseRecord* source = nullptr;
            const auto key = std::make_pair(e.run_id, static_cast<int>(e.phase));
            for (auto it = by_key.lower_bound(key); it != by_key.upper_bound(key); ++it)
                if (it->second->x == e.x)
                    source = it->second;
            write_row(out, e.run_id, e.phase, e.x, e.fvals, e.certificate.residual,
                      e.certificate.classification, source ? source->tp_feasible : false,
                      source ? source->iterations : 0,
                      source ? source->status : DescentStatus::Critical);
        }
    }
}

namespace {

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const Json& arr) {
    Vector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

Json row_core(int run_id, Phase phase, const Vector& x, const Vector& f,
              const CriticalityCertificate& cert) {
    Json row;
    row["run_id"] = run_id;
    row["phase"] = to_string(phase);
    for (Eigen::Index j = 0; j < x.size(); ++j)
        row["x_" + std::to_string(j + 1)] = x[j];
    for (Eigen::Index k = 0; k < f.size(); ++k)
        row["f_" + std::to_string(k + 1)] = f[k];
    row["fj_residual"] = cert.residual;
    row["classification"] = to_string(cert.classification);
    row["lambda"] = vector_to_json(cert.lambda);
    row["mu"] = vector_to_json(cert.mu);
    row["active_set"] = cert.active_set;
    return row;
}

void read_row_core(const Json& row, int& run_id, Phase& phase, Vector& x, Vector& f,
                   CriticalityCertificate& cert) {
    run_id = row.at("run_id").get<int>();
    phase = phase_from_string(row.at("phase").get<std::string>());
    std::vector<double> xs, fs;
    for (int j = 1; row.contains("x_" + std::to_string(j)); ++j)
        xs.push_back(row.at("x_" + std::to_string(j)).get<double>());
    for (int k = 1; row.contains("f_" + std::to_string(k)); ++k)
        fs.push_back(row.at("f_" + std::to_string(k)).get<double>());
    x = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    f = Eigen::Map<const Vector>(fs.data(), static_cast<Eigen::Index>(fs.size()));
    cert.residual = row.at("fj_residual").get<double>();
    cert.classification = classification_from_string(row.at("classification").get<std::string>());
    cert.lambda = vector_from_json(row.at("lambda"));
    cert.mu = vector_from_json(row.at("mu"));
    cert.active_set = row.at("active_set").get<std::vector<int>>();
}

Json archive_to_json(const ParetoArchive& archive) {
    Json arr = Json::array();
    for (const ArchiveEntry& e : archive.entries)
        arr.push_back(row_core(e.run_id, e.phase, e.x, e.fvals, e.certificate));
    return arr;
}

ParetoArchive archive_from_json(const Json& arr) {
    ParetoArchive archive;
    for (const Json& row : arr) {
        ArchiveEntry e;
        read_row_core(row, e.run_id, e.phase, e.x, e.fvals, e.certificate);
        archive.entries.push_back(std::move(e));
    }
    return archive;
}

} // namespace

void write_json(const RunReport& report, std::ostream& out) {
    Json j;
    Json cfg;
    cfg["problem"] = report.config.problem;
    cfg["n_starts"] = report.config.n_starts;
    cfg["start_mode"] = to_string(report.config.start_mode);
    cfg["seed"] = report.config.seed;
    cfg["eta"] = report.config.tunneling.eta;
    cfg["eps_pole"] = report.config.tunneling.eps_pole;
    cfg["delta"] = report.config.tunneling.delta;
    cfg["eps_crit"] = report.config.descent.eps_crit;
    cfg["dir_tol"] = report.config.descent.dir_tol;
    cfg["max_iter"] = report.config.descent.max_iter;
    cfg["armijo_sigma"] = report.config.descent.armijo_sigma;
    cfg["backtrack_factor"] = report.config.descent.backtrack_factor;
    cfg["min_step"] = report.config.descent.min_step;
    cfg["cycles"] = report.config.cycles;
    cfg["workers"] = report.config.workers;
    cfg["out"] = report.config.output_path;
    cfg["format"] = to_string(report.config.format);
    j["config"] = std::move(cfg);

    Json starts = Json::array();
    for (const StartRecord& sr : report.starts) {
        Json s;
        s["run_id"] = sr.run_id;
        s["x0"] = vector_to_json(sr.x0);
        s["failure"] = sr.failure ? Json(*sr.failure) : Json(nullptr);
        Json rows = Json::array();
        for (const PhaseRecord& ph : sr.phases) {
            Json row = row_core(ph.run_id, ph.phase, ph.x, ph.f, ph.certificate);
            row["tp_feasible"] = ph.tp_feasible;
            row["iterations"] = ph.iterations;
            row["status"] = to_string(ph.status);
            row["wall_ms"] = ph.wall_ms;
            rows.push_back(std::move(row));
        }
        s["rows"] = std::move(rows);
        starts.push_back(std::move(s));
    }
    j["starts"] = std::move(starts);
    j["wpf"] = archive_to_json(report.wpf);
    j["pf"] = archive_to_json(report.pf);
    j["wpft"] = archive_to_json(report.wpft);
    j["pft"] = archive_to_json(report.pft);
    j["pfbt"] = report.pfbt;
    j["pfat"] = report.pfat;
    out << j.dump(2) << '\n';
}

RunReport read_json(std::istream& in) {
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoFailure(std::string("report: invalid JSON: ") + e.what());
    }
    RunReport report;
    const Json& cfg = j.at("config");
    report.config.problem = cfg.at("problem").get<std::string>();
    report.config.n_starts = cfg.at("n_starts").get<int>();
    report.config.start_mode = start_mode_from_string(cfg.at("start_mode").get<std::string>());
    report.config.seed = cfg.at("seed").get<std::uint64_t>();
    report.config.tunneling.eta = cfg.at("eta").get<double>();
    report.config.tunneling.eps_pole = cfg.at("eps_pole").get<double>();
    report.config.tunneling.delta = cfg.at("delta").get<double>();
    report.config.descent.eps_crit = cfg.at("eps_crit").get<double>();
    report.config.descent.dir_tol = cfg.at("dir_tol").get<double>();
    report.config.descent.max_iter = cfg.at("max_iter").get<int>();
    report.config.descent.armijo_sigma = cfg.at("armijo_sigma").get<double>();
    report.config.descent.backtrack_factor = cfg.at("backtrack_factor").get<double>();
    report.config.descent.min_step = cfg.at("min_step").get<double>();
    report.config.cycles = cfg.at("cycles").get<int>();
    report.config.workers = cfg.at("workers").get<int>();
    report.config.output_path = cfg.at("out").get<std::string>();
    report.config.format = format_from_string(cfg.at("format").get<std::string>());

    for (const Json& s : j.at("starts")) {
        StartRecord sr;
        sr.run_id = s.at("run_id").get<int>();
        sr.x0 = vector_from_json(s.at("x0"));
        if (!s.at("failure").is_null())
            sr.failure = s.at("failure").get<std::string>();
        for (const Json& row : s.at("rows")) {
            PhaseRecord ph;
            read_row_core(row, ph.run_id, ph.phase, ph.x, ph.f, ph.certificate);
            ph.tp_feasible = row.at("tp_feasible").get<bool>();
            ph.iterations = row.at("iterations").get<int>();
            ph.status = status_from_string(row.at("status").get<std::string>());
            ph.wall_ms = row.at("wall_ms").get<double>();
            sr.phases.push_back(std::move(ph));
        }
        report.starts.push_back(std::move(sr));
    }
    report.wpf = archive_from_json(j.at("wpf"));
    report.pf = archive_from_json(j.at("pf"));
    report.wpft = archive_from_json(j.at("wpft"));
    report.pft = archive_from_json(j.at("pft"));
    report.pfbt = j.at("pfbt").get<std::size_t>();
    report.pfat = j.at("pfat").get<std::size_t>();
    return report;
}

void emit_report(const RunReport& report, OutputFormat format, const std::string& path) {
    const auto write = [&](std::ostream& out) {
        if (format == OutputFormat::Csv)
            write_csv(report, out);
        else
            write_json(report, out);
        if (!out)
            throw IoFailure("report: write failed" + (path.empty() ? "" : " for " + path));
    };
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw IoFailure("report: cannot open '" + path + "' for writing");
    write(out);
}

RunReport load_json_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoFailure("report: cannot open '" + path + "' for reading");
    return read_json(in);
}

} // namespace motun
