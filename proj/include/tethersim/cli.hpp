#pragma once

#include <cctype>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "tethersim/config_io.hpp"
#include "tethersim/plot.hpp"
#include "tethersim/trace_io.hpp"

namespace tethersim::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitExpectationFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitIoError = 3;

namespace cli_detail {

inline std::string safe_filename(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok =
            std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out;
}

inline std::string opt_num(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

inline std::string num3(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct RunResult {
    SimOutcome outcome;
    RunMetrics metrics;
};

}  // namespace cli_detail

/// Runs every scenario in a config file and writes per-run trace/metadata
/// files plus a summary table. Returns a process exit code.
inline int cmd_run(const std::string& config_path, const std::string& out_dir,
                   const std::vector<std::string>& overrides, std::ostream& log = std::cout) {
    namespace fs = std::filesystem;
    std::vector<NamedRun> runs;
    try {
        runs = expand_runs(read_text_file(config_path), overrides);
        for (const NamedRun& r : runs) r.def.setup.validate();
    } catch (const TraceIoError& e) {
        log << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        log << "error: cannot create output directory " << out_dir << ": " << ec.message() << "\n";
        return kExitIoError;
    }

    // Simulations are independent, so they run concurrently; all file writes
    // and logging stay on this thread, in config order.
    std::vector<std::future<cli_detail::RunResult>> futures;
    futures.reserve(runs.size());
    for (const NamedRun& r : runs) {
        futures.push_back(std::async(std::launch::async, [&r]() {
            cli_detail::RunResult res;
            res.outcome = run(r.def.setup);
            res.metrics = compute_metrics(res.outcome, r.def.setup);
            return res;
        }));
    }

    std::string summary =
        "name\tmode\tstatus\texpected\tmatched\tfinal_time_s\ttime_to_target_s\t"
        "min_obstacle_clearance_m\tmin_abs_wall_distance_m\tlambda_flips\tyanks\t"
        "in_view_fraction\tasv_path_m\tauv_path_m\n";
    bool all_matched = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const NamedRun& r = runs[i];
        cli_detail::RunResult res;
        try {
            res = futures[i].get();
        } catch (const std::exception& e) {
            log << "error: run " << r.name << " failed: " << e.what() << "\n";
            return kExitBadInput;
        }
        const std::string base = cli_detail::safe_filename(r.name);
        try {
            write_text_file((fs::path(out_dir) / (base + ".trace.tsv")).string(),
                            trace_to_tsv(res.outcome));
            write_text_file((fs::path(out_dir) / (base + ".meta.json")).string(),
                            run_metadata_json(r.scenario_json, res.outcome, res.metrics));
        } catch (const TraceIoError& e) {
            log << "error: " << e.what() << "\n";
            return kExitIoError;
        }
        const bool has_expectation = r.def.expected_outcome.has_value();
        const bool matched = !has_expectation || *r.def.expected_outcome == res.outcome.status;
        all_matched = all_matched && matched;
        const RunMetrics& m = res.metrics;
        summary += r.name;
        summary += '\t';
        summary += to_string(r.def.setup.mode);
        summary += '\t';
        summary += to_string(res.outcome.status);
        summary += '\t';
        summary += has_expectation ? to_string(*r.def.expected_outcome) : "none";
        summary += '\t';
        summary += matched ? "yes" : "NO";
        summary += '\t';
        summary += cli_detail::num3(res.outcome.final_time_s);
        summary += '\t';
        summary += cli_detail::opt_num(m.time_to_target_s);
        summary += '\t';
        summary += cli_detail::num3(m.min_obstacle_clearance_m);
        summary += '\t';
        summary += cli_detail::num3(m.min_abs_wall_distance_m);
        summary += '\t';
        summary += std::to_string(m.lambda_flip_count);
        summary += '\t';
        summary += std::to_string(m.yank_count);
        summary += '\t';
        summary += cli_detail::num3(m.formation_in_view_fraction);
        summary += '\t';
        summary += cli_detail::num3(m.asv_path_length_m);
        summary += '\t';
        summary += cli_detail::num3(m.auv_path_length_m);
        summary += '\n';
        log << r.name << ": " << to_string(res.outcome.status) << " at "
            << cli_detail::num3(res.outcome.final_time_s) << " s"
            << (has_expectation ? (matched ? " (expected)" : " (EXPECTED " +
                                                                 std::string(to_string(
                                                                     *r.def.expected_outcome)) +
                                                                 ")")
                                : "")
            << "\n";
    }
    try {
        write_text_file((fs::path(out_dir) / "summary.tsv").string(), summary);
    } catch (const TraceIoError& e) {
        log << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return all_matched ? kExitOk : kExitExpectationFailed;
}

/// Renders the SVG for a previously written trace. The sidecar metadata file
/// is located by replacing the ".trace.tsv" suffix with ".meta.json".
inline int cmd_plot(const std::string& trace_path, const std::string& out_path,
                    std::ostream& log = std::cout) {
    const std::string suffix = ".trace.tsv";
    std::string meta_path = trace_path;
    if (meta_path.size() > suffix.size() &&
        meta_path.compare(meta_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        meta_path.replace(meta_path.size() - suffix.size(), suffix.size(), ".meta.json");
    } else {
        log << "error: trace path must end in .trace.tsv so the metadata sidecar can be found\n";
        return kExitBadInput;
    }
    try {
        const LoadedTrace trace = load_trace_tsv(trace_path);
        const nlohmann::json meta = nlohmann::json::parse(read_text_file(meta_path));
        write_text_file(out_path, render_trace_svg(trace, meta));
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    log << "wrote " << out_path << "\n";
    return kExitOk;
}

/// Writes the full config document for a built-in scenario, ready to edit.
inline int cmd_dump_builtin(const std::string& name, const std::string& mode_name,
                            const std::string& out_path, std::ostream& log = std::cout) {
    std::string doc;
    try {
        const Mode mode = cfg_detail::parse_mode(mode_name);
        doc = config_document(scenarios::builtin(name, mode));
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    if (out_path.empty() || out_path == "-") {
        log << doc;
        return kExitOk;
    }
    try {
        write_text_file(out_path, doc);
    } catch (const TraceIoError& e) {
        log << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    log << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace tethersim::cli
