#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tethersim/scenarios.hpp"

namespace tethersim {

struct TraceIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace trace_detail {

inline const std::vector<std::string>& columns() {
    static const std::vector<std::string> cols = {
        "t_s",
        "asv_x_m", "asv_y_m", "asv_yaw_rad",
        "asv_vx_mps", "asv_vy_mps", "asv_vyaw_radps",
        "auv_x_m", "auv_y_m", "auv_z_m", "auv_yaw_rad",
        "auv_vx_mps", "auv_vy_mps", "auv_vz_mps", "auv_vyaw_radps",
        "asv_view_w_px", "asv_view_h_px", "asv_view_region",
        "auv_view_w_px", "auv_view_h_px", "auv_view_region",
        "sonar_range_m", "wall_distance_m",
        "planner_x_mps", "planner_y_mps",
        "asv_ibvs_x_mps", "asv_ibvs_y_mps",
        "yaw_injection_radps",
        "avoid_x_mps", "avoid_y_mps",
        "auv_ibvs_x_mps", "auv_ibvs_y_mps",
        "depth_cmd_z_mps",
        "k_p", "k_v", "lambda", "mu", "yank_active", "level",
    };
    return cols;
}

// %.17g round-trips doubles exactly, so identical runs produce identical files.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_px(const std::optional<PixelCoord>& px, bool want_w) {
    if (!px) return "nan";
    return fmt(want_w ? px->w : px->h);
}

}  // namespace trace_detail

inline std::string trace_to_tsv(const SimOutcome& outcome) {
    using namespace trace_detail;
    std::string out;
    const auto& cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += cols[i];
        out += (i + 1 < cols.size()) ? '\t' : '\n';
    }
    for (const TraceRecord& r : outcome.trace) {
        std::vector<std::string> f;
        f.reserve(cols.size());
        f.push_back(fmt(r.t_s));
        f.push_back(fmt(r.asv.position.x));
        f.push_back(fmt(r.asv.position.y));
        f.push_back(fmt(r.asv.yaw_rad));
        f.push_back(fmt(r.asv.velocity.x));
        f.push_back(fmt(r.asv.velocity.y));
        f.push_back(fmt(r.asv.velocity.yaw));
        f.push_back(fmt(r.auv.position.x));
        f.push_back(fmt(r.auv.position.y));
        f.push_back(fmt(r.auv.z_m));
        f.push_back(fmt(r.auv.yaw_rad));
        f.push_back(fmt(r.auv.velocity.x));
        f.push_back(fmt(r.auv.velocity.y));
        f.push_back(fmt(r.auv.velocity.z));
        f.push_back(fmt(r.auv.velocity.yaw));
        f.push_back(fmt_px(r.asv_view.pixel, true));
        f.push_back(fmt_px(r.asv_view.pixel, false));
        f.push_back(to_string(r.asv_view.region));
        f.push_back(fmt_px(r.auv_view.pixel, true));
        f.push_back(fmt_px(r.auv_view.pixel, false));
        f.push_back(to_string(r.auv_view.region));
        f.push_back(r.sonar.range_m ? fmt(*r.sonar.range_m) : "nan");
        f.push_back(fmt(r.wall_distance_m));
        f.push_back(fmt(r.planner_cmd.x));
        f.push_back(fmt(r.planner_cmd.y));
        f.push_back(fmt(r.asv_ibvs_cmd.x));
        f.push_back(fmt(r.asv_ibvs_cmd.y));
        f.push_back(fmt(r.yaw_injection_radps));
        f.push_back(fmt(r.avoidance_cmd.x));
        f.push_back(fmt(r.avoidance_cmd.y));
        f.push_back(fmt(r.auv_ibvs_cmd.x));
        f.push_back(fmt(r.auv_ibvs_cmd.y));
        f.push_back(fmt(r.depth_cmd.z));
        f.push_back(fmt(r.k_p));
        f.push_back(fmt(r.k_v));
        f.push_back(std::to_string(r.lambda));
        f.push_back(std::to_string(r.mu));
        f.push_back(r.yank_active ? "1" : "0");
        f.push_back(std::to_string(r.level));
        for (std::size_t i = 0; i < f.size(); ++i) {
            out += f[i];
            out += (i + 1 < f.size()) ? '\t' : '\n';
        }
    }
    return out;
}

inline nlohmann::json metrics_to_json(const RunMetrics& m) {
    nlohmann::json j;
    j["status"] = to_string(m.status);
    j["time_to_target_s"] =
        m.time_to_target_s ? nlohmann::json(*m.time_to_target_s) : nlohmann::json();
    j["min_obstacle_clearance_m"] = std::isinf(m.min_obstacle_clearance_m)
                                        ? nlohmann::json()
                                        : nlohmann::json(m.min_obstacle_clearance_m);
    j["min_abs_wall_distance_m"] = m.min_abs_wall_distance_m;
    j["lambda_flip_count"] = m.lambda_flip_count;
    j["yank_count"] = m.yank_count;
    j["formation_in_view_fraction"] = m.formation_in_view_fraction;
    j["asv_path_length_m"] = m.asv_path_length_m;
    j["auv_path_length_m"] = m.auv_path_length_m;
    return j;
}

/// Sidecar metadata written next to each trace so a plot (or a human) can
/// recover the world geometry and outcome without the original config.
inline std::string run_metadata_json(const nlohmann::json& scenario_json,
                                     const SimOutcome& outcome, const RunMetrics& metrics) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["scenario"] = scenario_json;
    j["status"] = to_string(outcome.status);
    j["final_time_s"] = outcome.final_time_s;
    j["steps"] = outcome.trace.size();
    j["metrics"] = metrics_to_json(metrics);
    j["columns"] = trace_detail::columns();
    return j.dump(2) + "\n";
}

struct LoadedTrace {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        throw TraceIoError("trace has no column named " + name);
    }

    double num(std::size_t row, std::size_t col) const {
        return std::stod(rows.at(row).at(col));
    }
};

inline LoadedTrace load_trace_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceIoError("cannot open trace file: " + path);
    LoadedTrace t;
    std::string line;
    if (!std::getline(in, line)) throw TraceIoError("trace file is empty: " + path);
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, '\t')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        while (std::getline(ss, cell, '\t')) row.push_back(cell);
        if (row.size() != t.columns.size()) {
            throw TraceIoError("trace row has " + std::to_string(row.size()) + " fields, expected " +
                               std::to_string(t.columns.size()));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw TraceIoError("trace has a header but no samples: " + path);
    return t;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TraceIoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw TraceIoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceIoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace tethersim
