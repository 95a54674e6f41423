#pragma once

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tethersim/scenarios.hpp"

namespace tethersim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

namespace cfg_detail {

using nlohmann::json;

inline void require_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + " must be an object");
}

// Strict schema check: every present key must be known and every required key
// present. Unknown keys are rejected so typos cannot silently fall back to
// defaults.
inline void check_keys(const json& obj, const std::string& ctx,
                       std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional) {
    require_object(obj, ctx);
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : required) known = known || item.key() == k;
        for (const char* k : optional) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key " + ctx + "." + item.key());
    }
    for (const char* k : required) {
        if (!obj.contains(k)) throw ConfigError("missing key " + ctx + "." + k);
    }
}

inline double get_num(const json& obj, const std::string& ctx, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(ctx + "." + key + " must be a number");
    return v.get<double>();
}

inline int get_int(const json& obj, const std::string& ctx, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(ctx + "." + key + " must be an integer");
    return v.get<int>();
}

inline std::string get_str(const json& obj, const std::string& ctx, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(ctx + "." + key + " must be a string");
    return v.get<std::string>();
}

inline Mode parse_mode(const std::string& s) {
    if (s == "baseline") return Mode::Baseline;
    if (s == "dog_walking") return Mode::DogWalking;
    throw ConfigError("mode must be \"baseline\" or \"dog_walking\", got \"" + s + "\"");
}

inline SimStatus parse_status(const std::string& s) {
    for (SimStatus st : {SimStatus::TargetReached, SimStatus::Stuck, SimStatus::Collision,
                         SimStatus::FormationBroken, SimStatus::Timeout}) {
        if (s == to_string(st)) return st;
    }
    throw ConfigError("unknown outcome \"" + s + "\"");
}

}  // namespace cfg_detail

inline nlohmann::json scenario_to_json(const ScenarioDef& def) {
    using nlohmann::json;
    const RunSetup& s = def.setup;
    json w;
    w["tank_length_x_m"] = s.world.tank.length_x_m;
    w["tank_width_y_m"] = s.world.tank.width_y_m;
    w["tank_depth_z_m"] = s.world.tank.depth_z_m;
    w["asv_start_x_m"] = s.world.asv_start.x;
    w["asv_start_y_m"] = s.world.asv_start.y;
    w["asv_target_x_m"] = s.world.asv_target.x;
    w["asv_target_y_m"] = s.world.asv_target.y;
    w["auv_start_x_m"] = s.world.auv_start.x;
    w["auv_start_y_m"] = s.world.auv_start.y;
    w["auv_hold_depth_m"] = s.world.auv_hold_depth_m;
    w["obstacles"] = json::array();
    for (const Obstacle& o : s.world.obstacles) {
        json jo;
        jo["label"] = o.label;
        if (const auto* c = std::get_if<CircleShape>(&o.shape)) {
            jo["shape"] = "circle";
            jo["center_x_m"] = c->center.x;
            jo["center_y_m"] = c->center.y;
            jo["radius_m"] = c->radius_m;
        } else {
            const auto& b = std::get<BoxShape>(o.shape);
            jo["shape"] = "box";
            jo["min_x_m"] = b.min.x;
            jo["min_y_m"] = b.min.y;
            jo["max_x_m"] = b.max.x;
            jo["max_y_m"] = b.max.y;
        }
        w["obstacles"].push_back(jo);
    }

    json dyn;
    dyn["dt_s"] = s.dt_s;
    dyn["asv_tau_s"] = s.asv_dynamics.axes[0].tau_s;
    dyn["asv_sat_xy_mps"] = s.asv_dynamics.axes[0].saturation;
    dyn["asv_sat_yaw_radps"] = s.asv_dynamics.axes[5].saturation;
    dyn["auv_tau_s"] = s.auv_dynamics.axes[0].tau_s;
    dyn["auv_sat_xy_mps"] = s.auv_dynamics.axes[0].saturation;
    dyn["auv_sat_z_mps"] = s.auv_dynamics.axes[2].saturation;
    dyn["auv_sat_rollpitch_radps"] = s.auv_dynamics.axes[3].saturation;
    dyn["auv_sat_yaw_radps"] = s.auv_dynamics.axes[5].saturation;

    json cam;
    cam["width_px"] = s.camera.width_px;
    cam["height_px"] = s.camera.height_px;
    cam["focal_px"] = s.camera.focal_px;
    cam["safe_fraction"] = s.camera.safe_fraction;
    cam["pixel_noise_std_px"] = s.camera.pixel_noise_std_px;

    const auto ibvs_to_json = [](const IbvsConfig& c) {
        json ib;
        ib["gain_x_mps_per_px"] = c.gain_x_mps_per_px;
        ib["gain_y_mps_per_px"] = c.gain_y_mps_per_px;
        ib["xi_max_x_mps"] = c.xi_max_x_mps;
        ib["xi_max_y_mps"] = c.xi_max_y_mps;
        return ib;
    };

    json sonar;
    sonar["cone_half_angle_rad"] = s.sonar.cone_half_angle_rad;
    sonar["max_range_m"] = s.sonar.max_range_m;
    sonar["range_noise_std_m"] = s.sonar.range_noise_std_m;

    json avoid;
    avoid["alpha_m2ps"] = s.avoidance.alpha;
    avoid["safe_distance_m"] = s.avoidance.safe_distance_m;
    avoid["xi_max_x_mps"] = s.avoidance.xi_max_x_mps;
    avoid["xi_max_y_mps"] = s.avoidance.xi_max_y_mps;

    json planner;
    planner["kp_per_s"] = s.planner.kp_per_s;
    planner["kd"] = s.planner.kd;
    planner["capture_radius_m"] = s.planner.capture_radius_m;
    planner["max_speed_mps"] = s.planner.max_speed_mps;
    planner["yaw_kp_per_s"] = s.planner.yaw_kp_per_s;

    json depth;
    depth["target_depth_m"] = s.depth_hold.target_depth_m;
    depth["kp_per_s"] = s.depth_hold.kp_per_s;
    depth["kd"] = s.depth_hold.kd;
    depth["attitude_kp_per_s"] = s.depth_hold.attitude_kp_per_s;
    depth["attitude_kd"] = s.depth_hold.attitude_kd;

    json paradigm;
    paradigm["k_v"] = s.paradigm.k_v;
    paradigm["beta"] = s.paradigm.beta;
    paradigm["window_s"] = s.paradigm.window_s;
    paradigm["protocol_rate_hz"] = s.paradigm.protocol_rate_hz;
    paradigm["wall_safe_m"] = s.paradigm.wall_safe_m;
    paradigm["yank_rate_radps"] = s.paradigm.yank_rate_radps;
    paradigm["yank_duration_s"] = s.paradigm.yank_duration_s;
    paradigm["detect_threshold_rad"] = s.paradigm.detect_threshold_rad;
    paradigm["detect_lookback_s"] = s.paradigm.detect_lookback_s;
    paradigm["initial_lambda"] = s.paradigm.initial_lambda;

    json sim;
    sim["max_time_s"] = s.sim.max_time_s;
    sim["asv_footprint_m"] = s.sim.asv_footprint_m;
    sim["auv_footprint_m"] = s.sim.auv_footprint_m;
    sim["formation_grace_steps"] = s.sim.formation_grace_steps;
    sim["stuck_window_s"] = s.sim.stuck_window_s;
    sim["stuck_epsilon_m"] = s.sim.stuck_epsilon_m;
    sim["seed"] = s.sim.seed;

    json out;
    out["name"] = def.name;
    out["mode"] = to_string(s.mode);
    if (def.expected_outcome) out["expected_outcome"] = to_string(*def.expected_outcome);
    out["world"] = w;
    out["dynamics"] = dyn;
    out["camera"] = cam;
    out["asv_ibvs"] = ibvs_to_json(s.asv_ibvs);
    out["auv_ibvs"] = ibvs_to_json(s.auv_ibvs);
    out["sonar"] = sonar;
    out["avoidance"] = avoid;
    out["planner"] = planner;
    out["depth_hold"] = depth;
    out["paradigm"] = paradigm;
    out["sim"] = sim;
    return out;
}

inline ScenarioDef scenario_from_json(const nlohmann::json& j) {
    using namespace cfg_detail;
    check_keys(j, "scenario", {"name", "mode", "world", "dynamics", "camera", "asv_ibvs", "auv_ibvs", "sonar",
                               "avoidance", "planner", "depth_hold", "paradigm", "sim"},
               {"expected_outcome"});
    ScenarioDef def;
    def.name = get_str(j, "scenario", "name");
    RunSetup& s = def.setup;
    s.mode = parse_mode(get_str(j, "scenario", "mode"));
    if (j.contains("expected_outcome")) {
        def.expected_outcome = parse_status(get_str(j, "scenario", "expected_outcome"));
    }

    const auto& w = j.at("world");
    check_keys(w, "world",
               {"tank_length_x_m", "tank_width_y_m", "tank_depth_z_m", "asv_start_x_m",
                "asv_start_y_m", "asv_target_x_m", "asv_target_y_m", "auv_start_x_m",
                "auv_start_y_m", "auv_hold_depth_m", "obstacles"},
               {});
    s.world.tank = {get_num(w, "world", "tank_length_x_m"), get_num(w, "world", "tank_width_y_m"),
                    get_num(w, "world", "tank_depth_z_m")};
    s.world.asv_start = {get_num(w, "world", "asv_start_x_m"), get_num(w, "world", "asv_start_y_m")};
    s.world.asv_target = {get_num(w, "world", "asv_target_x_m"),
                          get_num(w, "world", "asv_target_y_m")};
    s.world.auv_start = {get_num(w, "world", "auv_start_x_m"), get_num(w, "world", "auv_start_y_m")};
    s.world.auv_hold_depth_m = get_num(w, "world", "auv_hold_depth_m");
    if (!w.at("obstacles").is_array()) throw ConfigError("world.obstacles must be an array");
    for (const auto& jo : w.at("obstacles")) {
        Obstacle o;
        const std::string shape = get_str(jo, "obstacle", "shape");
        if (shape == "circle") {
            check_keys(jo, "obstacle", {"label", "shape", "center_x_m", "center_y_m", "radius_m"},
                       {});
            o.shape = CircleShape{{get_num(jo, "obstacle", "center_x_m"),
                                   get_num(jo, "obstacle", "center_y_m")},
                                  get_num(jo, "obstacle", "radius_m")};
        } else if (shape == "box") {
            check_keys(jo, "obstacle", {"label", "shape", "min_x_m", "min_y_m", "max_x_m", "max_y_m"},
                       {});
            o.shape =
                BoxShape{{get_num(jo, "obstacle", "min_x_m"), get_num(jo, "obstacle", "min_y_m")},
                         {get_num(jo, "obstacle", "max_x_m"), get_num(jo, "obstacle", "max_y_m")}};
        } else {
            throw ConfigError("obstacle.shape must be \"circle\" or \"box\"");
        }
        o.label = get_str(jo, "obstacle", "label");
        s.world.obstacles.push_back(o);
    }

    const auto& dyn = j.at("dynamics");
    check_keys(dyn, "dynamics",
               {"dt_s", "asv_tau_s", "asv_sat_xy_mps", "asv_sat_yaw_radps", "auv_tau_s",
                "auv_sat_xy_mps", "auv_sat_z_mps", "auv_sat_rollpitch_radps", "auv_sat_yaw_radps"},
               {});
    s.dt_s = get_num(dyn, "dynamics", "dt_s");
    {
        const double sat_xy = get_num(dyn, "dynamics", "asv_sat_xy_mps");
        s.asv_dynamics = make_dynamics(s.dt_s, get_num(dyn, "dynamics", "asv_tau_s"),
                                       {sat_xy, sat_xy, 0.0, 0.0, 0.0,
                                        get_num(dyn, "dynamics", "asv_sat_yaw_radps")});
        const double a_xy = get_num(dyn, "dynamics", "auv_sat_xy_mps");
        const double a_rp = get_num(dyn, "dynamics", "auv_sat_rollpitch_radps");
        s.auv_dynamics = make_dynamics(s.dt_s, get_num(dyn, "dynamics", "auv_tau_s"),
                                       {a_xy, a_xy, get_num(dyn, "dynamics", "auv_sat_z_mps"), a_rp,
                                        a_rp, get_num(dyn, "dynamics", "auv_sat_yaw_radps")});
    }

    const auto& cam = j.at("camera");
    check_keys(cam, "camera",
               {"width_px", "height_px", "focal_px", "safe_fraction", "pixel_noise_std_px"}, {});
    s.camera = CameraModel{get_num(cam, "camera", "width_px"), get_num(cam, "camera", "height_px"),
                           get_num(cam, "camera", "focal_px"), get_num(cam, "camera", "safe_fraction"),
                           get_num(cam, "camera", "pixel_noise_std_px")};

    const auto ibvs_from_json = [](const nlohmann::json& ib, const char* where,
                                   CameraFacing facing) {
        check_keys(ib, where,
                   {"gain_x_mps_per_px", "gain_y_mps_per_px", "xi_max_x_mps", "xi_max_y_mps"}, {});
        return IbvsConfig{get_num(ib, where, "gain_x_mps_per_px"),
                          get_num(ib, where, "gain_y_mps_per_px"),
                          get_num(ib, where, "xi_max_x_mps"),
                          get_num(ib, where, "xi_max_y_mps"), facing};
    };
    s.asv_ibvs = ibvs_from_json(j.at("asv_ibvs"), "asv_ibvs", CameraFacing::Down);
    s.auv_ibvs = ibvs_from_json(j.at("auv_ibvs"), "auv_ibvs", CameraFacing::Up);

    const auto& so = j.at("sonar");
    check_keys(so, "sonar", {"cone_half_angle_rad", "max_range_m", "range_noise_std_m"}, {});
    s.sonar = SonarConfig{get_num(so, "sonar", "cone_half_angle_rad"),
                          get_num(so, "sonar", "max_range_m"),
                          get_num(so, "sonar", "range_noise_std_m")};

    const auto& av = j.at("avoidance");
    check_keys(av, "avoidance", {"alpha_m2ps", "safe_distance_m", "xi_max_x_mps", "xi_max_y_mps"},
               {});
    s.avoidance = AvoidanceConfig{get_num(av, "avoidance", "alpha_m2ps"),
                                  get_num(av, "avoidance", "safe_distance_m"),
                                  get_num(av, "avoidance", "xi_max_x_mps"),
                                  get_num(av, "avoidance", "xi_max_y_mps")};

    const auto& pl = j.at("planner");
    check_keys(pl, "planner",
               {"kp_per_s", "kd", "capture_radius_m", "max_speed_mps", "yaw_kp_per_s"}, {});
    s.planner = PlannerConfig{{s.world.asv_target},
                              get_num(pl, "planner", "kp_per_s"),
                              get_num(pl, "planner", "kd"),
                              get_num(pl, "planner", "capture_radius_m"),
                              get_num(pl, "planner", "max_speed_mps"),
                              get_num(pl, "planner", "yaw_kp_per_s")};

    const auto& dh = j.at("depth_hold");
    check_keys(dh, "depth_hold", {"target_depth_m", "kp_per_s", "kd", "attitude_kp_per_s",
                                  "attitude_kd"},
               {});
    s.depth_hold = DepthHoldConfig{get_num(dh, "depth_hold", "target_depth_m"),
                                   get_num(dh, "depth_hold", "kp_per_s"),
                                   get_num(dh, "depth_hold", "kd"),
                                   get_num(dh, "depth_hold", "attitude_kp_per_s"),
                                   get_num(dh, "depth_hold", "attitude_kd")};

    const auto& pa = j.at("paradigm");
    check_keys(pa, "paradigm",
               {"k_v", "beta", "window_s", "protocol_rate_hz", "wall_safe_m", "yank_rate_radps",
                "yank_duration_s", "detect_threshold_rad", "detect_lookback_s", "initial_lambda"},
               {});
    s.paradigm = ParadigmConfig{get_num(pa, "paradigm", "k_v"),
                                get_num(pa, "paradigm", "beta"),
                                get_num(pa, "paradigm", "window_s"),
                                get_num(pa, "paradigm", "protocol_rate_hz"),
                                get_num(pa, "paradigm", "wall_safe_m"),
                                get_num(pa, "paradigm", "yank_rate_radps"),
                                get_num(pa, "paradigm", "yank_duration_s"),
                                get_num(pa, "paradigm", "detect_threshold_rad"),
                                get_num(pa, "paradigm", "detect_lookback_s"),
                                get_int(pa, "paradigm", "initial_lambda")};

    const auto& sm = j.at("sim");
    check_keys(sm, "sim",
               {"max_time_s", "asv_footprint_m", "auv_footprint_m", "formation_grace_steps",
                "stuck_window_s", "stuck_epsilon_m", "seed"},
               {});
    s.sim = SimConfig{get_num(sm, "sim", "max_time_s"),
                      get_num(sm, "sim", "asv_footprint_m"),
                      get_num(sm, "sim", "auv_footprint_m"),
                      get_int(sm, "sim", "formation_grace_steps"),
                      get_num(sm, "sim", "stuck_window_s"),
                      get_num(sm, "sim", "stuck_epsilon_m"),
                      static_cast<std::uint32_t>(get_int(sm, "sim", "seed"))};
    return def;
}

struct NamedRun {
    std::string name;
    ScenarioDef def;
    nlohmann::json scenario_json;  // fully expanded form, echoed into run metadata
};

namespace cfg_detail {

// Recursive overwrite of base by patch (objects merge, everything else replaces).
inline void deep_merge(json& base, const json& patch) {
    if (!base.is_object() || !patch.is_object()) {
        base = patch;
        return;
    }
    for (const auto& item : patch.items()) {
        if (base.contains(item.key())) {
            deep_merge(base[item.key()], item.value());
        } else {
            base[item.key()] = item.value();
        }
    }
}

// Sets a dotted path like "paradigm.beta" on an existing leaf; unknown paths
// are rejected for the same reason unknown keys are.
inline void set_path(json& obj, const std::string& path, const json& value) {
    json* node = &obj;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("override path not found: " + path);
        }
        if (dot == std::string::npos) {
            if ((*node)[key].is_object() || (*node)[key].is_array()) {
                throw ConfigError("override path must address a leaf value: " + path);
            }
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

inline json parse_override_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);  // bare strings stay strings
    }
}

// Expands a scenario entry: a "builtin" reference is materialized to its full
// form first, then the remaining keys are merged over it as overrides.
inline json expand_scenario_entry(const json& entry) {
    require_object(entry, "scenario");
    if (!entry.contains("builtin")) return entry;
    if (!entry.at("builtin").is_string()) throw ConfigError("scenario.builtin must be a string");
    const std::string name = entry.at("builtin").get<std::string>();
    Mode mode = Mode::DogWalking;
    if (entry.contains("mode")) mode = parse_mode(get_str(entry, "scenario", "mode"));
    json base;
    try {
        base = scenario_to_json(scenarios::builtin(name, mode));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    json patch = entry;
    patch.erase("builtin");
    deep_merge(base, patch);
    return base;
}

}  // namespace cfg_detail

/// Parses a config document (one scenario or a suite) and expands builtins,
/// sweep blocks (Cartesian product over the listed values), and command-line
/// overrides into a flat, ordered list of runs.
inline std::vector<NamedRun> expand_runs(const std::string& config_text,
                                         const std::vector<std::string>& overrides = {}) {
    using namespace cfg_detail;
    json root;
    try {
        root = json::parse(config_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(root, "config", {"schema_version"}, {"scenario", "scenarios", "sweep"});
    if (!root.at("schema_version").is_number_integer() ||
        root.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
    }
    std::vector<json> entries;
    if (root.contains("scenario")) entries.push_back(root.at("scenario"));
    if (root.contains("scenarios")) {
        if (!root.at("scenarios").is_array()) throw ConfigError("scenarios must be an array");
        for (const auto& e : root.at("scenarios")) entries.push_back(e);
    }
    if (entries.empty()) throw ConfigError("config defines no scenarios");

    // Sweep: named parameter path -> list of values, Cartesian product.
    std::vector<std::pair<std::string, std::vector<json>>> sweep;
    if (root.contains("sweep")) {
        require_object(root.at("sweep"), "sweep");
        for (const auto& item : root.at("sweep").items()) {
            if (!item.value().is_array() || item.value().empty()) {
                throw ConfigError("sweep." + item.key() + " must be a non-empty array");
            }
            sweep.emplace_back(item.key(), std::vector<json>(item.value().begin(),
                                                             item.value().end()));
        }
    }
    std::vector<std::vector<std::size_t>> combos{{}};
    for (const auto& [key, values] : sweep) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& combo : combos) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                auto c = combo;
                c.push_back(i);
                next.push_back(c);
            }
        }
        combos = std::move(next);
    }

    std::vector<NamedRun> runs;
    for (const json& entry : entries) {
        const json expanded = expand_scenario_entry(entry);
        for (const auto& combo : combos) {
            json run_json = expanded;
            std::string suffix;
            for (std::size_t k = 0; k < sweep.size(); ++k) {
                set_path(run_json, sweep[k].first, sweep[k].second[combo[k]]);
                suffix += "__" + sweep[k].first + "=" + sweep[k].second[combo[k]].dump();
            }
            for (const std::string& ov : overrides) {
                const std::size_t eq = ov.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw ConfigError("override must look like key.path=value: " + ov);
                }
                set_path(run_json, ov.substr(0, eq), parse_override_value(ov.substr(eq + 1)));
            }
            NamedRun run;
            run.def = scenario_from_json(run_json);
            run.def.name += suffix;
            run.name = run.def.name;
            run_json["name"] = run.name;
            run.scenario_json = run_json;
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

/// Canonical single-scenario config document for a ScenarioDef.
inline std::string config_document(const ScenarioDef& def) {
    nlohmann::json root;
    root["schema_version"] = kSchemaVersion;
    root["scenario"] = scenario_to_json(def);
    return root.dump(2) + "\n";
}

}  // namespace tethersim
