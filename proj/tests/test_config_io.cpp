#include "catch2/catch_amalgamated.hpp"

#include <string>
#include <vector>

#include "json.hpp"
#include "tethersim/config_io.hpp"

using namespace tethersim;
using nlohmann::json;

TEST_CASE("scenario serialization round-trips to a fixed point", "[config]") {
    for (const std::string& name : scenarios::builtin_names()) {
        for (Mode mode : {Mode::Baseline, Mode::DogWalking}) {
            const ScenarioDef def = scenarios::builtin(name, mode);
            const json first = scenario_to_json(def);
            const ScenarioDef reparsed = scenario_from_json(first);
            const json second = scenario_to_json(reparsed);
            INFO(def.name);
            REQUIRE(first == second);
            REQUIRE(reparsed.name == def.name);
            REQUIRE(reparsed.expected_outcome == def.expected_outcome);
            REQUIRE(reparsed.setup.mode == mode);
            REQUIRE_NOTHROW(reparsed.setup.validate());
        }
    }
}

TEST_CASE("a canonical document expands to exactly its own scenario", "[config]") {
    const ScenarioDef def = scenarios::builtin("case3", Mode::DogWalking);
    const std::string doc = config_document(def);
    const auto runs = expand_runs(doc);
    REQUIRE(runs.size() == 1);
    REQUIRE(runs[0].name == def.name);
    REQUIRE(scenario_to_json(runs[0].def) == scenario_to_json(def));
    REQUIRE(runs[0].scenario_json == scenario_to_json(def));
}

TEST_CASE("builtin references expand and accept patches", "[config]") {
    SECTION("a bare reference picks up the builtin definition") {
        const std::string doc =
            R"({"schema_version": 1, "scenario": {"builtin": "case2", "mode": "baseline"}})";
        const auto runs = expand_runs(doc);
        REQUIRE(runs.size() == 1);
        REQUIRE(runs[0].name == "case2_baseline");
        REQUIRE(runs[0].def.setup.mode == Mode::Baseline);
        REQUIRE(runs[0].def.expected_outcome == SimStatus::Stuck);
    }

    SECTION("sibling keys merge over the builtin values") {
        const std::string doc = R"({
            "schema_version": 1,
            "scenario": {"builtin": "case2", "mode": "baseline",
                         "sim": {"max_time_s": 12.5}}
        })";
        const auto runs = expand_runs(doc);
        REQUIRE(runs[0].def.setup.sim.max_time_s == 12.5);
        // Untouched siblings keep the builtin definitions.
        REQUIRE(runs[0].def.setup.sim.stuck_window_s == 20.0);
        REQUIRE(runs[0].def.setup.dt_s == 0.02);
    }

    SECTION("an unknown builtin name is a config error") {
        const std::string doc = R"({"schema_version": 1, "scenario": {"builtin": "case9"}})";
        REQUIRE_THROWS_AS(expand_runs(doc), ConfigError);
    }

    SECTION("a scenario list expands in order") {
        const std::string doc = R"({
            "schema_version": 1,
            "scenarios": [{"builtin": "case1"}, {"builtin": "case1", "mode": "baseline"}]
        })";
        const auto runs = expand_runs(doc);
        REQUIRE(runs.size() == 2);
        REQUIRE(runs[0].name == "case1_dog_walking");
        REQUIRE(runs[1].name == "case1_baseline");
    }
}

TEST_CASE("sweeps take the cartesian product and tag each run", "[config]") {
    const std::string doc = R"({
        "schema_version": 1,
        "scenario": {"builtin": "case1"},
        "sweep": {"paradigm.beta": [0.1, 0.2], "sim.seed": [1, 2]}
    })";
    const auto runs = expand_runs(doc);
    REQUIRE(runs.size() == 4);
    REQUIRE(runs[0].name == "case1_dog_walking__paradigm.beta=0.1__sim.seed=1");
    REQUIRE(runs[1].name == "case1_dog_walking__paradigm.beta=0.1__sim.seed=2");
    REQUIRE(runs[2].name == "case1_dog_walking__paradigm.beta=0.2__sim.seed=1");
    REQUIRE(runs[3].name == "case1_dog_walking__paradigm.beta=0.2__sim.seed=2");
    REQUIRE(runs[0].def.setup.paradigm.beta == 0.1);
    REQUIRE(runs[2].def.setup.paradigm.beta == 0.2);
    REQUIRE(runs[1].def.setup.sim.seed == 2);
    REQUIRE(runs[3].def.setup.sim.seed == 2);

    SECTION("an empty sweep list is rejected") {
        const std::string bad = R"({
            "schema_version": 1,
            "scenario": {"builtin": "case1"},
            "sweep": {"paradigm.beta": []}
        })";
        REQUIRE_THROWS_AS(expand_runs(bad), ConfigError);
    }

    SECTION("a sweep over an unknown path is rejected") {
        const std::string bad = R"({
            "schema_version": 1,
            "scenario": {"builtin": "case1"},
            "sweep": {"paradigm.gamma": [0.1]}
        })";
        REQUIRE_THROWS_AS(expand_runs(bad), ConfigError);
    }
}

TEST_CASE("command-line overrides rewrite leaves across every run", "[config]") {
    const ScenarioDef def = scenarios::builtin("case1", Mode::DogWalking);
    const std::string doc = config_document(def);

    SECTION("numbers and bare strings both apply") {
        const auto runs = expand_runs(doc, {"paradigm.beta=0.05", "mode=baseline"});
        REQUIRE(runs.size() == 1);
        REQUIRE(runs[0].def.setup.paradigm.beta == 0.05);
        REQUIRE(runs[0].def.setup.mode == Mode::Baseline);
    }

    SECTION("malformed or unknown overrides are rejected") {
        REQUIRE_THROWS_AS(expand_runs(doc, {"no_equals_sign"}), ConfigError);
        REQUIRE_THROWS_AS(expand_runs(doc, {"paradigm.gamma=1"}), ConfigError);
        REQUIRE_THROWS_AS(expand_runs(doc, {"world=5"}), ConfigError);
    }
}

TEST_CASE("strict schema checks reject malformed documents", "[config]") {
    const std::string doc = config_document(scenarios::builtin("case1", Mode::DogWalking));

    SECTION("text that is not JSON") {
        REQUIRE_THROWS_AS(expand_runs("{nope"), ConfigError);
    }

    SECTION("missing or mismatched schema version") {
        REQUIRE_THROWS_AS(expand_runs(R"({"scenario": {"builtin": "case1"}})"), ConfigError);
        REQUIRE_THROWS_AS(
            expand_runs(R"({"schema_version": 2, "scenario": {"builtin": "case1"}})"),
            ConfigError);
    }

    SECTION("a document without scenarios") {
        REQUIRE_THROWS_AS(expand_runs(R"({"schema_version": 1})"), ConfigError);
    }

    SECTION("unknown keys at any depth") {
        json root = json::parse(doc);
        root["extra"] = 1;
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);

        root = json::parse(doc);
        root["scenario"]["paradigm"]["bogus"] = 1;
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);

        root = json::parse(doc);
        root["scenario"]["world"]["obstacles"][0]["frob"] = 1;
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);
    }

    SECTION("bad enum spellings") {
        json root = json::parse(doc);
        root["scenario"]["mode"] = "sideways";
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);

        root = json::parse(doc);
        root["scenario"]["expected_outcome"] = "flying";
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);
    }

    SECTION("type mismatches on leaves") {
        json root = json::parse(doc);
        root["scenario"]["paradigm"]["initial_lambda"] = 1.5;
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);

        root = json::parse(doc);
        root["scenario"]["sim"]["max_time_s"] = "soon";
        REQUIRE_THROWS_AS(expand_runs(root.dump()), ConfigError);
    }
}
