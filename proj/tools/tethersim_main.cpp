#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tethersim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tethersim: two-vehicle leader/follower simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    CLI::App* run = app.add_subcommand("run", "run the scenarios in a config file");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_dir, "output directory for traces and summary");
    run->add_option("--set", overrides,
                    "override a config value, e.g. --set paradigm.beta=0.1 (repeatable)");

    std::string trace_path;
    std::string svg_path;
    CLI::App* plot = app.add_subcommand("plot", "render a trace as an SVG");
    plot->add_option("--trace", trace_path, "input <name>.trace.tsv")->required();
    plot->add_option("--out", svg_path, "output SVG path")->required();

    std::string builtin_name;
    std::string builtin_mode = "dog_walking";
    std::string builtin_out;
    CLI::App* dump = app.add_subcommand("dump-builtin", "print a built-in scenario config");
    dump->add_option("name", builtin_name, "one of: case1, case2, case3, obscured_tank")
        ->required();
    dump->add_option("--mode", builtin_mode, "baseline or dog_walking");
    dump->add_option("--out", builtin_out, "write to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return tethersim::cli::cmd_run(config_path, out_dir, overrides);
    if (plot->parsed()) return tethersim::cli::cmd_plot(trace_path, svg_path);
    return tethersim::cli::cmd_dump_builtin(builtin_name, builtin_mode, builtin_out);
}
