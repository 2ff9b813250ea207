// paraamp: command-line front end for the varactor amplifier model.
//
//   paraamp <material|design|gain|sweep> [--config FILE] [--out DIR]
//           [--material sto|kto] [--override section.key=value]...
//
// Worker threads for sweeps come from PARAAMP_THREADS (default: all cores).

#include <iostream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "paraamp/cli/commands.hpp"
#include "paraamp/cli/config.hpp"
#include "paraamp/version.hpp"

int main(int argc, char** argv) {
    using namespace paraamp;

    CLI::App app{"Quantum-paraelectric varactor parametric amplifier toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::string material;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_dir, "Output directory (overrides output.path)");
        sub->add_option("-m,--material", material, "Built-in material")->check(CLI::IsMember({"sto", "kto"}));
        sub->add_option("--override", overrides, "Config override, section.key=value (repeatable)");
    };
    add_common(app.add_subcommand("material", "Permittivity and loss tangent versus bias field"));
    add_common(app.add_subcommand("design", "Operating point report at the optimal 3WM bias"));
    add_common(app.add_subcommand("gain", "Reflection gain profiles for a list of pump ratios"));
    add_common(app.add_subcommand("sweep", "Bias, field, plate-separation or pump-ratio sweep"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    cli::ToolConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = cli::load_config(config_path);
        }
        if (!material.empty()) {
            cfg.material = cli::MaterialSection{};
            cfg.material.name = material;
        }
        for (const auto& o : overrides) {
            cli::apply_override(cfg, o);
        }
        if (!out_dir.empty()) {
            cfg.output.path = out_dir;
        }
        cli::resolve_material(cfg.material);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfig;
    }
    return cli::run_command(command, cfg, std::cout, std::cerr);
}
