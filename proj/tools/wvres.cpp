// wvres: resonances of oscillating 1D Schroedinger operators by periodic
// complex distortion in Fourier space, and their viscosity limit.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wvres/cli/commands.hpp"
#include "wvres/cli/config.hpp"
#include "wvres/errors.hpp"

int main(int argc, char** argv) {
    using namespace wvres::cli;

    CLI::App app{"Resonances of Wigner-von Neumann type Schroedinger operators"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string formats;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"resonances", "Distorted-operator eigenvalues in the resonance region of a band"},
        {"flow", "Follow the viscosity (CAP) spectrum along a decreasing eps schedule"},
        {"validate", "Run the acceptance checks against independent oracles"},
        {"region", "Emit the essential-spectrum curve and region boundaries of a band"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Flat key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "Override one setting, key=value (repeatable)")->take_all();
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--format", formats, "Comma-separated subset of csv,json,svg");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
        if (!formats.empty()) overrides.push_back("output.formats=" + formats);
        config = load_config(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path), overrides);
    } catch (const wvres::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return run_command(command, config, std::cout, std::cerr);
}
