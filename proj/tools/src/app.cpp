#include "app.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "subrig/errors.hpp"

#ifndef SUBRIG_VERSION
#define SUBRIG_VERSION "0.0.0"
#endif

namespace subrig::app {

int run(int argc, char** argv)
{
    CLI::App cli{"Curvature of hypersurfaces in vertically rigid sub-Riemannian manifolds", "subrig"};
    cli.set_version_flag("--version", SUBRIG_VERSION);

    std::string command;
    std::filesystem::path config_path;
    std::filesystem::path output = ".";
    Overrides overrides;
    cli.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
    cli.add_option("--config", config_path, "JSON run configuration")->required();
    cli.add_option("--output", output, "Directory for report.json and CSV files");
    cli.add_option("--seed", overrides.seed, "Seed for sampled points");
    cli.add_option("--quadrature", overrides.quadrature, "Gauss-Legendre order per axis");
    cli.add_option("--step", overrides.step, "Integration step");
    cli.add_option("--tol", overrides.tol, "Pass/fail tolerance");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? 0 : 1;
    }

    try {
        const RunConfig config = load_config(config_path, overrides);
        std::filesystem::create_directories(output);
        const CommandResult result = run_command(command, config, output);
        write_report(result.report, output);
        std::printf("%s %s: %s\n", result.pass ? "PASS" : "FAIL", command.c_str(), result.summary.c_str());
        return result.pass ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "subrig: error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace subrig::app
