// alphaconv: compute and verify alpha-convex envelopes of boundary data on
// strictly convex planar domains.
//
//   alphaconv solve          --config cfg.json [--out dir]
//   alphaconv sweep          --config cfg.json [--out dir]
//   alphaconv check          --config cfg.json --field field.csv [--out dir]
//   alphaconv oracle-compare --config cfg.json [--out dir]

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "alphaconv/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"alpha-convex envelope solver and verifier"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string field_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
        cmd->add_option("--out", out_override, "output directory (overrides config)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one envelope and write field + summary");
    add_common(solve);
    CLI::App* sweep = app.add_subcommand("sweep", "solve an ascending alpha list with a bridge report");
    add_common(sweep);
    CLI::App* check = app.add_subcommand("check", "verify a field CSV against the configuration");
    add_common(check);
    check->add_option("--field", field_path, "field CSV to verify")->required();
    CLI::App* oracle = app.add_subcommand("oracle-compare", "compare an endpoint run against the brute-force oracle");
    add_common(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const alphaconv::RunConfig cfg = alphaconv::load_config(config_path);
        const std::filesystem::path out = out_override.empty() ? cfg.out_dir
                                                               : std::filesystem::path(out_override);
        if (solve->parsed()) return alphaconv::cmd_solve(cfg, out);
        if (sweep->parsed()) return alphaconv::cmd_sweep(cfg, out);
        if (check->parsed()) return alphaconv::cmd_check(cfg, field_path, out);
        if (oracle->parsed()) return alphaconv::cmd_oracle_compare(cfg, out);
    } catch (const alphaconv::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
