#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vvjump/config.hpp"
#include "vvjump/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Double-jump stochastic volatility toolkit for VIX/VVIX"};
    app.require_subcommand(1);

    std::string config_path;
    std::string input_path;
    std::string output_dir;
    std::string variant;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (sectioned key=value)");
        cmd->add_option("--input", input_path, "input CSV with date,vix,vvix columns");
        cmd->add_option("--output-dir", output_dir, "directory for result files");
        cmd->add_option("--variant", variant, "model variant: SV, SVJ_C, SVJJ_C, SVJJ_S");
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& s) {
                seed = s;
                seed_given = true;
            },
            "seed override for chain and simulation");
    };

    add_common(app.add_subcommand("simulate", "simulate a synthetic joint path"));
    add_common(app.add_subcommand("estimate", "run the MCMC estimation"));
    add_common(app.add_subcommand("test-jumps", "run the jump and co-jump tests"));
    add_common(app.add_subcommand("diagnose", "residuals, Q-Q data and jump profile"));
    add_common(app.add_subcommand("pvalue-study", "posterior-predictive p-values"));

    CLI11_PARSE(app, argc, argv);

    vvjump::RunConfig config;
    try {
        config = config_path.empty() ? vvjump::default_run_config()
                                     : vvjump::load_run_config(config_path);
        if (!input_path.empty()) config.input_path = input_path;
        if (!output_dir.empty()) config.output_dir = output_dir;
        if (!variant.empty()) config.variant = vvjump::parse_variant(variant);
        if (seed_given) {
            config.chain.seed = seed;
            config.simulation.seed = seed;
        }
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"user","message":")" << e.what() << "\"}\n";
        return 1;
    }

    return vvjump::run_command(app.get_subcommands().front()->get_name(), config);
}
