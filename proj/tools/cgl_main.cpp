// cgl-lab: spectral simulation and verification tool for the complex
// Ginzburg-Landau equation on intervals and rectangles with Dirichlet
// boundary.  See README.md for the config schema and scenarios.

#include <CLI11.hpp>

#include "cgl/runner.hpp"

#include <iostream>

namespace {

struct Overrides {
    std::string out;
    long long seed = -1;
    double dt = 0.0;
    int threads = 0;

    void apply(cgl::RunConfig& cfg) const {
        if (!out.empty()) {
            cfg.output_dir = out;
            cfg.resolved["output.dir"] = out;
        }
        if (seed >= 0) {
            cfg.seed = std::uint64_t(seed);
            cfg.resolved["seed"] = std::to_string(seed);
        }
        if (dt > 0.0) {
            cfg.params.dt = dt;
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", dt);
            cfg.resolved["params.dt"] = buf;
        }
        if (threads > 0) {
            cfg.threads = threads;
            cfg.resolved["threads"] = std::to_string(threads);
        }
    }
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--out", ov.out, "Output directory override");
    cmd->add_option("--seed", ov.seed, "Master seed override");
    cmd->add_option("--dt", ov.dt, "Time step override");
    cmd->add_option("--threads", ov.threads, "Worker threads for sweeps");
}

int run_scenario(const std::string& config_path, const std::string& forced_scenario,
                 const Overrides& ov) {
    cgl::RunConfig cfg = cgl::parse_config(config_path, forced_scenario);
    ov.apply(cfg);
    cgl::RunResult res = cgl::execute(cfg);
    std::cout << res.summary << "\n";
    std::cout << "outputs: " << res.output_dir << "\n";
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cgl-lab: complex Ginzburg-Landau simulation and verification"};
    app.require_subcommand(1);

    std::string run_config, sweep_config, certify_config;
    Overrides run_ov, sweep_ov, certify_ov, verify_ov;
    bool verify_fast = false;

    CLI::App* cmd_run = app.add_subcommand("run", "Execute the scenario of a config file");
    cmd_run->add_option("config", run_config, "Config file")->required();
    add_overrides(cmd_run, run_ov);

    CLI::App* cmd_verify = app.add_subcommand("verify", "Run the property suite");
    cmd_verify->add_flag("--fast", verify_fast, "Reduced sample counts");
    add_overrides(cmd_verify, verify_ov);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a parameter sweep config");
    cmd_sweep->add_option("config", sweep_config, "Config file")->required();
    add_overrides(cmd_sweep, sweep_ov);

    CLI::App* cmd_certify = app.add_subcommand("certify", "Run a certificate config");
    cmd_certify->add_option("config", certify_config, "Config file")->required();
    add_overrides(cmd_certify, certify_ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return run_scenario(run_config, "", run_ov);
        if (cmd_sweep->parsed()) return run_scenario(sweep_config, "sweep", sweep_ov);
        if (cmd_certify->parsed()) return run_scenario(certify_config, "certify", certify_ov);
        // verify without a config file: defaults plus flags
        cgl::RunConfig cfg = cgl::parse_config_text("scenario = verify", "verify");
        cfg.verify_fast = verify_fast;
        cfg.resolved["verify.fast"] = verify_fast ? "true" : "false";
        verify_ov.apply(cfg);
        cgl::RunResult res = cgl::execute(cfg);
        std::cout << res.summary << "\n";
        return res.exit_code;
    } catch (const cgl::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
