// Command-line driver: builds the sector, runs the requested analyses and
// writes CSV files plus summary.json.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "spinchaos/error.hpp"
#include "spinchaos/kernels.hpp"
#include "spinchaos/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-chaos diagnostics for spin-1/2 chains (XXZ and XXZ + NNN)"};

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file; flags given on the command line win");

    // Every flag is collected as text and fed through the same setter as the
    // config file, after the file has been applied.
    std::vector<std::pair<std::string, std::string>> flags = {
        {"model", "Model: 1 (H0 + mu V1) or 2 (adds lambda V2)"},
        {"L", "Number of sites"},
        {"n-up", "Number of up spins (default round(L/3))"},
        {"mu", "Anisotropy mu"},
        {"lambda", "Next-nearest-neighbour ratio lambda (Model 2)"},
        {"mu-grid", "Scan grid start:stop:step for mu"},
        {"lambda-grid", "Scan grid start:stop:step for lambda"},
        {"analysis", "Comma list of stats,critical,sf,shell,quench,all"},
        {"keep-fraction", "Central fraction of levels kept for unfolding (default 0.8)"},
        {"poly-degree", "Staircase polynomial degree (default 7)"},
        {"bins", "Strength-function histogram bins (default 41)"},
        {"time-max-factor", "Quench grid end in units of 1/sigma_bar (default 80)"},
        {"out", "Output directory"},
    };
    std::vector<std::string> values(flags.size());
    std::vector<CLI::Option*> options;
    for (std::size_t i = 0; i < flags.size(); ++i)
        options.push_back(app.add_option("--" + flags[i].first, values[i], flags[i].second));

    bool emit_matrix = false, allow_isotropic = false, kernel_smoothing = false, show_isa = false;
    auto* emit_opt = app.add_flag("--emit-matrix", emit_matrix, "Write the Hamiltonian as hamiltonian.bin");
    auto* iso_opt = app.add_flag("--allow-isotropic", allow_isotropic, "Permit mu = 1");
    auto* kern_opt = app.add_flag("--kernel-smoothing", kernel_smoothing, "Gaussian smoothing of SF envelopes");
    app.add_flag("--show-isa", show_isa, "Print the selected SIMD kernel set and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (show_isa) {
        std::cout << spinchaos::kernels::to_string(spinchaos::kernels::active().isa) << '\n';
        return 0;
    }

    try {
        spinchaos::RunConfig config;
        if (!config_path.empty()) config = spinchaos::load_config_file(config_path);
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (options[i]->count() > 0) spinchaos::apply_setting(config, flags[i].first, values[i]);
        if (emit_opt->count() > 0) config.emit_matrix = emit_matrix;
        if (iso_opt->count() > 0) config.allow_isotropic = allow_isotropic;
        if (kern_opt->count() > 0) config.smoothing.gaussian_kernel = kernel_smoothing;

        const spinchaos::RunReport report = spinchaos::run(config);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& f : report.files) std::cout << f << '\n';
        return 0;
    } catch (const spinchaos::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const spinchaos::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
