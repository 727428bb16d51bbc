#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spinchaos/hamiltonian.hpp"
#include "spinchaos/shell.hpp"
#include "spinchaos/spectral_stats.hpp"

namespace spinchaos {

enum class Analysis { Stats, Critical, StrengthFunction, Shell, Quench };

/// Inclusive arithmetic grid "start:stop:step".
struct ParameterGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    static ParameterGrid parse(const std::string& text);
    std::vector<double> values() const;
};

struct RunConfig {
    Model model = Model::Model2;
    int length = 15;
    std::optional<int> n_up;  // default round(L/3)
    double mu = 0.5;
    double lambda = 1.0;
    std::optional<ParameterGrid> mu_grid;
    std::optional<ParameterGrid> lambda_grid;
    std::set<Analysis> analyses{Analysis::Stats};
    UnfoldOptions unfold;
    SmoothingOptions smoothing;
    double time_max_factor = 80.0;
    std::string out_dir = ".";
    bool emit_matrix = false;
    bool allow_isotropic = false;
    /// Set by "all": also run the criticality scan when a grid is given.
    bool critical_if_grid = false;

    ModelSpec spec() const;
    /// Requested analyses after expanding "all".
    std::set<Analysis> effective_analyses() const;
    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

/// Applies one key=value setting (keys are the long flag names without
/// dashes, e.g. "lambda-grid"). Throws ConfigError on unknown keys or values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a plain-text key=value file; '#' starts a comment.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Parses "stats,sf" style lists; "all" expands to every analysis that needs
/// no grid, plus "critical" when a grid is configured.
std::set<Analysis> parse_analyses(const std::string& text);

struct RunReport {
    std::string summary_json;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

/// Runs the requested analyses and writes CSV files plus summary.json into
/// config.out_dir. ConfigError for bad configuration, NumericalError for
/// numerical failures (message prefixed with the failing stage).
RunReport run(const RunConfig& config);

}  // namespace spinchaos
