#include "spinchaos/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "spinchaos/csv.hpp"
#include "spinchaos/eigensystem.hpp"
#include "spinchaos/error.hpp"
#include "spinchaos/quench.hpp"

namespace spinchaos {

using Json = nlohmann::ordered_json;

namespace {

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": '" + text + "'");
    }
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v)) throw ConfigError("expected an integer for " + key + ": '" + text + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string param_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

ParameterGrid ParameterGrid::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError("grid must look like start:stop:step, got '" + text + "'");
    ParameterGrid g{parse_double("grid", parts[0]), parse_double("grid", parts[1]), parse_double("grid", parts[2])};
    if (!(g.step > 0.0) || g.stop < g.start) throw ConfigError("grid needs step > 0 and stop >= start: '" + text + "'");
    return g;
}

std::vector<double> ParameterGrid::values() const {
    std::vector<double> v;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        // Snap to 12 significant decimals so 0.1 + 9*0.1 lands on 1.
        const double x = start + static_cast<double>(i) * step;
        v.push_back(std::round(x * 1e12) / 1e12);
    }
    return v;
}

ModelSpec RunConfig::spec() const {
    ModelSpec s;
    s.model = model;
    s.length = length;
    s.n_up = n_up.value_or(default_up_count(length));
    s.mu = mu;
    s.lambda = model == Model::Model2 ? lambda : 0.0;
    s.allow_isotropic = allow_isotropic;
    return s;
}

std::set<Analysis> RunConfig::effective_analyses() const {
    std::set<Analysis> a = analyses;
    if (critical_if_grid && (mu_grid || lambda_grid)) a.insert(Analysis::Critical);
    return a;
}

void RunConfig::validate() const {
    const std::set<Analysis> analyses = effective_analyses();
    if (analyses.empty()) throw ConfigError("no analysis selected");
    try {
        spec().validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (unfold.keep_fraction <= 0.0 || unfold.keep_fraction > 1.0) throw ConfigError("--keep-fraction must lie in (0, 1]");
    if (unfold.poly_degree < 1) throw ConfigError("--poly-degree must be at least 1");
    if (smoothing.bins < 1) throw ConfigError("--bins must be at least 1");
    if (time_max_factor <= 8.0) throw ConfigError("--time-max-factor must exceed 8");
    if (analyses.contains(Analysis::Critical)) {
        if (!mu_grid && !lambda_grid) throw ConfigError("--analysis critical needs --mu-grid or --lambda-grid");
        if (model == Model::Model1 && !mu_grid) throw ConfigError("Model 1 has no lambda; use --mu-grid");
        if (mu_grid && !allow_isotropic)
            for (double v : mu_grid->values())
                if (v == 1.0) throw ConfigError("--mu-grid contains the isotropic point mu = 1; pass --allow-isotropic");
    }
}

std::set<Analysis> parse_analyses(const std::string& text) {
    std::set<Analysis> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (item == "stats") out.insert(Analysis::Stats);
        else if (item == "critical") out.insert(Analysis::Critical);
        else if (item == "sf") out.insert(Analysis::StrengthFunction);
        else if (item == "shell") out.insert(Analysis::Shell);
        else if (item == "quench") out.insert(Analysis::Quench);
        else if (item == "all")
            out.insert({Analysis::Stats, Analysis::StrengthFunction, Analysis::Shell, Analysis::Quench});
        else throw ConfigError("unknown analysis '" + item + "'");
    }
    return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "model") {
        const int m = parse_int(key, value);
        if (m != 1 && m != 2) throw ConfigError("model must be 1 or 2");
        c.model = m == 1 ? Model::Model1 : Model::Model2;
    } else if (key == "L") {
        c.length = parse_int(key, value);
    } else if (key == "n-up") {
        c.n_up = parse_int(key, value);
    } else if (key == "mu") {
        c.mu = parse_double(key, value);
    } else if (key == "lambda") {
        c.lambda = parse_double(key, value);
    } else if (key == "mu-grid") {
        c.mu_grid = ParameterGrid::parse(value);
    } else if (key == "lambda-grid") {
        c.lambda_grid = ParameterGrid::parse(value);
    } else if (key == "analysis") {
        c.analyses = parse_analyses(value);
        c.critical_if_grid = value.find("all") != std::string::npos;
    } else if (key == "keep-fraction") {
        c.unfold.keep_fraction = parse_double(key, value);
    } else if (key == "poly-degree") {
        c.unfold.poly_degree = parse_int(key, value);
    } else if (key == "bins") {
        c.smoothing.bins = parse_int(key, value);
    } else if (key == "kernel-smoothing") {
        c.smoothing.gaussian_kernel = parse_bool(key, value);
    } else if (key == "time-max-factor") {
        c.time_max_factor = parse_double(key, value);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "emit-matrix") {
        c.emit_matrix = parse_bool(key, value);
    } else if (key == "allow-isotropic") {
        c.allow_isotropic = parse_bool(key, value);
    } else {
        throw ConfigError("unknown setting '" + key + "'");
    }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

namespace {

class Runner {
public:
    explicit Runner(const RunConfig& c) : config_(c), spec_(c.spec()), dir_(c.out_dir) {}

    RunReport execute() {
        std::filesystem::create_directories(dir_);
        summary_["schema"] = 1;
        summary_["model"] = spec_.model == Model::Model1 ? 1 : 2;
        summary_["L"] = spec_.length;
        summary_["n_up"] = spec_.n_up;
        summary_["mu"] = spec_.mu;
        if (spec_.model == Model::Model2) summary_["lambda"] = spec_.lambda;

        const SectorBasis basis = stage("basis", [&] { return build_even_parity_basis(spec_.length, spec_.n_up); });
        summary_["N"] = basis.dimension();
        summary_["palindromic"] = basis.palindromic_count();
        summary_["paired"] = basis.paired_count();
        ops_ = stage("hamiltonian", [&] { return OperatorSet::build(basis, spec_.model == Model::Model2); });

        if (config_.emit_matrix) {
            const std::string path = file("hamiltonian.bin");
            write_matrix_dump(path, compose_model(spec_, ops_));
        }

        const std::set<Analysis> a = config_.effective_analyses();
        const bool needs_eigenstates = a.contains(Analysis::StrengthFunction) || a.contains(Analysis::Shell) ||
                                       a.contains(Analysis::Quench);
        if (needs_eigenstates)
            rep_ = stage("eigen", [&] { return mean_field_representation(spec_, ops_, Stage::Full); });

        if (a.contains(Analysis::Stats)) stats();
        if (a.contains(Analysis::Critical)) critical();
        if (a.contains(Analysis::StrengthFunction)) strength();
        if (a.contains(Analysis::Shell)) shell();
        if (a.contains(Analysis::Quench)) quench();

        summary_["warnings"] = report_.warnings;
        const std::string path = file("summary.json");
        std::ofstream(path) << summary_.dump(2) << '\n';
        report_.summary_json = summary_.dump(2);
        return report_;
    }

private:
    template <typename F>
    auto stage(const char* name, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(name) + ": " + e.what());
        } catch (const DomainError& e) {
            throw NumericalError(std::string(name) + ": " + e.what());
        }
    }

    std::string file(const std::string& name) {
        const std::string path = (dir_ / name).string();
        report_.files.push_back(path);
        return path;
    }

    std::string tag() const {
        if (spec_.model == Model::Model1) return "model1_mu" + param_text(spec_.mu);
        return "model2_lambda" + param_text(spec_.lambda);
    }

    void warn(std::string w) { report_.warnings.push_back(std::move(w)); }

    void stats() {
        const std::vector<double> energies = rep_ ? rep_->exact : stage("eigen", [&] {
            return diagonalize(compose_model(spec_, ops_)).values;
        });
        const SpacingEnsemble ens = stage("spectral_stats", [&] { return unfold(energies, config_.unfold); });
        {
            CsvWriter csv(file("spacings.csv"), {"s"});
            for (double s : ens.spacings) csv.row({s});
        }
        Json js;
        js["spacings"] = ens.spacings.size();
        js["mean_spacing"] = ens.mean();
        js["zero_spacings"] = ens.zero_count();
        js["keep_fraction"] = config_.unfold.keep_fraction;
        js["poly_degree"] = config_.unfold.poly_degree;
        double beta = std::nan("");
        try {
            const BrodyFit fit = fit_brody(ens);
            beta = fit.beta;
            js["beta"] = fit.beta;
            js["beta_half_width"] = fit.confidence_half_width;
            js["log_likelihood"] = fit.log_likelihood;
            js["histogram_beta"] = fit.histogram_beta;
            js["histogram_residual"] = fit.histogram_residual;
            js["beta_discrepancy"] = fit.discrepancy;
            for (const auto& w : fit.warnings) warn("brody: " + w);
        } catch (const NumericalError& e) {
            warn(std::string("brody: ") + e.what());
            js["beta"] = nullptr;
        }
        CsvWriter csv(file("ps_hist.csv"), {"bin_center", "density", "brody_fit", "poisson", "wigner"});
        for (const auto& r : spacing_histogram(ens.spacings, std::isnan(beta) ? 0.0 : beta)) {
            csv.row({r.bin_center, r.density, std::isnan(beta) ? beta : r.brody_fit, r.poisson, r.wigner});
        }
        summary_["level_statistics"] = js;
    }

    void critical() {
        const bool scan_mu = config_.mu_grid.has_value() && (spec_.model == Model::Model1 || !config_.lambda_grid);
        const std::vector<double> grid = scan_mu ? config_.mu_grid->values() : config_.lambda_grid->values();
        const CriticalityScan scan = stage("shell", [&] {
            return criticality_scan(spec_, scan_mu ? ScanParameter::Mu : ScanParameter::Lambda, grid);
        });
        CsvWriter csv(file("criticality.csv"), {"param", "mean_v_over_d", "M_over_N"});
        Json points = Json::array();
        for (const auto& p : scan.points) {
            csv.row({p.parameter, p.mean_v_over_d, p.m_over_n});
            points.push_back({{"param", p.parameter}, {"mean_v_over_d", p.mean_v_over_d}, {"M_over_N", p.m_over_n}});
        }
        Json js;
        js["parameter"] = scan_mu ? "mu" : "lambda";
        js["crossing"] = scan.crossing ? Json(*scan.crossing) : Json(nullptr);
        js["bracket_low"] = scan.bracket_low ? Json(*scan.bracket_low) : Json(nullptr);
        js["points"] = points;
        if (!scan.crossing) warn("criticality: band-center v/d never exceeds 1 on the grid");
        summary_["criticality"] = js;
    }

    void strength() {
        const auto rows = nearest_to_median(rep_->unperturbed, 5);
        const StrengthFunction sf = stage("shell", [&] { return strength_function(*rep_, rows, config_.smoothing); });
        const auto& sh = sf.shape;
        {
            CsvWriter csv(file("sf_" + tag() + ".csv"), {"E", "w_raw", "envelope", "bw_fit", "gauss_fit", "shell"});
            for (std::size_t b = 0; b < sf.envelope.centers.size(); ++b) {
                const double e = sf.envelope.centers[b];
                csv.row({e, sf.envelope.bin_mass[b], sf.envelope.heights[b],
                         breit_wigner_profile(e, sh.breit_wigner.center, sh.breit_wigner.width),
                         gaussian_profile(e, sh.gaussian.center, sh.gaussian.width),
                         sf.shell.sigma > 0.0 ? gaussian_profile(e, sf.shell.center, sf.shell.sigma) : 0.0});
            }
        }
        {
            CsvWriter csv(file("sf_samples_" + tag() + ".csv"), {"E", "w"});
            for (std::size_t i = 0; i < sf.energies.size(); ++i) csv.row({sf.energies[i], sf.weights[i]});
        }
        for (const auto* f : {&sh.breit_wigner, &sh.gaussian})
            if (!f->converged) warn("sf: " + f->diagnostic);
        Json js;
        js["rows"] = sf.rows;
        js["selected"] = sh.selected == ProfileShape::Gaussian ? "gaussian" : "breit_wigner";
        js["selection_margin"] = sh.margin;
        js["bw_center"] = sh.breit_wigner.center;
        js["bw_gamma"] = sh.breit_wigner.width;
        js["bw_residual"] = sh.breit_wigner.residual;
        js["gauss_center"] = sh.gaussian.center;
        js["gauss_sigma"] = sh.gaussian.width;
        js["gauss_residual"] = sh.gaussian.residual;
        js["shell_center"] = sf.shell.center;
        js["shell_sigma"] = sf.shell.sigma;
        js["sigma_fit_over_shell"] = sf.shell.sigma > 0.0 ? sh.gaussian.width / sf.shell.sigma : 0.0;
        js["captured_mass"] = sf.envelope.captured_mass;
        summary_["strength_function"] = js;
    }

    void shell() {
        const auto states = nearest_to_median(rep_->exact, 5);
        const EigenstateProfile ef = stage("shell", [&] {
            return eigenstate_shell_profile(*rep_, states, config_.smoothing);
        });
        {
            CsvWriter csv(file("ef_shell_" + tag() + ".csv"), {"eps", "w_raw", "envelope", "shell"});
            for (std::size_t b = 0; b < ef.envelope.centers.size(); ++b) {
                const double e = ef.envelope.centers[b];
                csv.row({e, ef.envelope.bin_mass[b], ef.envelope.heights[b],
                         ef.shell.sigma > 0.0 ? gaussian_profile(e, ef.shell.center, ef.shell.sigma) : 0.0});
            }
        }
        {
            // Single band-center eigenstate against the unperturbed energies.
            const std::size_t alpha = nearest_to_median(rep_->exact, 1).front();
            CsvWriter csv(file("ef_" + tag() + ".csv"), {"eps", "w"});
            for (std::size_t n = 0; n < rep_->dimension(); ++n) csv.row({rep_->unperturbed[n], rep_->weight(n, alpha)});
        }
        const DelocalizationMeasures d = delocalization(*rep_);
        const CriticalityPoint c = band_center_criticality(*rep_, 0.0);
        Json js;
        js["states"] = ef.states;
        js["shell_center"] = ef.shell.center;
        js["shell_sigma"] = ef.shell.sigma;
        js["fill_ratio"] = ef.fill_ratio;
        js["mean_entropy"] = d.mean_entropy;
        js["entropy_variance"] = d.entropy_variance;
        js["mean_ipr"] = d.mean_ipr;
        js["ipr_variance"] = d.ipr_variance;
        js["band_center_M_over_N"] = c.m_over_n;
        js["band_center_v_over_d"] = c.mean_v_over_d;
        summary_["eigenstates"] = js;
    }

    void quench() {
        const auto rows = nearest_to_median(rep_->unperturbed, 5);
        const std::vector<double> times = default_time_grid(mean_sigma(*rep_, rows), config_.time_max_factor);
        const AveragedQuench q = stage("quench", [&] { return averaged_quench(*rep_, rows, times); });
        CsvWriter csv(file("quench_" + tag() + ".csv"),
                      {"t", "sigma_t", "W_num", "W_gauss", "S_num", "S_eq3", "S_linear"});
        for (std::size_t t = 0; t < times.size(); ++t)
            csv.row({times[t], q.sigma_bar * times[t], q.survival[t], q.gaussian[t], q.entropy[t], q.analytic[t],
                     q.linear[t]});
        Json js;
        js["rows"] = q.rows;
        Json sig = Json::array(), conn = Json::array();
        for (std::size_t k : rows) {
            sig.push_back(rep_->rows[k].sigma());
            conn.push_back(rep_->rows[k].connectivity);
        }
        js["sigma_k"] = sig;
        js["M_k"] = conn;
        js["sigma_bar"] = q.sigma_bar;
        js["mean_log_M"] = q.log_connectivity;
        js["npc_time_average"] = q.npc.time_average;
        js["npc_diagonal_ensemble"] = q.npc.diagonal_ensemble;
        js["saturation_entropy"] = q.npc.saturation_entropy;
        js["plateau_start_t"] = times[q.npc.window_begin];
        if (q.window) {
            const double predicted = q.sigma_bar * q.log_connectivity;
            js["linear_slope"] = q.window->slope;
            js["linear_slope_predicted"] = predicted;
            js["linear_slope_ratio"] = predicted > 0.0 ? q.window->slope / predicted : 0.0;
            js["linear_window"] = {q.window->t_begin, q.window->t_end};
        } else {
            warn("quench: no linear window found between 0.2 and 0.7 of the saturation entropy");
            js["linear_slope"] = nullptr;
        }
        summary_["quench"] = js;
    }

    const RunConfig& config_;
    ModelSpec spec_;
    std::filesystem::path dir_;
    OperatorSet ops_;
    std::optional<MeanFieldRepresentation> rep_;
    Json summary_;
    RunReport report_;
};

}  // namespace

RunReport run(const RunConfig& config) {
    config.validate();
    return Runner(config).execute();
}

}  // namespace spinchaos
