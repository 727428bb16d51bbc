// One PASS/FAIL line per acceptance criterion, with sub-lines for each
// measured quantity. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <complex>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinchaos/basis.hpp"
#include "spinchaos/eigensystem.hpp"
#include "spinchaos/hamiltonian.hpp"
#include "spinchaos/quench.hpp"
#include "spinchaos/shell.hpp"
#include "spinchaos/spectral_stats.hpp"

using namespace spinchaos;

namespace tol {
constexpr double kBasisSeconds = 1.0;
constexpr double kBetaPoisson = 0.3;
constexpr double kBetaWigner = 0.7;
constexpr double kDiagonalizationSeconds = 60.0;
constexpr double kCrossingLow = 0.4;
constexpr double kCrossingHigh = 0.6;
constexpr double kBracketWidth = 0.2;
constexpr double kModel1ConnectivityLow = 0.35;
constexpr double kModel1ConnectivityHigh = 0.65;
constexpr double kModel2Connectivity = 0.85;
constexpr double kShellWidth = 0.10;
constexpr double kMoment = 1e-8;
constexpr double kPropagator = 1e-8;
constexpr double kGaussianSurvival = 0.05;
constexpr double kLinearSlope = 0.20;
constexpr double kAnalyticEntropy = 0.10;
constexpr double kAnalyticFloor = 0.5;
constexpr double kSaturation = 0.15;
constexpr double kStochastic = 1e-10;
constexpr double kUnitarity = 1e-9;
constexpr double kSimilarity = 1e-9;
constexpr double kGridSlack = 1e-9;
}  // namespace tol

namespace {

constexpr int kL = 15;
constexpr int kUp = 5;

int failures = 0;

void verdict(const std::string& name, bool ok) {
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
    std::fflush(stdout);
}

__attribute__((format(printf, 1, 2))) void detail(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    std::printf("      ");
    std::vprintf(fmt, args);
    std::printf("\n");
    va_end(args);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* model_name(Model m) { return m == Model::Model1 ? "Model 1" : "Model 2"; }

ModelSpec spec_of(Model m, double p) {
    ModelSpec s{m, kL, kUp, 0.5, 0.0, true};
    (m == Model::Model1 ? s.mu : s.lambda) = p;
    return s;
}

struct Cached {
    MeanFieldRepresentation rep;
    double seconds = 0.0;
};

const SectorBasis& sector_basis() {
    static const SectorBasis b = build_even_parity_basis(kL, kUp);
    return b;
}

const OperatorSet& sector_ops() {
    static const OperatorSet ops = OperatorSet::build(sector_basis());
    return ops;
}

std::map<std::pair<int, double>, std::shared_ptr<Cached>> cache;

const Cached& representation(Model m, double p) {
    auto& slot = cache[{static_cast<int>(m), p}];
    if (!slot) {
        const auto t0 = std::chrono::steady_clock::now();
        slot = std::make_shared<Cached>();
        slot->rep = mean_field_representation(spec_of(m, p), sector_ops());
        slot->seconds = seconds_since(t0);
    }
    return *slot;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const SectorBasis b = build_even_parity_basis(kL, kUp);
    const double elapsed = seconds_since(t0);

    std::size_t brute = 0;
    for (std::uint64_t c = 0; c < (1U << kL); ++c) {
        if (__builtin_popcountll(c) != kUp) continue;
        std::uint64_t r = 0;
        for (int i = 0; i < kL; ++i)
            if ((c >> i) & 1U) r |= std::uint64_t{1} << (kL - 1 - i);
        brute += c <= r;
    }
    detail("N = %zu (brute force %zu), %zu palindromes + %zu pairs, built in %.4f s", b.dimension(), brute,
           b.palindromic_count(), b.paired_count(), elapsed);
    verdict("1  sector dimension L=15, n_up=5, even parity = 1512",
            b.dimension() == 1512 && brute == 1512 && elapsed < tol::kBasisSeconds);
}

void criterion_2() {
    bool ok = true;
    double slowest = 0.0;
    const std::vector<double> lambdas{0.1, 0.3, 0.5, 0.75, 1.0};
    std::vector<BrodyFit> fits;
    for (double l : lambdas) {
        const auto& c = representation(Model::Model2, l);
        slowest = std::max(slowest, c.seconds);
        fits.push_back(fit_brody(unfold(c.rep.exact)));
        detail("Model 2 lambda=%.2f  beta=%.3f +- %.3f  (histogram %.3f)", l, fits.back().beta,
               fits.back().confidence_half_width, fits.back().histogram_beta);
    }
    ok &= fits.front().beta < tol::kBetaPoisson;
    ok &= fits.back().beta > tol::kBetaWigner;
    for (std::size_t i = 1; i < fits.size(); ++i) {
        const double slack = fits[i].confidence_half_width + fits[i - 1].confidence_half_width;
        if (fits[i].beta < fits[i - 1].beta - slack) {
            detail("non-monotone between lambda=%.2f and %.2f", lambdas[i - 1], lambdas[i]);
            ok = false;
        }
    }
    for (double mu : {0.5, 1.0, 1.5}) {
        const auto& c = representation(Model::Model1, mu);
        slowest = std::max(slowest, c.seconds);
        const auto f = fit_brody(unfold(c.rep.exact));
        detail("Model 1 mu=%.2f      beta=%.3f +- %.3f", mu, f.beta, f.confidence_half_width);
        ok &= f.beta < tol::kBetaPoisson;
    }
    detail("slowest mean-field construction (two diagonalizations): %.1f s", slowest);
    ok &= slowest < 2 * tol::kDiagonalizationSeconds;
    verdict("2  level statistics: Poisson to Wigner-Dyson transition", ok);
}

void criterion_3_4() {
    const auto mu_grid = [] {
        std::vector<double> g;
        for (int i = 1; i <= 15; ++i) g.push_back(i / 10.0);
        return g;
    }();
    const std::vector<double> lambda_grid(mu_grid.begin(), mu_grid.begin() + 10);

    ModelSpec m1{Model::Model1, kL, kUp, 0.5, 0.0, true};
    ModelSpec m2{Model::Model2, kL, kUp, 0.5, 0.0, false};
    const auto s1 = criticality_scan(m1, ScanParameter::Mu, mu_grid);
    const auto s2 = criticality_scan(m2, ScanParameter::Lambda, lambda_grid);

    bool ok3 = true;
    for (const auto* scan : {&s1, &s2}) {
        const char* name = scan == &s1 ? "Model 1 (mu)" : "Model 2 (lambda)";
        std::string row;
        for (const auto& p : scan->points) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.1f:%.2f", p.parameter, p.mean_v_over_d);
            row += buf;
        }
        detail("%s v/d:%s", name, row.c_str());
        if (!scan->crossing || !scan->bracket_low) {
            detail("%s: no crossing bracket", name);
            ok3 = false;
            continue;
        }
        detail("%s crossing bracket (%.2f, %.2f]", name, *scan->bracket_low, *scan->crossing);
        ok3 &= *scan->bracket_low >= tol::kCrossingLow - tol::kGridSlack;
        ok3 &= *scan->crossing <= tol::kCrossingHigh + tol::kGridSlack;
        ok3 &= *scan->crossing - *scan->bracket_low <= tol::kBracketWidth + tol::kGridSlack;
    }
    verdict("3  criticality: band-center v/d crosses 1 between 0.4 and 0.6", ok3);

    const double c1 = band_center_criticality(representation(Model::Model1, 1.5).rep, 1.5).m_over_n;
    const double c2 = band_center_criticality(representation(Model::Model2, 1.0).rep, 1.0).m_over_n;
    double lo1 = 1.0, hi1 = 0.0, lo2 = 1.0;
    for (const auto& p : s1.points) {
        lo1 = std::min(lo1, p.m_over_n);
        hi1 = std::max(hi1, p.m_over_n);
    }
    for (const auto& p : s2.points) lo2 = std::min(lo2, p.m_over_n);
    detail("Model 1 mu=1.5: M/N = %.4f (scan range %.4f .. %.4f)", c1, lo1, hi1);
    detail("Model 2 lambda=1.0: M/N = %.4f (scan minimum %.4f)", c2, lo2);
    const bool ok1 = c1 >= tol::kModel1ConnectivityLow && c1 <= tol::kModel1ConnectivityHigh;
    const bool ok2 = c2 >= tol::kModel2Connectivity;
    detail("Model 1 part %s, Model 2 part %s", ok1 ? "pass" : "FAIL", ok2 ? "pass" : "FAIL");
    verdict("4  connectivity at band center: M/N ~ 1/2 (Model 1), ~ 1 (Model 2)", ok1 && ok2);
}

void criterion_5() {
    bool ok = true;
    struct Case {
        Model model;
        double p;
        ProfileShape expect;
    };
    for (const Case& c : {Case{Model::Model1, 0.4, ProfileShape::BreitWigner},
                          Case{Model::Model2, 0.4, ProfileShape::BreitWigner},
                          Case{Model::Model1, 1.5, ProfileShape::Gaussian},
                          Case{Model::Model2, 1.0, ProfileShape::Gaussian}}) {
        const auto& rep = representation(c.model, c.p).rep;
        const auto rows = nearest_to_median(rep.unperturbed, 5);
        const auto sf = strength_function(rep, rows);
        const double ratio = sf.shape.gaussian.width / sf.shell.sigma;
        bool case_ok = sf.shape.selected == c.expect;
        if (c.expect == ProfileShape::Gaussian) case_ok &= std::abs(ratio - 1.0) <= tol::kShellWidth;
        detail("%s p=%.1f  residual BW %.4f  Gauss %.4f  sigma_fit/sigma_shell %.3f  -> %s", model_name(c.model),
               c.p, sf.shape.breit_wigner.residual, sf.shape.gaussian.residual, ratio, case_ok ? "ok" : "FAIL");
        ok &= case_ok;
    }
    verdict("5  strength function: Breit-Wigner at 0.4, Gaussian matching the shell at strong coupling", ok);
}

double unitarity_worst = 0.0;
double stochastic_worst = 0.0;
double similarity_worst = 0.0;

void criterion_6() {
    double centroid = 0.0, variance = 0.0, stochastic = 0.0, similarity = 0.0;
    for (const auto& [key, c] : cache) {
        const auto mc = check_moment_identities(c->rep);
        centroid = std::max(centroid, mc.max_centroid_error);
        variance = std::max(variance, mc.max_variance_error);
        stochastic = std::max({stochastic, mc.max_row_sum_error, mc.max_column_sum_error});
        const Model m = static_cast<Model>(key.first);
        const auto direct = diagonalize(compose_model(spec_of(m, key.second), sector_ops()));
        for (std::size_t i = 0; i < direct.size(); ++i)
            similarity = std::max(similarity, std::abs(direct.values[i] - c->rep.exact[i]));
    }
    detail("%zu configurations: max |<E>_n - H~nn| = %.2e, max |Var_n - sigma_n^2| = %.2e", cache.size(), centroid,
           variance);
    verdict("6  moment identities <E>_n = H~nn and Var_n = sigma_n^2",
            centroid <= tol::kMoment && variance <= tol::kMoment);
    stochastic_worst = stochastic;
    similarity_worst = similarity;
}

void criterion_7() {
    double worst = 0.0;
    for (const auto& spec : {ModelSpec{Model::Model1, 8, 3, 1.5, 0.0, false}, ModelSpec{Model::Model2, 8, 3, 0.5, 1.0, false},
                             ModelSpec{Model::Model1, 6, 2, 0.4, 0.0, false}, ModelSpec{Model::Model2, 7, 2, 0.5, 0.4, false}}) {
        const auto rep = mean_field_representation(spec, build_even_parity_basis(spec.length, spec.n_up));
        const Eigen::MatrixXd h = [&] {
            Eigen::MatrixXd m(rep.dimension(), rep.dimension());
            for (std::size_t r = 0; r < rep.dimension(); ++r)
                for (std::size_t c = 0; c < rep.dimension(); ++c) m(r, c) = rep.rotated(r, c);
            return m;
        }();
        const std::size_t k = rep.dimension() / 2;
        const double sigma = std::max(rep.rows[k].sigma(), 0.1);
        std::vector<double> times(100);
        for (std::size_t i = 0; i < times.size(); ++i) times[i] = 20.0 / sigma * static_cast<double>(i) / 99.0;
        const auto tr = evolve(rep, k, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Eigen::MatrixXcd u = (std::complex<double>(0.0, -times[i]) * h.cast<std::complex<double>>()).exp();
            double total = 0.0;
            for (std::size_t n = 0; n < rep.dimension(); ++n) {
                worst = std::max(worst, std::abs(std::norm(u(n, k)) - tr.occupations(i, n)));
                total += tr.occupations(i, n);
            }
            unitarity_worst = std::max(unitarity_worst, std::abs(total - 1.0));
        }
    }
    detail("max |Omega_spectral - Omega_expm| = %.2e over 4 chains (L <= 8), 100 times each", worst);
    verdict("7  quench: spectral decomposition equals matrix-exponential propagation", worst <= tol::kPropagator);
}

void criterion_8() {
    bool ok_a = true, ok_b = true, ok_c = true, ok_d = true;
    for (auto [model, p] : {std::pair{Model::Model1, 1.5}, std::pair{Model::Model2, 1.0}}) {
        const auto& rep = representation(model, p).rep;
        const auto rows = nearest_to_median(rep.unperturbed, 5);
        const auto times = default_time_grid(mean_sigma(rep, rows));
        const auto q = averaged_quench(rep, rows, times);

        for (std::size_t k : rows) {
            const auto tr = evolve(rep, k, times);
            for (std::size_t t = 0; t < times.size(); ++t) {
                double total = 0.0;
                for (double v : tr.occupations.row(t)) total += v;
                unitarity_worst = std::max(unitarity_worst, std::abs(total - 1.0));
            }
        }

        double dev_a = 0.0, abs_a = 0.0;
        for (std::size_t t = 0; t < times.size(); ++t) {
            if (q.sigma_bar * times[t] > 1.0) break;
            dev_a = std::max(dev_a, std::abs(q.survival[t] - q.gaussian[t]) / q.gaussian[t]);
            abs_a = std::max(abs_a, std::abs(q.survival[t] - q.gaussian[t]));
        }
        const double predicted = q.sigma_bar * q.log_connectivity;
        const double ratio = q.window ? q.window->slope / predicted : 0.0;
        double dev_c = 0.0, where_c = 0.0;
        for (std::size_t t = 0; t < times.size(); ++t) {
            if (q.entropy[t] <= tol::kAnalyticFloor) continue;
            const double d = std::abs(q.analytic[t] - q.entropy[t]) / q.entropy[t];
            if (d > dev_c) {
                dev_c = d;
                where_c = q.sigma_bar * times[t];
            }
        }
        const double s_inf = q.npc.saturation_entropy;
        const double dev_ta = std::abs(s_inf - std::log(q.npc.time_average)) / std::log(q.npc.time_average);
        const double dev_de = std::abs(s_inf - std::log(q.npc.diagonal_ensemble)) / std::log(q.npc.diagonal_ensemble);

        const bool a = dev_a <= tol::kGaussianSurvival;
        const bool b = q.window.has_value() && std::abs(ratio - 1.0) <= tol::kLinearSlope;
        const bool c = dev_c <= tol::kAnalyticEntropy;
        const bool d = dev_ta <= tol::kSaturation && dev_de <= tol::kSaturation;
        detail("%s p=%.1f  sigma_bar=%.4f  mean ln M=%.3f", model_name(model), p, q.sigma_bar, q.log_connectivity);
        detail("  (a) max rel |W - exp(-s^2t^2)| for s t<=1: %.4f (abs %.4f) -> %s", dev_a, abs_a, a ? "ok" : "FAIL");
        if (q.window)
            detail("  (b) slope %.3f on t in [%.3f, %.3f], predicted %.3f, ratio %.3f -> %s", q.window->slope,
                   q.window->t_begin, q.window->t_end, predicted, ratio, b ? "ok" : "FAIL");
        else
            detail("  (b) no linear window -> FAIL");
        detail("  (c) max rel |S_eq3 - S| where S>0.5: %.4f at sigma t=%.2f -> %s", dev_c, where_c, c ? "ok" : "FAIL");
        detail("  (d) S_inf=%.3f  ln Npc(time avg)=%.3f (%.3f)  ln Npc(diag ens)=%.3f (%.3f) -> %s", s_inf,
               std::log(q.npc.time_average), dev_ta, std::log(q.npc.diagonal_ensemble), dev_de, d ? "ok" : "FAIL");
        detail("  [info] Npc time average %.1f vs diagonal ensemble %.1f, ratio %.3f", q.npc.time_average,
               q.npc.diagonal_ensemble, q.npc.diagonal_ensemble / q.npc.time_average);
        ok_a &= a;
        ok_b &= b;
        ok_c &= c;
        ok_d &= d;
    }
    verdict("8a relaxation: Gaussian survival within 5% for sigma t <= 1", ok_a);
    verdict("8b relaxation: linear-stage slope within 20% of sigma ln M", ok_b);
    verdict("8c relaxation: analytic entropy curve within 10% where S > 0.5", ok_c);
    verdict("8d relaxation: saturation within 15% of ln Npc (both estimators)", ok_d);
}

}  // namespace

int main() {
    std::printf("acceptance suite, L=%d n_up=%d\n", kL, kUp);
    criterion_1();
    criterion_2();
    criterion_3_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    detail("max |sum w - 1| over rows and columns = %.2e", stochastic_worst);
    detail("max |eig(H~) - eig(H)| = %.2e", similarity_worst);
    detail("max |sum_n Omega_n(t) - 1| over all quench traces = %.2e", unitarity_worst);
    verdict("9  unitarity and orthonormality property suite",
            unitarity_worst <= tol::kUnitarity && stochastic_worst <= tol::kStochastic &&
                similarity_worst <= tol::kSimilarity);
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
