#include "spinchaos/spectral_stats.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "spinchaos/error.hpp"

namespace spinchaos {

double SpacingEnsemble::mean() const {
    if (spacings.empty()) return 0.0;
    return std::accumulate(spacings.begin(), spacings.end(), 0.0) / static_cast<double>(spacings.size());
}

std::size_t SpacingEnsemble::zero_count() const {
    return static_cast<std::size_t>(
        std::count_if(spacings.begin(), spacings.end(), [](double s) { return s <= kZeroSpacing; }));
}

namespace {

double horner(std::span<const double> coeff, double x) {
    double y = 0.0;
    for (std::size_t i = coeff.size(); i-- > 0;) y = y * x + coeff[i];
    return y;
}

double horner_derivative(std::span<const double> coeff, double x) {
    double y = 0.0;
    for (std::size_t i = coeff.size(); i-- > 1;) y = y * x + static_cast<double>(i) * coeff[i];
    return y;
}

// Least-squares polynomial coefficients (lowest order first).
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
    const lapack_int m = static_cast<lapack_int>(x.size());
    const lapack_int k = degree + 1;
    std::vector<double> a(static_cast<std::size_t>(m * k));  // column-major Vandermonde
    for (lapack_int i = 0; i < m; ++i) {
        double p = 1.0;
        for (lapack_int j = 0; j < k; ++j) {
            a[static_cast<std::size_t>(j * m + i)] = p;
            p *= x[static_cast<std::size_t>(i)];
        }
    }
    std::vector<double> b(y.begin(), y.end());
    const lapack_int info = LAPACKE_dgels(LAPACK_COL_MAJOR, 'N', m, k, 1, a.data(), m, b.data(), m);
    if (info != 0) throw NumericalError("staircase fit failed (dgels info=" + std::to_string(info) + ")");
    b.resize(static_cast<std::size_t>(k));
    return b;
}

// Golden-section maximization on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    // Compare against the bracket ends so a boundary maximum is not missed.
    double best = 0.5 * (a + b);
    double fbest = f(best);
    for (double e : {lo, hi}) {
        const double fe = f(e);
        if (fe > fbest) {
            best = e;
            fbest = fe;
        }
    }
    return best;
}

}  // namespace

SpacingEnsemble unfold(std::span<const double> energies, UnfoldOptions options) {
    if (options.keep_fraction <= 0.0 || options.keep_fraction > 1.0)
        throw DomainError("keep_fraction must lie in (0, 1]");
    if (options.poly_degree < 1) throw DomainError("poly_degree must be at least 1");
    const std::size_t n = energies.size();
    const auto cut = static_cast<std::size_t>(std::floor((1.0 - options.keep_fraction) / 2.0 * static_cast<double>(n) + 1e-9));
    const std::size_t kept = n > 2 * cut ? n - 2 * cut : 0;
    if (kept < 50) throw DomainError("unfold needs at least 50 levels after truncation, got " + std::to_string(kept));
    if (static_cast<std::size_t>(options.poly_degree) + 1 >= kept)
        throw DomainError("poly_degree too large for the kept window");

    const auto window = energies.subspan(cut, kept);
    for (std::size_t i = 1; i < kept; ++i)
        // Degenerate eigenvalues may be swapped at rounding level.
        if (window[i] < window[i - 1] - 1e-9 * std::max(1.0, std::abs(window[i])))
            throw DomainError("unfold expects ascending energies");

    // Standardize for conditioning; makes the result affine-invariant.
    const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(kept);
    double var = 0.0;
    for (double e : window) var += (e - mean) * (e - mean);
    const double scale = std::sqrt(var / static_cast<double>(kept));
    if (!(scale > 0.0)) throw NumericalError("unfold: all kept levels coincide");

    std::vector<double> x(kept), staircase(kept);
    for (std::size_t i = 0; i < kept; ++i) {
        x[i] = (window[i] - mean) / scale;
        staircase[i] = static_cast<double>(cut + i + 1);
    }
    const std::vector<double> coeff = polyfit(x, staircase, options.poly_degree);

    SpacingEnsemble ens;
    ens.options = options;
    ens.first_level = cut;
    ens.last_level = cut + kept;
    ens.spacings.resize(kept - 1);
    double prev = horner(coeff, x[0]);
    for (std::size_t i = 1; i < kept; ++i) {
        const double cur = x[i] <= x[i - 1] ? prev : horner(coeff, x[i]);
        ens.spacings[i - 1] = cur - prev;
        prev = cur;
    }

    const double mean_slope = static_cast<double>(kept) / (x.back() - x.front());
    constexpr int kProbe = 512;
    for (int p = 0; p <= kProbe; ++p) {
        const double xp = x.front() + (x.back() - x.front()) * p / kProbe;
        if (horner_derivative(coeff, xp) < -1e-9 * mean_slope)
            throw NumericalError("unfolded staircase is not monotonic; lower the polynomial degree (currently " +
                                 std::to_string(options.poly_degree) + ")");
    }
    for (double& s : ens.spacings) {
        if (s < -1e-9) throw NumericalError("negative unfolded spacing; lower the polynomial degree");
        s = std::max(s, 0.0);
    }
    return ens;
}

double brody_scale(double beta) { return std::pow(std::tgamma((beta + 2.0) / (beta + 1.0)), beta + 1.0); }

double brody_density(double s, double beta) {
    if (s < 0.0) return 0.0;
    const double b = brody_scale(beta);
    const double sb = beta == 0.0 ? 1.0 : std::pow(s, beta);
    return (beta + 1.0) * b * sb * std::exp(-b * sb * s);
}

double poisson_density(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }

double wigner_density(double s) {
    constexpr double pi = std::numbers::pi;
    return s < 0.0 ? 0.0 : 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

BrodyFit fit_brody(std::span<const double> spacings) {
    BrodyFit fit;
    std::vector<double> s;
    s.reserve(spacings.size());
    for (double v : spacings) {
        if (v <= kZeroSpacing)
            ++fit.zero_spacings;
        else
            s.push_back(v);
    }
    if (spacings.empty()) throw NumericalError("fit_brody: no spacings");
    const double zero_fraction = static_cast<double>(fit.zero_spacings) / static_cast<double>(spacings.size());
    if (zero_fraction > 0.3)
        throw NumericalError("degenerate spectrum: " + std::to_string(fit.zero_spacings) + " of " +
                             std::to_string(spacings.size()) +
                             " spacings are zero; Brody fit refused (unresolved symmetry?)");
    fit.used = s.size();
    if (fit.used < 200)
        fit.warnings.push_back("only " + std::to_string(fit.used) + " nonzero spacings; Brody fit is noisy");
    if (fit.zero_spacings > 0)
        fit.warnings.push_back(std::to_string(fit.zero_spacings) + " zero spacings excluded from the fit");

    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    std::vector<double> log_s(s.size());
    double sum_log = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] /= mean;
        log_s[i] = std::log(s[i]);
        sum_log += log_s[i];
    }
    const double count = static_cast<double>(s.size());
    auto log_likelihood = [&](double beta) {
        const double b = brody_scale(beta);
        double tail = 0.0;
        for (double ls : log_s) tail += std::exp((beta + 1.0) * ls);
        return count * (std::log(beta + 1.0) + std::log(b)) + beta * sum_log - b * tail;
    };

    fit.beta = golden_max(log_likelihood, 0.0, kBrodyBetaMax);
    // Local refinement: one guarded Newton step on the finite-difference curvature.
    const double h = 1e-4;
    auto curvature_at = [&](double beta) {
        const double c = std::clamp(beta, h, kBrodyBetaMax - h);
        return std::pair{c, (log_likelihood(c + h) - 2.0 * log_likelihood(c) + log_likelihood(c - h)) / (h * h)};
    };
    {
        const auto [c, curv] = curvature_at(fit.beta);
        const double grad = (log_likelihood(c + h) - log_likelihood(c - h)) / (2.0 * h);
        if (curv < 0.0) {
            const double refined = std::clamp(c - grad / curv, 0.0, kBrodyBetaMax);
            if (log_likelihood(refined) > log_likelihood(fit.beta)) fit.beta = refined;
        }
    }
    fit.log_likelihood = log_likelihood(fit.beta);
    const double curv = curvature_at(fit.beta).second;
    fit.confidence_half_width = curv < 0.0 ? 1.96 / std::sqrt(-curv) : kBrodyBetaMax;

    // Binned least-squares cross-check.
    const double width = 0.1;
    const std::size_t bins = 50;
    std::vector<double> density(bins, 0.0);
    for (double v : s) {
        const auto b = static_cast<std::size_t>(v / width);
        if (b < bins) density[b] += 1.0;
    }
    for (double& d : density) d /= count * width;
    auto hist_cost = [&](double beta) {
        double c = 0.0;
        for (std::size_t b = 0; b < bins; ++b) {
            const double r = density[b] - brody_density((static_cast<double>(b) + 0.5) * width, beta);
            c += r * r;
        }
        return c;
    };
    fit.histogram_beta = golden_max([&](double beta) { return -hist_cost(beta); }, 0.0, kBrodyBetaMax);
    fit.histogram_residual = std::sqrt(hist_cost(fit.histogram_beta) / static_cast<double>(bins));
    fit.discrepancy = std::abs(fit.beta - fit.histogram_beta);
    return fit;
}

BrodyFit fit_brody(const SpacingEnsemble& ensemble) { return fit_brody(ensemble.spacings); }

std::vector<SpacingHistogramRow> spacing_histogram(std::span<const double> spacings, double beta,
                                                   double bin_width, double s_max) {
    const auto bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
    std::vector<double> counts(bins, 0.0);
    for (double v : spacings) {
        const auto b = static_cast<std::size_t>(v / bin_width);
        if (v >= 0.0 && b < bins) counts[b] += 1.0;
    }
    const double norm = static_cast<double>(spacings.size()) * bin_width;
    std::vector<SpacingHistogramRow> rows;
    rows.reserve(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double c = (static_cast<double>(b) + 0.5) * bin_width;
        rows.push_back({c, norm > 0.0 ? counts[b] / norm : 0.0, brody_density(c, beta), poisson_density(c),
                        wigner_density(c)});
    }
    return rows;
}

}  // namespace spinchaos
