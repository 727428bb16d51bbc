#include "spinchaos/quench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinchaos/error.hpp"
#include "spinchaos/kernels.hpp"

namespace spinchaos {

std::vector<double> default_time_grid(double sigma_bar, double max_factor, std::size_t dense_points,
                                      std::size_t tail_points) {
    const double scale = sigma_bar > 0.0 ? 1.0 / sigma_bar : 1.0;
    const double dense_end = 8.0 * scale;
    const double tail_end = std::max(max_factor, 8.0) * scale;
    std::vector<double> t;
    t.reserve(dense_points + tail_points);
    for (std::size_t i = 0; i < dense_points; ++i)
        t.push_back(dense_end * static_cast<double>(i) / static_cast<double>(dense_points - 1));
    for (std::size_t j = 1; j <= tail_points; ++j)
        t.push_back(dense_end + (tail_end - dense_end) * static_cast<double>(j) / static_cast<double>(tail_points));
    return t;
}

double shannon_entropy(std::span<const double> p) {
    double s = 0.0;
    for (double v : p)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

std::vector<double> entropy_trace(const QuenchTrace& trace) {
    std::vector<double> s(trace.times.size());
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = shannon_entropy(trace.occupations.row(t));
    return s;
}

QuenchTrace evolve(const MeanFieldRepresentation& rep, std::size_t k, std::span<const double> times) {
    if (!rep.has_eigenstates()) throw DomainError("evolve needs the exact eigenstates");
    const std::size_t n = rep.dimension();
    if (k >= n) throw DomainError("evolve: initial row out of range");
    const auto& kern = kernels::active();

    QuenchTrace trace;
    trace.initial_row = k;
    trace.times.assign(times.begin(), times.end());
    trace.sigma = rep.rows[k].sigma();
    trace.connectivity = rep.rows[k].connectivity;
    trace.occupations = DenseMatrix(times.size(), n);

    const auto ck = rep.coefficients.row(k);
    // Blocks of time points share each coefficient row while it is in cache.
    constexpr std::size_t kBlock = 8;
    std::vector<double> cosines(kBlock * n), sines(kBlock * n);
    for (std::size_t t0 = 0; t0 < times.size(); t0 += kBlock) {
        const std::size_t nb = std::min(kBlock, times.size() - t0);
        for (std::size_t b = 0; b < nb; ++b) {
            const double t = times[t0 + b];
            for (std::size_t a = 0; a < n; ++a) {
                const double phase = rep.exact[a] * t;
                cosines[b * n + a] = ck[a] * std::cos(phase);
                sines[b * n + a] = ck[a] * std::sin(phase);
            }
        }
        for (std::size_t r = 0; r < n; ++r) {
            const auto cr = rep.coefficients.row(r);
            for (std::size_t b = 0; b < nb; ++b) {
                const kernels::Complex2 z = kern.dual_dot(cr, {cosines.data() + b * n, n}, {sines.data() + b * n, n});
                trace.occupations(t0 + b, r) = z.re * z.re + z.im * z.im;
            }
        }
    }
    trace.survival.resize(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) trace.survival[t] = trace.occupations(t, k);
    trace.entropy = entropy_trace(trace);
    return trace;
}

double analytic_entropy(double survival, double npc) {
    if (npc < 1.0) throw DomainError("analytic_entropy: N_pc must be at least 1");
    const double w = std::clamp(survival, 0.0, 1.0);
    double s = 0.0;
    if (w > 0.0) s -= w * std::log(w);
    const double rest = 1.0 - w;
    if (rest > 0.0) s -= rest * std::log(rest / npc);
    return s;
}

double gaussian_survival(double sigma, double t) {
    if (sigma < 0.0) throw DomainError("gaussian_survival: negative sigma");
    return std::exp(-sigma * sigma * t * t);
}

double linear_law(double sigma, double connectivity, double t) {
    if (connectivity < 2.0) throw DomainError("linear_law: connectivity must be at least 2");
    return sigma * t * std::log(connectivity);
}

namespace {

double ls_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

std::size_t detect_plateau(std::span<const double> times, std::span<const double> entropy, std::size_t window,
                           double relative_slope) {
    if (times.size() != entropy.size()) throw DomainError("detect_plateau: size mismatch");
    if (times.size() < window) throw NumericalError("entropy trace shorter than the plateau window; extend the time grid");
    const std::size_t windows = times.size() - window + 1;
    std::vector<double> slopes(windows);
    for (std::size_t i = 0; i < windows; ++i)
        slopes[i] = ls_slope(times.subspan(i, window), entropy.subspan(i, window));
    const auto peak = static_cast<std::size_t>(std::max_element(slopes.begin(), slopes.end()) - slopes.begin());
    const double max_slope = slopes[peak];
    // A rise too small to register in the entropy (rounding noise) counts as none.
    if (!(max_slope * (times.back() - times.front()) > 1e-10)) return 0;
    for (std::size_t i = peak; i < windows; ++i)
        if (std::abs(slopes[i]) < relative_slope * max_slope) return i;
    throw NumericalError("entropy did not saturate within the time grid; use a longer grid (--time-max-factor)");
}

double diagonal_ensemble_npc(const MeanFieldRepresentation& rep, std::size_t k) {
    if (!rep.has_eigenstates()) throw DomainError("diagonal_ensemble_npc needs the exact eigenstates");
    const std::size_t n = rep.dimension();
    const auto ck = rep.coefficients.row(k);
    std::vector<double> omega(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto cr = rep.coefficients.row(r);
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double p = ck[a] * cr[a];
            s += p * p;
        }
        omega[r] = s;
    }
    return std::exp(shannon_entropy(omega));
}

NpcEstimate estimate_npc(std::span<const double> times, std::span<const double> entropy, double diagonal_ensemble) {
    NpcEstimate est;
    est.window_begin = detect_plateau(times, entropy);
    const std::size_t count = entropy.size() - est.window_begin;
    double mean_exp = 0.0, mean_s = 0.0;
    for (std::size_t i = est.window_begin; i < entropy.size(); ++i) {
        mean_exp += std::exp(entropy[i]);
        mean_s += entropy[i];
    }
    est.time_average = mean_exp / static_cast<double>(count);
    est.saturation_entropy = mean_s / static_cast<double>(count);
    est.diagonal_ensemble = diagonal_ensemble;
    return est;
}

NpcEstimate estimate_npc(const QuenchTrace& trace, const MeanFieldRepresentation& rep) {
    return estimate_npc(trace.times, trace.entropy, diagonal_ensemble_npc(rep, trace.initial_row));
}

std::optional<LinearWindow> linear_window(std::span<const double> times, std::span<const double> entropy,
                                          double saturation_entropy, std::size_t plateau_begin, double lower,
                                          double upper) {
    std::vector<double> x, y;
    const std::size_t end = std::min(plateau_begin, entropy.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (entropy[i] >= lower * saturation_entropy && entropy[i] <= upper * saturation_entropy) {
            x.push_back(times[i]);
            y.push_back(entropy[i]);
        } else if (!x.empty() && entropy[i] > upper * saturation_entropy) {
            break;
        }
    }
    if (x.size() < 2) return std::nullopt;
    return LinearWindow{ls_slope(x, y), x.front(), x.back(), x.size()};
}

double mean_sigma(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows) {
    if (rows.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t r : rows) s += rep.rows[r].sigma();
    return s / static_cast<double>(rows.size());
}

AveragedQuench averaged_quench(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows,
                               std::span<const double> times) {
    if (rows.empty()) throw DomainError("averaged_quench: empty row set");
    AveragedQuench q;
    q.rows.assign(rows.begin(), rows.end());
    q.times.assign(times.begin(), times.end());
    q.survival.assign(times.size(), 0.0);
    q.entropy.assign(times.size(), 0.0);
    const double count = static_cast<double>(rows.size());
    double de = 0.0;
    for (std::size_t k : rows) {
        const QuenchTrace tr = evolve(rep, k, times);
        for (std::size_t t = 0; t < times.size(); ++t) {
            q.survival[t] += tr.survival[t] / count;
            q.entropy[t] += tr.entropy[t] / count;
        }
        q.sigma_bar += tr.sigma / count;
        q.log_connectivity += std::log(static_cast<double>(std::max<std::size_t>(tr.connectivity, 1))) / count;
        de += diagonal_ensemble_npc(rep, k) / count;
    }
    q.npc = estimate_npc(q.times, q.entropy, de);
    q.gaussian.resize(times.size());
    q.analytic.resize(times.size());
    q.linear.resize(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) {
        q.gaussian[t] = gaussian_survival(q.sigma_bar, times[t]);
        q.analytic[t] = analytic_entropy(q.survival[t], std::max(1.0, q.npc.time_average));
        q.linear[t] = q.sigma_bar * times[t] * q.log_connectivity;
    }
    q.window = linear_window(q.times, q.entropy, q.npc.saturation_entropy, q.npc.window_begin);
    return q;
}

}  // namespace spinchaos
