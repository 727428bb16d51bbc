#include "spinchaos/shell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinchaos/error.hpp"
#include "spinchaos/kernels.hpp"

namespace spinchaos {

std::vector<std::size_t> nearest_to_median(std::span<const double> values, std::size_t count) {
    if (values.empty()) return {};
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(values[a] - median) < std::abs(values[b] - median);
    });
    idx.resize(std::min(count, n));
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::pair<std::size_t, std::size_t> central_range(std::size_t n, double fraction) {
    if (n == 0) return {0, 0};
    auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    const std::size_t first = (n - k) / 2;
    return {first, first + k};
}

CriticalityPoint band_center_criticality(const MeanFieldRepresentation& rep, double parameter, double fraction) {
    CriticalityPoint p;
    p.parameter = parameter;
    const auto [first, last] = central_range(rep.dimension(), fraction);
    double ratio_sum = 0.0, m_sum = 0.0;
    for (std::size_t n = first; n < last; ++n) {
        const RowStatistics& r = rep.rows[n];
        m_sum += static_cast<double>(r.connectivity);
        if (r.undefined || r.mean_spacing <= 0.0) continue;
        ratio_sum += r.coupling_ratio();
        ++p.rows_used;
    }
    p.mean_v_over_d = p.rows_used > 0 ? ratio_sum / static_cast<double>(p.rows_used) : 0.0;
    p.m_over_n = m_sum / static_cast<double>(last - first) / static_cast<double>(rep.dimension());
    return p;
}

CriticalityScan criticality_scan(std::span<const double> grid,
                                 const std::function<MeanFieldRepresentation(double)>& build) {
    CriticalityScan scan;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const MeanFieldRepresentation rep = build(grid[i]);
        scan.points.push_back(band_center_criticality(rep, grid[i]));
        if (!scan.crossing && scan.points.back().mean_v_over_d > 1.0) {
            scan.crossing = grid[i];
            if (i > 0) scan.bracket_low = grid[i - 1];
        }
    }
    return scan;
}

CriticalityScan criticality_scan(const ModelSpec& base, ScanParameter parameter, std::span<const double> grid) {
    const SectorBasis basis = build_even_parity_basis(base.length, base.n_up);
    const OperatorSet ops = OperatorSet::build(basis, base.model == Model::Model2);
    const bool fixed_unperturbed = parameter == ScanParameter::Lambda || base.model == Model::Model1;

    auto spec_at = [&](double value) {
        ModelSpec s = base;
        (parameter == ScanParameter::Mu ? s.mu : s.lambda) = value;
        s.validate();
        return s;
    };
    std::optional<Spectrum> cached;
    if (fixed_unperturbed && !grid.empty()) cached = diagonalize(unperturbed_operator(spec_at(grid.front()), ops));

    return criticality_scan(grid, [&](double value) {
        const ModelSpec s = spec_at(value);
        const RealSymmetricMatrix h_unperturbed = unperturbed_operator(s, ops);
        const RealSymmetricMatrix perturbation = compose_model(s, ops).plus_scaled(h_unperturbed, -1.0);
        if (cached) return rotate_into(*cached, perturbation, Stage::Rotation);
        return rotate_into(diagonalize(h_unperturbed), perturbation, Stage::Rotation);
    });
}

ShellParameters energy_shell(const MeanFieldRepresentation& rep, std::size_t n) {
    if (n >= rep.dimension()) throw DomainError("energy_shell: row out of range");
    return {rep.rotated(n, n), rep.rows[n].sigma()};
}

Envelope smooth_profile(std::span<const double> positions, std::span<const double> weights,
                        const ShellParameters& shell, const SmoothingOptions& smoothing) {
    if (smoothing.bins < 1) throw DomainError("smoothing needs at least one bin");
    const double half = shell.sigma > 0.0 ? smoothing.half_width_sigmas * shell.sigma : 0.5;
    const double lo = shell.center - half;
    const auto bins = static_cast<std::size_t>(smoothing.bins);
    Envelope env;
    env.bin_width = 2.0 * half / static_cast<double>(bins);
    env.centers.resize(bins);
    env.bin_mass.assign(bins, 0.0);
    for (std::size_t b = 0; b < bins; ++b) env.centers[b] = lo + (static_cast<double>(b) + 0.5) * env.bin_width;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const double u = (positions[i] - lo) / env.bin_width;
        if (u < 0.0 || u > static_cast<double>(bins)) continue;
        const auto b = std::min(static_cast<std::size_t>(u), bins - 1);
        env.bin_mass[b] += weights[i];
    }
    env.captured_mass = std::accumulate(env.bin_mass.begin(), env.bin_mass.end(), 0.0);

    std::vector<double> mass = env.bin_mass;
    if (smoothing.gaussian_kernel) {
        constexpr int radius = 4;
        std::vector<double> kernel(2 * radius + 1);
        for (int k = -radius; k <= radius; ++k) kernel[k + radius] = std::exp(-0.5 * k * k);
        const double ksum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
        for (double& k : kernel) k /= ksum;
        std::vector<double> out(bins, 0.0);
        for (std::size_t b = 0; b < bins; ++b)
            for (int k = -radius; k <= radius; ++k) {
                const auto t = static_cast<long>(b) + k;
                if (t >= 0 && t < static_cast<long>(bins)) out[static_cast<std::size_t>(t)] += mass[b] * kernel[k + radius];
            }
        mass = std::move(out);
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    env.heights.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) env.heights[b] = total > 0.0 ? mass[b] / (total * env.bin_width) : 0.0;
    return env;
}

ShapeSelection classify_shape(const Envelope& envelope) {
    double centroid = 0.0, second = 0.0;
    for (std::size_t b = 0; b < envelope.centers.size(); ++b) {
        const double p = envelope.heights[b] * envelope.bin_width;
        centroid += p * envelope.centers[b];
        second += p * envelope.centers[b] * envelope.centers[b];
    }
    const double sigma0 = std::sqrt(std::max(second - centroid * centroid, envelope.bin_width * envelope.bin_width));
    ShapeSelection sel;
    sel.gaussian = fit_gaussian(envelope.centers, envelope.heights, centroid, sigma0);
    sel.breit_wigner = fit_breit_wigner(envelope.centers, envelope.heights, centroid, 2.35 * sigma0);
    const double rg = sel.gaussian.residual, rb = sel.breit_wigner.residual;
    sel.selected = rb < rg ? ProfileShape::BreitWigner : ProfileShape::Gaussian;
    const double hi = std::max(rg, rb);
    sel.margin = hi > 0.0 ? (hi - std::min(rg, rb)) / hi : 0.0;
    return sel;
}

namespace {

void require_eigenstates(const MeanFieldRepresentation& rep, const char* what) {
    if (!rep.has_eigenstates()) throw DomainError(std::string(what) + " needs the exact eigenstates");
}

}  // namespace

StrengthFunction strength_function(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows,
                                   const SmoothingOptions& smoothing) {
    require_eigenstates(rep, "strength_function");
    if (rows.empty()) throw DomainError("strength_function: empty row set");
    const std::size_t n = rep.dimension();
    StrengthFunction sf;
    sf.rows.assign(rows.begin(), rows.end());
    double mean_center = 0.0, mean_sigma = 0.0;
    for (std::size_t r : rows) {
        if (r >= n) throw DomainError("strength_function: row out of range");
        const ShellParameters s = energy_shell(rep, r);
        mean_center += s.center;
        mean_sigma += s.sigma;
    }
    const double count = static_cast<double>(rows.size());
    sf.shell = {mean_center / count, mean_sigma / count};
    sf.energies.reserve(rows.size() * n);
    sf.weights.reserve(rows.size() * n);
    for (std::size_t r : rows) {
        const double shift = sf.shell.center - rep.rotated(r, r);
        for (std::size_t a = 0; a < n; ++a) {
            sf.energies.push_back(rep.exact[a] + shift);
            sf.weights.push_back(rep.weight(r, a) / count);
        }
    }
    sf.envelope = smooth_profile(sf.energies, sf.weights, sf.shell, smoothing);
    sf.shape = classify_shape(sf.envelope);
    return sf;
}

StrengthFunction strength_function(const MeanFieldRepresentation& rep, std::size_t n,
                                   const SmoothingOptions& smoothing) {
    const std::size_t rows[] = {n};
    return strength_function(rep, std::span<const std::size_t>(rows), smoothing);
}

EigenstateProfile eigenstate_shell_profile(const MeanFieldRepresentation& rep,
                                           std::span<const std::size_t> states,
                                           const SmoothingOptions& smoothing) {
    require_eigenstates(rep, "eigenstate_shell_profile");
    if (states.empty()) throw DomainError("eigenstate_shell_profile: empty state set");
    const std::size_t n = rep.dimension();
    EigenstateProfile ef;
    ef.states.assign(states.begin(), states.end());
    const double count = static_cast<double>(states.size());
    std::vector<double> centroids;
    double mean_center = 0.0, mean_sigma = 0.0;
    for (std::size_t a : states) {
        if (a >= n) throw DomainError("eigenstate_shell_profile: state out of range");
        double c = 0.0, s2 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double w = rep.weight(r, a);
            c += w * rep.unperturbed[r];
            s2 += w * rep.rows[r].sigma_squared;
        }
        centroids.push_back(c);
        mean_center += c;
        mean_sigma += std::sqrt(s2);
    }
    ef.shell = {mean_center / count, mean_sigma / count};
    double spread = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double shift = ef.shell.center - centroids[i];
        for (std::size_t r = 0; r < n; ++r) {
            const double x = rep.unperturbed[r] + shift;
            const double w = rep.weight(r, states[i]) / count;
            ef.energies.push_back(x);
            ef.weights.push_back(w);
            spread += w * (x - ef.shell.center) * (x - ef.shell.center);
        }
    }
    ef.envelope = smooth_profile(ef.energies, ef.weights, ef.shell, smoothing);
    ef.fill_ratio = ef.shell.sigma > 0.0 ? std::sqrt(spread) / ef.shell.sigma : 0.0;
    return ef;
}

DelocalizationMeasures delocalization(const MeanFieldRepresentation& rep, double central_fraction) {
    require_eigenstates(rep, "delocalization");
    const std::size_t n = rep.dimension();
    DelocalizationMeasures d;
    d.entropy.assign(n, 0.0);
    std::vector<double> sum_sq(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = rep.coefficients.row(r);
        for (std::size_t a = 0; a < n; ++a) {
            const double w = row[a] * row[a];
            if (w > 0.0) d.entropy[a] -= w * std::log(w);
            sum_sq[a] += w * w;
        }
    }
    d.ipr.resize(n);
    d.npc.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        d.ipr[a] = 1.0 / sum_sq[a];
        d.npc[a] = std::exp(d.entropy[a]);
    }
    const auto [first, last] = central_range(n, central_fraction);
    const double k = static_cast<double>(last - first);
    auto mean_var = [&](const std::vector<double>& v) {
        double m = 0.0;
        for (std::size_t a = first; a < last; ++a) m += v[a];
        m /= k;
        double var = 0.0;
        for (std::size_t a = first; a < last; ++a) var += (v[a] - m) * (v[a] - m);
        return std::pair{m, var / k};
    };
    std::tie(d.mean_entropy, d.entropy_variance) = mean_var(d.entropy);
    std::tie(d.mean_ipr, d.ipr_variance) = mean_var(d.ipr);
    return d;
}

MomentCheck check_moment_identities(const MeanFieldRepresentation& rep) {
    require_eigenstates(rep, "check_moment_identities");
    const std::size_t n = rep.dimension();
    const auto& k = kernels::active();
    MomentCheck mc;
    std::vector<double> column_sums(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = rep.coefficients.row(r);
        const kernels::WeightedMoments m = k.squared_weight_moments(row, rep.exact);
        mc.max_row_sum_error = std::max(mc.max_row_sum_error, std::abs(m.mass - 1.0));
        mc.max_centroid_error = std::max(mc.max_centroid_error, std::abs(m.first - rep.rotated(r, r)));
        const double variance = m.second - m.first * m.first;
        mc.max_variance_error = std::max(mc.max_variance_error, std::abs(variance - rep.rows[r].sigma_squared));
        for (std::size_t a = 0; a < n; ++a) column_sums[a] += row[a] * row[a];
    }
    for (double s : column_sums) mc.max_column_sum_error = std::max(mc.max_column_sum_error, std::abs(s - 1.0));
    return mc;
}

}  // namespace spinchaos
