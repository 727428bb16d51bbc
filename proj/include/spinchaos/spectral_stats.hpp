#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spinchaos {

struct UnfoldOptions {
    double keep_fraction = 0.8;  // central part of the spectrum kept
    int poly_degree = 7;         // degree of the smooth staircase fit
};

/// Nearest-neighbour spacings of an unfolded spectrum (mean close to 1).
struct SpacingEnsemble {
    std::vector<double> spacings;
    UnfoldOptions options;
    std::size_t first_level = 0;  // kept window [first_level, last_level)
    std::size_t last_level = 0;

    double mean() const;
    std::size_t zero_count() const;
};

/// Spacings at or below this are counted as exact degeneracies.
inline constexpr double kZeroSpacing = 1e-8;

/// Drops (1 - keep_fraction)/2 of the levels at each edge, fits the staircase
/// N(E) with a polynomial and returns s_i = N~(E_{i+1}) - N~(E_i). Throws
/// DomainError if fewer than 50 levels remain and NumericalError if the
/// smooth fit is not monotonic in the window.
SpacingEnsemble unfold(std::span<const double> ascending_energies, UnfoldOptions options = {});

/// b(beta) = Gamma((beta+2)/(beta+1))^(beta+1)
double brody_scale(double beta);
/// P(s) = (beta+1) b s^beta exp(-b s^(beta+1)); unit mass and unit mean.
double brody_density(double s, double beta);
double poisson_density(double s);
/// (pi/2) s exp(-pi s^2/4)
double wigner_density(double s);

struct BrodyFit {
    double beta = 0.0;                  // maximum-likelihood estimate
    double log_likelihood = 0.0;
    double confidence_half_width = 0.0;  // 1.96 / sqrt(observed Fisher information)
    double histogram_beta = 0.0;         // binned least-squares cross-check
    double histogram_residual = 0.0;     // RMS density residual of the binned fit
    double discrepancy = 0.0;            // |beta - histogram_beta|
    std::size_t used = 0;                // nonzero spacings in the fit
    std::size_t zero_spacings = 0;
    std::vector<std::string> warnings;
};

inline constexpr double kBrodyBetaMax = 1.2;

/// MLE of the Brody parameter over [0, 1.2]. Zero spacings are excluded and
/// counted; the remaining ones are rescaled to unit mean. Throws
/// NumericalError when more than 30% of spacings are zero.
BrodyFit fit_brody(std::span<const double> spacings);
BrodyFit fit_brody(const SpacingEnsemble& ensemble);

struct SpacingHistogramRow {
    double bin_center;
    double density;
    double brody_fit;
    double poisson;
    double wigner;
};

/// Normalized histogram of spacings with the reference densities alongside.
std::vector<SpacingHistogramRow> spacing_histogram(std::span<const double> spacings, double beta,
                                                   double bin_width = 0.1, double s_max = 5.0);

}  // namespace spinchaos
