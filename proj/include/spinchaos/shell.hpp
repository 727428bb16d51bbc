#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spinchaos/curve_fit.hpp"
#include "spinchaos/eigensystem.hpp"
#include "spinchaos/row_statistics.hpp"

namespace spinchaos {

// --- row selection ---------------------------------------------------------

/// The `count` indices whose values lie closest to the median (ties broken
/// by index), returned in ascending index order.
std::vector<std::size_t> nearest_to_median(std::span<const double> values, std::size_t count);

/// Index range [first, last) of the central `fraction` of n sorted items
/// (at least one item).
std::pair<std::size_t, std::size_t> central_range(std::size_t n, double fraction);

// --- v_n / d_n criticality -------------------------------------------------

struct CriticalityPoint {
    double parameter = 0.0;
    double mean_v_over_d = 0.0;  // over band-center rows with M_n > 0
    double m_over_n = 0.0;       // band-center mean of M_n / N
    std::size_t rows_used = 0;
};

struct CriticalityScan {
    std::vector<CriticalityPoint> points;
    /// Smallest grid value whose average v/d exceeds 1, and the grid value
    /// before it (the crossing bracket).
    std::optional<double> crossing;
    std::optional<double> bracket_low;
};

/// Band-center (central 10% of rows by eps) averages of one representation.
CriticalityPoint band_center_criticality(const MeanFieldRepresentation& rep, double parameter,
                                         double fraction = 0.1);

/// Evaluates `build(parameter)` for each grid value in order.
CriticalityScan criticality_scan(std::span<const double> grid,
                                 const std::function<MeanFieldRepresentation(double)>& build);

enum class ScanParameter { Mu, Lambda };

/// Scans mu or lambda of `base` on its sector; the unperturbed eigenbasis is
/// reused whenever it does not depend on the scanned parameter. Only the
/// unperturbed part is diagonalized.
CriticalityScan criticality_scan(const ModelSpec& base, ScanParameter parameter, std::span<const double> grid);

// --- strength functions and energy shell ----------------------------------

struct SmoothingOptions {
    int bins = 41;
    double half_width_sigmas = 4.0;  // window is center +- this many shell widths
    bool gaussian_kernel = false;    // extra smoothing, bandwidth = one bin
};

/// Binned probability density.
struct Envelope {
    std::vector<double> centers;
    std::vector<double> heights;    // integrates to 1 over the window
    std::vector<double> bin_mass;   // raw probability per bin before normalization
    double bin_width = 0.0;
    double captured_mass = 0.0;     // raw probability inside the window
};

struct ShellParameters {
    double center = 0.0;
    double sigma = 0.0;
};

/// Gaussian shell of one row: center H~[n][n], width sigma_n.
ShellParameters energy_shell(const MeanFieldRepresentation& rep, std::size_t n);

enum class ProfileShape { BreitWigner, Gaussian };

struct ShapeSelection {
    ProfileFit breit_wigner;
    ProfileFit gaussian;
    ProfileShape selected = ProfileShape::Gaussian;
    /// (larger residual - smaller residual) / larger residual
    double margin = 0.0;
};

/// Fits both shapes to an envelope (initial guesses from its moments) and
/// selects the one with the smaller RMS residual.
ShapeSelection classify_shape(const Envelope& envelope);

struct StrengthFunction {
    std::vector<std::size_t> rows;
    std::vector<double> energies;  // E_alpha, aligned on the mean centroid for averages
    std::vector<double> weights;   // w_n^alpha (divided by the row count for averages)
    Envelope envelope;
    ShellParameters shell;
    ShapeSelection shape;
};

/// w_n^alpha versus E_alpha for one row.
StrengthFunction strength_function(const MeanFieldRepresentation& rep, std::size_t n,
                                   const SmoothingOptions& smoothing = {});
/// Average over rows after shifting each by its centroid <E>_n = H~[n][n].
StrengthFunction strength_function(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows,
                                   const SmoothingOptions& smoothing = {});

struct EigenstateProfile {
    std::vector<std::size_t> states;
    std::vector<double> energies;  // eps_n, aligned on the mean centroid
    std::vector<double> weights;
    Envelope envelope;
    ShellParameters shell;
    /// RMS width of the averaged profile over the shell width.
    double fill_ratio = 0.0;
};

/// w_n^alpha versus eps_n at fixed alpha, averaged over `states` after
/// centroid alignment. Shell: center = eps-centroid, width =
/// sqrt(sum_n w_n^alpha sigma_n^2).
EigenstateProfile eigenstate_shell_profile(const MeanFieldRepresentation& rep,
                                           std::span<const std::size_t> states,
                                           const SmoothingOptions& smoothing = {});

/// Histogram of (position, weight) samples on center +- half_width_sigmas*sigma.
/// A zero sigma falls back to a half-width of 0.5.
Envelope smooth_profile(std::span<const double> positions, std::span<const double> weights,
                        const ShellParameters& shell, const SmoothingOptions& smoothing);

// --- delocalization --------------------------------------------------------

struct DelocalizationMeasures {
    std::vector<double> entropy;  // S_alpha = -sum_n w ln w
    std::vector<double> ipr;      // 1 / sum_n w^2
    std::vector<double> npc;      // exp(S_alpha)

    // Over the central 20% of eigenstates by energy.
    double mean_entropy = 0.0;
    double entropy_variance = 0.0;
    double mean_ipr = 0.0;
    double ipr_variance = 0.0;
};

DelocalizationMeasures delocalization(const MeanFieldRepresentation& rep, double central_fraction = 0.2);

// --- moment identities -----------------------------------------------------

struct MomentCheck {
    double max_centroid_error = 0.0;  // max_n |<E>_n - H~[n][n]|
    double max_variance_error = 0.0;  // max_n |Var_n(E) - sigma_n^2|
    double max_row_sum_error = 0.0;   // max_n |sum_alpha w - 1|
    double max_column_sum_error = 0.0;  // max_alpha |sum_n w - 1|
};

/// Checks the exact first/second moment identities of every strength
/// function and the double stochasticity of |C|^2.
MomentCheck check_moment_identities(const MeanFieldRepresentation& rep);

}  // namespace spinchaos
