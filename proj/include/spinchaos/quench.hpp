#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spinchaos/dense_matrix.hpp"
#include "spinchaos/eigensystem.hpp"

namespace spinchaos {

/// Uniform points on [0, 8/sigma_bar] (400) followed by 100 points up to
/// max_factor/sigma_bar. A non-positive sigma_bar is treated as 1.
std::vector<double> default_time_grid(double sigma_bar, double max_factor = 80.0, std::size_t dense_points = 400,
                                      std::size_t tail_points = 100);

/// Time evolution of one unperturbed basis state |k>.
struct QuenchTrace {
    std::size_t initial_row = 0;
    std::vector<double> times;
    DenseMatrix occupations;      // [t][n] = Omega_n^(k)(t)
    std::vector<double> survival;  // W_k(t) = Omega_k^(k)(t)
    std::vector<double> entropy;   // S_k(t), nats
    double sigma = 0.0;            // sigma_k of the initial row
    std::size_t connectivity = 0;  // M_k of the initial row
};

/// Omega_n(t) = |sum_alpha C[k][alpha] C[n][alpha] exp(-i E_alpha t)|^2 for
/// every grid time; fills occupations, survival and entropy.
QuenchTrace evolve(const MeanFieldRepresentation& rep, std::size_t k, std::span<const double> times);

/// -sum p ln p with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);
/// Entropy of every row of the occupation matrix.
std::vector<double> entropy_trace(const QuenchTrace& trace);

/// S = -W ln W - (1-W) ln((1-W)/N_pc)
double analytic_entropy(double survival, double npc);
/// W = exp(-sigma^2 t^2)
double gaussian_survival(double sigma, double t);
/// S = sigma t ln M. Throws DomainError for M < 2.
double linear_law(double sigma, double connectivity, double t);

struct NpcEstimate {
    double time_average = 0.0;       // <exp(S)> over the plateau window
    double diagonal_ensemble = 0.0;  // exp(-sum Omega_bar ln Omega_bar)
    double saturation_entropy = 0.0;  // <S> over the plateau window
    std::size_t window_begin = 0;     // first grid index of the plateau
};

/// Start of the saturated part of S(t): first 20-sample window after the
/// steepest one whose least-squares slope is below 1% of the steepest. A
/// trace that never rises is plateau from index 0. Throws NumericalError
/// when no plateau is found.
std::size_t detect_plateau(std::span<const double> times, std::span<const double> entropy,
                           std::size_t window = 20, double relative_slope = 0.01);

/// exp of the entropy of the infinite-time average Omega_bar_n = sum_alpha (C[k][alpha] C[n][alpha])^2.
double diagonal_ensemble_npc(const MeanFieldRepresentation& rep, std::size_t k);

/// Plateau statistics of an entropy trace; `diagonal_ensemble` is passed through.
NpcEstimate estimate_npc(std::span<const double> times, std::span<const double> entropy,
                         double diagonal_ensemble);
NpcEstimate estimate_npc(const QuenchTrace& trace, const MeanFieldRepresentation& rep);

struct LinearWindow {
    double slope = 0.0;
    double t_begin = 0.0;
    double t_end = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of S(t) over the rising part where
/// lower*S_inf <= S <= upper*S_inf (before the plateau).
std::optional<LinearWindow> linear_window(std::span<const double> times, std::span<const double> entropy,
                                          double saturation_entropy, std::size_t plateau_begin,
                                          double lower = 0.2, double upper = 0.7);

/// Pointwise average of several quenches with analytic overlays.
struct AveragedQuench {
    std::vector<std::size_t> rows;
    std::vector<double> times;
    std::vector<double> survival;  // mean W_k(t)
    std::vector<double> entropy;   // mean S_k(t)
    double sigma_bar = 0.0;        // mean sigma_k
    double log_connectivity = 0.0;  // mean ln M_k
    NpcEstimate npc;               // time average from the mean S(t); DE = mean over k
    std::vector<double> gaussian;  // exp(-sigma_bar^2 t^2)
    std::vector<double> analytic;  // analytic_entropy(mean W, npc.time_average)
    std::vector<double> linear;    // sigma_bar t mean(ln M_k)
    std::optional<LinearWindow> window;
};

AveragedQuench averaged_quench(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows,
                               std::span<const double> times);

/// Mean sigma_k over a row set.
double mean_sigma(const MeanFieldRepresentation& rep, std::span<const std::size_t> rows);

}  // namespace spinchaos
