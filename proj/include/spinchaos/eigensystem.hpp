#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spinchaos/basis.hpp"
#include "spinchaos/dense_matrix.hpp"
#include "spinchaos/hamiltonian.hpp"
#include "spinchaos/row_statistics.hpp"

namespace spinchaos {

/// Eigenvalues in ascending order (up to rounding-level swaps inside a
/// degenerate multiplet); column a of `vectors` is eigenvector a.
struct Spectrum {
    std::vector<double> values;
    DenseMatrix vectors;

    std::size_t size() const { return values.size(); }
};

/// |a - b| < 1e-9 * max(1, |a|)
bool nearly_degenerate(double a, double b);

/// Half-open index ranges [first, last) of runs of nearly degenerate values
/// in an ascending sequence. Singletons are included.
std::vector<std::pair<std::size_t, std::size_t>> degenerate_multiplets(std::span<const double> values);

/// Full dense eigendecomposition (LAPACK dsyevd). Output is canonicalized:
/// each eigenvector has its largest-magnitude component positive, and inside
/// a degenerate multiplet vectors are ordered by the index of their first
/// significant component, then by that component's magnitude (descending).
/// Throws NumericalError if the solver fails.
Spectrum diagonalize(const RealSymmetricMatrix& h);

/// The total Hamiltonian presented in the eigenbasis of its unperturbed part.
struct MeanFieldRepresentation {
    std::vector<double> unperturbed;  // eps_n, ascending
    RealSymmetricMatrix rotated;      // H~[n][m]
    std::vector<double> exact;        // E_alpha, ascending; empty before diagonalization
    DenseMatrix coefficients;         // C[n][alpha] = <n|alpha>
    std::vector<RowStatistics> rows;

    std::size_t dimension() const { return unperturbed.size(); }
    bool has_eigenstates() const { return !exact.empty(); }
    /// w_n^alpha = C[n][alpha]^2
    double weight(std::size_t n, std::size_t alpha) const {
        const double c = coefficients(n, alpha);
        return c * c;
    }
};

enum class Stage {
    Rotation,  // eps, H~ and row statistics only
    Full,      // plus exact energies and coefficients
};

/// Builds the representation from a precomputed unperturbed spectrum and the
/// perturbation (total minus unperturbed): H~ = diag(eps) + U^T V U. A zero
/// perturbation gives an exactly diagonal H~.
MeanFieldRepresentation rotate_into(const Spectrum& unperturbed, const RealSymmetricMatrix& perturbation,
                                    Stage stage = Stage::Full);

/// From an already-rotated matrix (rows labelled by ascending eps).
MeanFieldRepresentation from_rotated(std::vector<double> unperturbed, RealSymmetricMatrix rotated,
                                     Stage stage = Stage::Full);

/// Model1: unperturbed H0, total H0 + mu V1. Model2: unperturbed H0 + mu V1,
/// total adds lambda V2.
MeanFieldRepresentation mean_field_representation(const ModelSpec& spec, const OperatorSet& ops,
                                                  Stage stage = Stage::Full);
MeanFieldRepresentation mean_field_representation(const ModelSpec& spec, const SectorBasis& basis,
                                                  Stage stage = Stage::Full);

}  // namespace spinchaos
