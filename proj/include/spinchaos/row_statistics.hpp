#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinchaos/dense_matrix.hpp"

namespace spinchaos {

/// Coupling statistics of one row n of the Hamiltonian in the mean-field basis.
struct RowStatistics {
    std::size_t connectivity = 0;  // M_n: off-diagonal |H[n][m]| above threshold
    double mean_coupling = 0.0;    // v_n = sum_{m!=n} |H[n][m]| / M_n
    double mean_spacing = 0.0;     // d_n = (eps_max - eps_min) / M_n over n and its coupled states
    double sigma_squared = 0.0;    // sum_{m!=n} H[n][m]^2
    bool undefined = false;        // M_n == 0: v_n, d_n meaningless

    double sigma() const;
    double coupling_ratio() const { return mean_coupling / mean_spacing; }
};

/// Default structural-zero threshold, relative to max |H|.
inline constexpr double kRelativeZeroThreshold = 1e-10;

/// Statistics for every row. `unperturbed` are the ascending energies eps_n
/// labelling the rows; entries with |H[n][m]| <= zero_threshold are treated as
/// structural zeros.
std::vector<RowStatistics> compute_row_statistics(std::span<const double> unperturbed,
                                                  const RealSymmetricMatrix& rotated,
                                                  double zero_threshold);

}  // namespace spinchaos
