#include "spinchaos/row_statistics.hpp"

#include <algorithm>
#include <cmath>

#include "spinchaos/error.hpp"
#include "spinchaos/kernels.hpp"

namespace spinchaos {

double RowStatistics::sigma() const { return std::sqrt(sigma_squared); }

std::vector<RowStatistics> compute_row_statistics(std::span<const double> unperturbed,
                                                  const RealSymmetricMatrix& rotated,
                                                  double zero_threshold) {
    const std::size_t n = rotated.order();
    if (unperturbed.size() != n) throw DomainError("row statistics: label count differs from matrix order");
    const auto& k = kernels::active();
    std::vector<RowStatistics> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = rotated.row(r);
        const kernels::RowMoments m = k.row_moments(row, r, zero_threshold);
        RowStatistics& s = out[r];
        s.connectivity = m.count;
        s.sigma_squared = m.sq_sum;
        if (m.count == 0) {
            s.undefined = true;
            continue;
        }
        // eps is ascending, so the extreme coupled energies sit at the first
        // and last coupled columns; the row itself is included.
        std::size_t lo = r, hi = r;
        for (std::size_t c = 0; c < r; ++c)
            if (std::abs(row[c]) > zero_threshold) {
                lo = c;
                break;
            }
        for (std::size_t c = n; c-- > r + 1;)
            if (std::abs(row[c]) > zero_threshold) {
                hi = c;
                break;
            }
        const double mc = static_cast<double>(m.count);
        s.mean_coupling = m.abs_sum / mc;
        s.mean_spacing = (unperturbed[hi] - unperturbed[lo]) / mc;
    }
    return out;
}

}  // namespace spinchaos
