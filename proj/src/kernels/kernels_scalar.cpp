#include "spinchaos/kernels.hpp"

#include <cmath>

namespace spinchaos::kernels {
namespace {

void scaled_add(std::span<double> dst, std::span<const double> src, double alpha) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += alpha * src[i];
}

double abs_max(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

RowMoments row_moments(std::span<const double> row, std::size_t skip, double threshold) {
    RowMoments r;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i == skip) continue;
        const double a = std::abs(row[i]);
        r.sq_sum += row[i] * row[i];
        if (a > threshold) {
            ++r.count;
            r.abs_sum += a;
        }
    }
    return r;
}

Complex2 dual_dot(std::span<const double> a, std::span<const double> c, std::span<const double> s) {
    Complex2 z;
    for (std::size_t i = 0; i < a.size(); ++i) {
        z.re += a[i] * c[i];
        z.im += a[i] * s[i];
    }
    return z;
}

WeightedMoments squared_weight_moments(std::span<const double> coeff, std::span<const double> x) {
    WeightedMoments m;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double w = coeff[i] * coeff[i];
        m.mass += w;
        m.first += w * x[i];
        m.second += w * x[i] * x[i];
    }
    return m;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::Scalar,  scaled_add, abs_max, row_moments,
                                   dual_dot,     squared_weight_moments};
    return table;
}

}  // namespace spinchaos::kernels
