#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; `active()` picks one at first use based on
// the running CPU. Vector versions reorder floating-point reductions, so they
// agree with the scalar reference to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace spinchaos::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct RowMoments {
    std::size_t count = 0;  // entries with |x| > threshold, skip index excluded
    double abs_sum = 0.0;   // sum of |x| over counted entries
    double sq_sum = 0.0;    // sum of x^2 over all entries except skip
};

struct Complex2 {
    double re = 0.0;
    double im = 0.0;
};

struct WeightedMoments {
    double mass = 0.0;    // sum w
    double first = 0.0;   // sum w x
    double second = 0.0;  // sum w x^2
};

struct KernelTable {
    Isa isa;
    /// dst[i] += alpha * src[i]
    void (*scaled_add)(std::span<double> dst, std::span<const double> src, double alpha);
    /// max |x[i]|
    double (*abs_max)(std::span<const double> x);
    /// Off-diagonal row reductions; `skip` is the diagonal position.
    RowMoments (*row_moments)(std::span<const double> row, std::size_t skip, double threshold);
    /// (sum a[i] c[i], sum a[i] s[i])
    Complex2 (*dual_dot)(std::span<const double> a, std::span<const double> c,
                         std::span<const double> s);
    /// Moments of x weighted by w[i] = coeff[i]^2.
    WeightedMoments (*squared_weight_moments)(std::span<const double> coeff,
                                              std::span<const double> x);
};

const KernelTable& scalar_table();
/// Null when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table in use. Defaults to the best supported ISA; setting the
/// environment variable SPINCHAOS_ISA=scalar forces the reference kernels.
const KernelTable& active();

}  // namespace spinchaos::kernels
