// Compiled with -mavx2 -mfma; only reached through avx2_table() after a
// runtime CPU check.

#include "spinchaos/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace spinchaos::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void scaled_add(std::span<double> dst, std::span<const double> src, double alpha) {
    const std::size_t n = dst.size();
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(dst.data() + i);
        _mm256_storeu_pd(dst.data() + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(src.data() + i), d));
    }
    for (; i < n; ++i) dst[i] += alpha * src[i];
}

double abs_max(std::span<const double> x) {
    const std::size_t n = x.size();
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, vabs(_mm256_loadu_pd(x.data() + i)));
    double r = hmax(m);
    for (; i < n; ++i) r = std::max(r, std::abs(x[i]));
    return r;
}

RowMoments row_moments(std::span<const double> row, std::size_t skip, double threshold) {
    const std::size_t n = row.size();
    const __m256d thr = _mm256_set1_pd(threshold);
    __m256d abs_acc = _mm256_setzero_pd();
    __m256d sq_acc = _mm256_setzero_pd();
    __m256i cnt = _mm256_setzero_si256();
    // The diagonal is excluded by masking its lane rather than branching.
    const std::size_t skip_block = skip - skip % 4;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(row.data() + i);
        if (i == skip_block && skip < n) {
            alignas(32) double tmp[4];
            _mm256_store_pd(tmp, x);
            tmp[skip - i] = 0.0;
            x = _mm256_load_pd(tmp);
        }
        const __m256d a = vabs(x);
        const __m256d keep = _mm256_cmp_pd(a, thr, _CMP_GT_OQ);
        abs_acc = _mm256_add_pd(abs_acc, _mm256_and_pd(a, keep));
        sq_acc = _mm256_fmadd_pd(x, x, sq_acc);
        // keep lanes are all-ones (-1 as int64)
        cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(keep));
    }
    alignas(32) std::int64_t counts[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(counts), cnt);
    RowMoments r;
    r.count = static_cast<std::size_t>(counts[0] + counts[1] + counts[2] + counts[3]);
    r.abs_sum = hsum(abs_acc);
    r.sq_sum = hsum(sq_acc);
    for (; i < n; ++i) {
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
    const std::size_t n = a.size();
    __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a0 = _mm256_loadu_pd(a.data() + i);
        const __m256d a1 = _mm256_loadu_pd(a.data() + i + 4);
        re0 = _mm256_fmadd_pd(a0, _mm256_loadu_pd(c.data() + i), re0);
        re1 = _mm256_fmadd_pd(a1, _mm256_loadu_pd(c.data() + i + 4), re1);
        im0 = _mm256_fmadd_pd(a0, _mm256_loadu_pd(s.data() + i), im0);
        im1 = _mm256_fmadd_pd(a1, _mm256_loadu_pd(s.data() + i + 4), im1);
    }
    Complex2 z{hsum(_mm256_add_pd(re0, re1)), hsum(_mm256_add_pd(im0, im1))};
    for (; i < n; ++i) {
        z.re += a[i] * c[i];
        z.im += a[i] * s[i];
    }
    return z;
}

WeightedMoments squared_weight_moments(std::span<const double> coeff, std::span<const double> x) {
    const std::size_t n = coeff.size();
    __m256d m0 = _mm256_setzero_pd(), m1 = _mm256_setzero_pd(), m2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(coeff.data() + i);
        const __m256d xv = _mm256_loadu_pd(x.data() + i);
        const __m256d w = _mm256_mul_pd(c, c);
        const __m256d wx = _mm256_mul_pd(w, xv);
        m0 = _mm256_add_pd(m0, w);
        m1 = _mm256_add_pd(m1, wx);
        m2 = _mm256_fmadd_pd(wx, xv, m2);
    }
    WeightedMoments m{hsum(m0), hsum(m1), hsum(m2)};
    for (; i < n; ++i) {
        const double w = coeff[i] * coeff[i];
        m.mass += w;
        m.first += w * x[i];
        m.second += w * x[i] * x[i];
    }
    return m;
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{Isa::Avx2, scaled_add, abs_max, row_moments,
                                   dual_dot,  squared_weight_moments};
    return table;
}

}  // namespace spinchaos::kernels
