// Compiled with -mavx2 -mfma; only called after a runtime CPU probe.
#include <immintrin.h>

#include "variants.hpp"

namespace flm::kernels::detail::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
    const __m128d m = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double hmin(__m256d v) {
    const __m128d m = _mm_min_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
        const __m256d wa1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4));
        acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
        acc0 = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out) {
    std::size_t r = 0;
    // Four rows per pass so each load of x feeds four FMAs.
    for (; r + 4 <= rows; r += 4) {
        const double* m0 = m + r * cols;
        const double* m1 = m0 + cols;
        const double* m2 = m1 + cols;
        const double* m3 = m2 + cols;
        __m256d a0 = _mm256_setzero_pd();
        __m256d a1 = _mm256_setzero_pd();
        __m256d a2 = _mm256_setzero_pd();
        __m256d a3 = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const __m256d xv = _mm256_loadu_pd(x + c);
            a0 = _mm256_fmadd_pd(_mm256_loadu_pd(m0 + c), xv, a0);
            a1 = _mm256_fmadd_pd(_mm256_loadu_pd(m1 + c), xv, a1);
            a2 = _mm256_fmadd_pd(_mm256_loadu_pd(m2 + c), xv, a2);
            a3 = _mm256_fmadd_pd(_mm256_loadu_pd(m3 + c), xv, a3);
        }
        double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
        for (; c < cols; ++c) {
            s0 += m0[c] * x[c];
            s1 += m1[c] * x[c];
            s2 += m2[c] * x[c];
            s3 += m3[c] * x[c];
        }
        out[r] = s0;
        out[r + 1] = s1;
        out[r + 2] = s2;
        out[r + 3] = s3;
    }
    for (; r < rows; ++r) out[r] = dot(m + r * cols, x, cols);
}

Extrema scaled_extrema(const double* s, const double* shift, const double* scale, std::size_t n) {
    std::size_t j = 0;
    double mx = 0.0, mn = 0.0;
    bool seeded = false;
    if (n >= 4) {
        __m256d v = _mm256_loadu_pd(s);
        if (shift) v = _mm256_add_pd(v, _mm256_loadu_pd(shift));
        v = _mm256_div_pd(v, _mm256_loadu_pd(scale));
        __m256d vmax = v, vmin = v;
        for (j = 4; j + 4 <= n; j += 4) {
            __m256d u = _mm256_loadu_pd(s + j);
            if (shift) u = _mm256_add_pd(u, _mm256_loadu_pd(shift + j));
            u = _mm256_div_pd(u, _mm256_loadu_pd(scale + j));
            vmax = _mm256_max_pd(vmax, u);
            vmin = _mm256_min_pd(vmin, u);
        }
        mx = hmax(vmax);
        mn = hmin(vmin);
        seeded = true;
    }
    for (; j < n; ++j) {
        const double v = (shift ? s[j] + shift[j] : s[j]) / scale[j];
        if (!seeded) {
            mx = mn = v;
            seeded = true;
        }
        if (v > mx) mx = v;
        if (v < mn) mn = v;
    }
    // Collapse -0.0 so the result bits do not depend on reduction order.
    return {mx + 0.0, mn + 0.0};
}

}  // namespace flm::kernels::detail::avx2
