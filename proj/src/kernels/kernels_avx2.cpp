// AVX2+FMA variants of the float32 kernels. Compiled with -mavx2 -mfma;
// callers reach them only through the runtime-dispatched table, so the
// binary stays runnable on non-AVX2 hosts.

#include "pace/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace pace::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const float* a, const float* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        acc0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                               _mm256_cvtps_pd(_mm256_castps256_ps128(vb)), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                               _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)), acc1);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += double(a[i]) * double(b[i]);
    return sum;
}

double squared_norm_avx2(const float* a, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        acc0 = _mm256_fmadd_pd(lo, lo, acc0);
        acc1 = _mm256_fmadd_pd(hi, hi, acc1);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += double(a[i]) * double(a[i]);
    return sum;
}

CosineStats cosine_stats_avx2(const float* a, const float* b, size_t n) {
    __m256d dot0 = _mm256_setzero_pd(), dot1 = _mm256_setzero_pd();
    __m256d na0 = _mm256_setzero_pd(), na1 = _mm256_setzero_pd();
    __m256d nb0 = _mm256_setzero_pd(), nb1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        __m256d alo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        __m256d ahi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        __m256d blo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
        __m256d bhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
        dot0 = _mm256_fmadd_pd(alo, blo, dot0);
        dot1 = _mm256_fmadd_pd(ahi, bhi, dot1);
        na0 = _mm256_fmadd_pd(alo, alo, na0);
        na1 = _mm256_fmadd_pd(ahi, ahi, na1);
        nb0 = _mm256_fmadd_pd(blo, blo, nb0);
        nb1 = _mm256_fmadd_pd(bhi, bhi, nb1);
    }
    CosineStats s{hsum(_mm256_add_pd(dot0, dot1)), hsum(_mm256_add_pd(na0, na1)),
                  hsum(_mm256_add_pd(nb0, nb1))};
    for (; i < n; ++i) {
        double x = a[i], y = b[i];
        s.dot += x * y;
        s.norm_a_sq += x * x;
        s.norm_b_sq += y * y;
    }
    return s;
}

void axpy_avx2(double alpha, const float* x, double* acc, size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        __m256d vacc = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(va, vx, vacc));
    }
    for (; i < n; ++i) acc[i] += alpha * double(x[i]);
}

constexpr Ops kAvx2Ops = {"avx2", dot_avx2, squared_norm_avx2, cosine_stats_avx2,
                          axpy_avx2};

}  // namespace

const Ops* avx2_ops() {
    return cpu_supports_avx2() ? &kAvx2Ops : nullptr;
}

}  // namespace pace::kernels

#else

namespace pace::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace pace::kernels

#endif
