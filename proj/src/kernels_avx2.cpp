#include "rpca/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace rpca::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t len) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= len) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < len; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double c, const double* x, double* y, std::size_t len) noexcept {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(vc, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < len; ++i) y[i] += c * x[i];
}

void scal(double c, double* x, std::size_t len) noexcept {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
    for (; i < len; ++i) x[i] *= c;
}

void rank1_upper(double* s, const double* y, double c, std::size_t m) noexcept {
    for (std::size_t r = 0; r < m; ++r) {
        const double cr = c * y[r];
        const __m256d vcr = _mm256_set1_pd(cr);
        double* row = s + r * m;
        std::size_t j = r;
        for (; j + 4 <= m; j += 4) {
            __m256d vs = _mm256_loadu_pd(row + j);
            vs = _mm256_fmadd_pd(vcr, _mm256_loadu_pd(y + j), vs);
            _mm256_storeu_pd(row + j, vs);
        }
        for (; j < m; ++j) row[j] += cr * y[j];
    }
}

}  // namespace rpca::kernels::avx2

#endif
