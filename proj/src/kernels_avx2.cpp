#include "wedge/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace wedge::kernels::avx2 {

namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// (+0, -0, +0, -0): xor negates the odd lanes
inline __m256d odd_neg_mask() { return _mm256_setr_pd(0.0, -0.0, 0.0, -0.0); }

} // namespace

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        __m256d t1 = _mm256_mul_pd(vx, ar);
        __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(vx, 0x5), ai);
        __m256d vy = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(vy, _mm256_addsub_pd(t1, t2)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void scal(cplx a, cplx* x, std::size_t n) {
    double* xp = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        __m256d t1 = _mm256_mul_pd(vx, ar);
        __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(vx, 0x5), ai);
        _mm256_storeu_pd(xp + 2 * i, _mm256_addsub_pd(t1, t2));
    }
    for (; i < n; ++i) x[i] *= a;
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum4(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const __m256d neg = odd_neg_mask();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(xp + 2 * i);
        __m256d vy = _mm256_loadu_pd(yp + 2 * i);
        acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
        __m256d t = _mm256_mul_pd(vx, _mm256_permute_pd(vy, 0x5));
        acc_im = _mm256_add_pd(acc_im, _mm256_xor_pd(t, neg));
    }
    double re = hsum4(acc_re);
    double im = hsum4(acc_im);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

double norm2sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(vx, vx, acc);
    }
    double s = hsum4(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double norm2sq(const cplx* x, std::size_t n) {
    return norm2sq(reinterpret_cast<const double*>(x), 2 * n);
}

void spmv(const int* row_ptr, const int* col_idx, const double* vals,
          const double* x, double* y, int nrows) {
    for (int r = 0; r < nrows; ++r) {
        const int k0 = row_ptr[r], k1 = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        int k = k0;
        for (; k + 4 <= k1; k += 4) {
            __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + k));
            __m256d vx = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), vx, acc);
        }
        double s = hsum4(acc);
        for (; k < k1; ++k) s += vals[k] * x[col_idx[k]];
        y[r] = s;
    }
}

void spmv(const int* row_ptr, const int* col_idx, const cplx* vals,
          const cplx* x, cplx* y, int nrows) {
    const double* vp = reinterpret_cast<const double*>(vals);
    const double* xp = reinterpret_cast<const double*>(x);
    for (int r = 0; r < nrows; ++r) {
        const int k0 = row_ptr[r], k1 = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        int k = k0;
        for (; k + 2 <= k1; k += 2) {
            __m256d vv = _mm256_loadu_pd(vp + 2 * k);
            __m256d vx = _mm256_set_m128d(_mm_loadu_pd(xp + 2 * col_idx[k + 1]),
                                          _mm_loadu_pd(xp + 2 * col_idx[k]));
            __m256d t1 = _mm256_mul_pd(vv, _mm256_movedup_pd(vx));
            __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(vv, 0x5),
                                       _mm256_permute_pd(vx, 0xF));
            acc = _mm256_add_pd(acc, _mm256_addsub_pd(t1, t2));
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        __m128d hi = _mm256_extractf128_pd(acc, 1);
        __m128d sum = _mm_add_pd(lo, hi);
        double sr = _mm_cvtsd_f64(sum);
        double si = _mm_cvtsd_f64(_mm_unpackhi_pd(sum, sum));
        cplx s{sr, si};
        for (; k < k1; ++k) s += vals[k] * x[col_idx[k]];
        y[r] = s;
    }
}

} // namespace wedge::kernels::avx2

#endif // x86-64
