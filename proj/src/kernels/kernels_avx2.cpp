// Compiled with -mavx2 -mfma; only reached through the runtime dispatch.

#include <immintrin.h>

#include "eventclock/kernels.hpp"

namespace eventclock::kernels {
namespace {

// One __m256d holds two complex numbers: [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * b, lane-wise complex product.
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmsubadd_pd(a_sw, b_im, _mm256_mul_pd(a, b_re));
}

inline cplx hsum_complex(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return {lanes[0] + lanes[2], lanes[1] + lanes[3]};
}

inline double hsum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double norm_sq_avx2(const cplx* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = load2(a + i);
        const __m256d v1 = load2(a + i + 2);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d v = load2(a + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return total;
}

void mul_inplace_avx2(cplx* a, const cplx* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(a + i, cmul(load2(a + i), load2(b + i)));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        a[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
    }
}

WeightedDot dot_weighted_avx2(const cplx* a, const cplx* b, const double* w, std::size_t n) {
    __m256d plain = _mm256_setzero_pd();
    __m256d weighted = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d prod = cmul(load2(a + i), load2(b + i));
        const __m128d wv = _mm_loadu_pd(w + i);
        const __m256d wdup = _mm256_set_m128d(_mm_unpackhi_pd(wv, wv), _mm_unpacklo_pd(wv, wv));
        plain = _mm256_add_pd(plain, prod);
        weighted = _mm256_fmadd_pd(wdup, prod, weighted);
    }
    WeightedDot out{hsum_complex(plain), hsum_complex(weighted)};
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        const cplx prod(ar * br - ai * bi, ar * bi + ai * br);
        out.plain += prod;
        out.weighted += w[i] * prod;
    }
    return out;
}

cplx inner_avx2(const cplx* a, const cplx* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = _mm256_add_pd(acc, cmul_conj(load2(a + i), load2(b + i)));
    cplx total = hsum_complex(acc);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        total += cplx(ar * br + ai * bi, ar * bi - ai * br);
    }
    return total;
}

void gemv_avx2(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const cplx* row = a + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 2 <= cols; c += 2) acc = _mm256_add_pd(acc, cmul(load2(row + c), load2(x + c)));
        cplx total = hsum_complex(acc);
        for (; c < cols; ++c) {
            const double ar = row[c].real(), ai = row[c].imag();
            const double xr = x[c].real(), xi = x[c].imag();
            total += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
        }
        y[r] = total;
    }
}

constexpr KernelTable kAvx2Table{
    Isa::avx2, norm_sq_avx2, mul_inplace_avx2, dot_weighted_avx2, inner_avx2, gemv_avx2,
};

}  // namespace

const KernelTable* avx2_table_impl() noexcept { return &kAvx2Table; }

}  // namespace eventclock::kernels
