#include "eventclock/kernels.hpp"

namespace eventclock::kernels {
namespace {

// Real/imaginary parts are written out by hand: std::complex operator* goes
// through the Annex G NaN/inf recovery path, which we never need here.

double norm_sq_scalar(const cplx* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real();
        const double im = a[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

void mul_inplace_scalar(cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        a[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
    }
}

WeightedDot dot_weighted_scalar(const cplx* a, const cplx* b, const double* w, std::size_t n) {
    double pr = 0.0, pi = 0.0, wr = 0.0, wi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        const double re = ar * br - ai * bi;
        const double im = ar * bi + ai * br;
        pr += re;
        pi += im;
        wr += w[i] * re;
        wi += w[i] * im;
    }
    return {cplx(pr, pi), cplx(wr, wi)};
}

cplx inner_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void gemv_scalar(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const cplx* row = a + r * cols;
        double re = 0.0, im = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double ar = row[c].real(), ai = row[c].imag();
            const double xr = x[c].real(), xi = x[c].imag();
            re += ar * xr - ai * xi;
            im += ar * xi + ai * xr;
        }
        y[r] = cplx(re, im);
    }
}

constexpr KernelTable kScalarTable{
    Isa::scalar, norm_sq_scalar, mul_inplace_scalar, dot_weighted_scalar, inner_scalar, gemv_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalarTable; }

}  // namespace eventclock::kernels
