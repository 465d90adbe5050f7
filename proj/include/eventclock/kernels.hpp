#pragma once

// Data-parallel inner loops over interleaved complex<double> arrays.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// compiled when the toolchain targets x86-64 and is picked at runtime when the
// CPU reports both features. The variants differ only in summation order, so
// reductions agree with the reference to rounding, not bit-for-bit.
//
// Setting EVENTCLOCK_FORCE_SCALAR=1 in the environment pins the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace eventclock::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Sum_i a_i b_i and Sum_i w_i a_i b_i (no conjugation).
struct WeightedDot {
    cplx plain;
    cplx weighted;
};

struct KernelTable {
    Isa isa;
    /// Sum_i |a_i|^2
    double (*norm_sq)(const cplx* a, std::size_t n);
    /// a_i <- a_i * b_i
    void (*mul_inplace)(cplx* a, const cplx* b, std::size_t n);
    WeightedDot (*dot_weighted)(const cplx* a, const cplx* b, const double* w, std::size_t n);
    /// Sum_i conj(a_i) b_i
    cplx (*inner)(const cplx* a, const cplx* b, std::size_t n);
    /// y = A x for row-major A (rows x cols); y must not alias x.
    void (*gemv)(const cplx* a, const cplx* x, cplx* y, std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table() noexcept;

/// True when the running CPU can execute the AVX2 table.
bool cpu_supports_avx2() noexcept;

/// Table chosen once per process: AVX2 when compiled and supported, unless
/// EVENTCLOCK_FORCE_SCALAR is set.
const KernelTable& active() noexcept;

// Span front-ends over the active table.

double norm_sq(std::span<const cplx> a) noexcept;
void mul_inplace(std::span<cplx> a, std::span<const cplx> b);
WeightedDot dot_weighted(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
void gemv(std::span<const cplx> a, std::span<const cplx> x, std::span<cplx> y, std::size_t rows,
          std::size_t cols);

}  // namespace eventclock::kernels
