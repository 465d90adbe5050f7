#include <cstdlib>
#include <stdexcept>
#include <string>

#include "eventclock/kernels.hpp"

namespace eventclock::kernels {

#if defined(EVENTCLOCK_HAVE_AVX2)
const KernelTable* avx2_table_impl() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(EVENTCLOCK_HAVE_AVX2)
    return avx2_table_impl();
#else
    return nullptr;
#endif
}

bool cpu_supports_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

bool force_scalar() {
    const char* env = std::getenv("EVENTCLOCK_FORCE_SCALAR");
    return env != nullptr && std::string(env) != "" && std::string(env) != "0";
}

const KernelTable& select() {
    if (!force_scalar() && cpu_supports_avx2()) {
        if (const KernelTable* t = avx2_table()) return *t;
    }
    return scalar_table();
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": operand lengths differ");
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

double norm_sq(std::span<const cplx> a) noexcept { return active().norm_sq(a.data(), a.size()); }

void mul_inplace(std::span<cplx> a, std::span<const cplx> b) {
    require_same_size(a.size(), b.size(), "mul_inplace");
    active().mul_inplace(a.data(), b.data(), a.size());
}

WeightedDot dot_weighted(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w) {
    require_same_size(a.size(), b.size(), "dot_weighted");
    require_same_size(a.size(), w.size(), "dot_weighted");
    return active().dot_weighted(a.data(), b.data(), w.data(), a.size());
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    require_same_size(a.size(), b.size(), "inner");
    return active().inner(a.data(), b.data(), a.size());
}

void gemv(std::span<const cplx> a, std::span<const cplx> x, std::span<cplx> y, std::size_t rows,
          std::size_t cols) {
    require_same_size(a.size(), rows * cols, "gemv");
    require_same_size(x.size(), cols, "gemv");
    require_same_size(y.size(), rows, "gemv");
    active().gemv(a.data(), x.data(), y.data(), rows, cols);
}

}  // namespace eventclock::kernels
