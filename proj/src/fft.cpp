#include "eventclock/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace eventclock {

struct Fft::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit Plans(std::size_t n) {
        // Planning arrays are scratch; FFTW_UNALIGNED lets execution run on any buffer.
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        const int len = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags);
        backward = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
        if (forward == nullptr || backward == nullptr) {
            destroy();
            throw std::runtime_error("Fft: FFTW planning failed");
        }
    }
    ~Plans() { destroy(); }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;

private:
    void destroy() noexcept {
        if (forward != nullptr) fftw_destroy_plan(forward);
        if (backward != nullptr) fftw_destroy_plan(backward);
        forward = backward = nullptr;
    }
};

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::shared_ptr<const Fft::Plans> plans_for(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    static std::map<std::size_t, std::shared_ptr<const Fft::Plans>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const Fft::Plans>(n);
    return slot;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

fftw_complex* as_fftw(const std::complex<double>* p) {
    // new-array execute never writes through the input pointer for out-of-place plans.
    return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

struct ExtendedPlans {
    fftwl_plan forward = nullptr;
    fftwl_plan backward = nullptr;

    explicit ExtendedPlans(std::size_t n) {
        auto* in = fftwl_alloc_complex(n);
        auto* out = fftwl_alloc_complex(n);
        const int len = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward = fftwl_plan_dft_1d(len, in, out, FFTW_FORWARD, flags);
        backward = fftwl_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags);
        fftwl_free(in);
        fftwl_free(out);
        if (forward == nullptr || backward == nullptr) {
            destroy();
            throw std::runtime_error("spectral_multiply_extended: FFTW planning failed");
        }
    }
    ~ExtendedPlans() { destroy(); }
    ExtendedPlans(const ExtendedPlans&) = delete;
    ExtendedPlans& operator=(const ExtendedPlans&) = delete;

private:
    void destroy() noexcept {
        if (forward != nullptr) fftwl_destroy_plan(forward);
        if (backward != nullptr) fftwl_destroy_plan(backward);
        forward = backward = nullptr;
    }
};

std::shared_ptr<const ExtendedPlans> extended_plans_for(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    static std::map<std::size_t, std::shared_ptr<const ExtendedPlans>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const ExtendedPlans>(n);
    return slot;
}

}  // namespace

void spectral_multiply_extended(std::span<const std::complex<double>> in,
                                std::span<const std::complex<long double>> multiplier,
                                std::span<std::complex<double>> out) {
    const std::size_t n = in.size();
    if (n == 0) throw std::invalid_argument("spectral_multiply_extended: zero length");
    if (multiplier.size() != n || out.size() != n)
        throw std::invalid_argument("spectral_multiply_extended: length mismatch");
    const auto plans = extended_plans_for(n);

    std::vector<std::complex<long double>> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = {in[j].real(), in[j].imag()};
    fftwl_execute_dft(plans->forward, reinterpret_cast<fftwl_complex*>(a.data()),
                      reinterpret_cast<fftwl_complex*>(b.data()));
    for (std::size_t k = 0; k < n; ++k) {
        const long double re = b[k].real() * multiplier[k].real() - b[k].imag() * multiplier[k].imag();
        const long double im = b[k].real() * multiplier[k].imag() + b[k].imag() * multiplier[k].real();
        b[k] = {re, im};
    }
    fftwl_execute_dft(plans->backward, reinterpret_cast<fftwl_complex*>(b.data()),
                      reinterpret_cast<fftwl_complex*>(a.data()));
    const long double inv_n = 1.0L / static_cast<long double>(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = {static_cast<double>(a[j].real() * inv_n), static_cast<double>(a[j].imag() * inv_n)};
}

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: zero length");
    plans_ = plans_for(n);
}

void Fft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Fft::forward: length mismatch");
    if (in.data() == out.data()) throw std::invalid_argument("Fft::forward: in-place use is not supported");
    fftw_execute_dft(plans_->forward, as_fftw(in.data()), as_fftw(out.data()));
}

void Fft::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Fft::backward: length mismatch");
    if (in.data() == out.data()) throw std::invalid_argument("Fft::backward: in-place use is not supported");
    fftw_execute_dft(plans_->backward, as_fftw(in.data()), as_fftw(out.data()));
}

std::vector<std::complex<double>> Fft::forward(std::span<const std::complex<double>> in) const {
    std::vector<std::complex<double>> out(n_);
    forward(in, out);
    return out;
}

std::vector<std::complex<double>> Fft::backward(std::span<const std::complex<double>> in) const {
    std::vector<std::complex<double>> out(n_);
    backward(in, out);
    return out;
}

}  // namespace eventclock
