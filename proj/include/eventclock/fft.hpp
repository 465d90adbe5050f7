#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace eventclock {

/// Unnormalised complex DFT pair of fixed length:
///   forward:  X_k = sum_j x_j e^{-2 pi i jk/n}
///   backward: x_j = sum_k X_k e^{+2 pi i jk/n}   (no 1/n)
/// Plans are created once per length and shared; execution is thread-safe.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

    std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) const;
    std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in) const;

    struct Plans;

private:
    std::size_t n_;
    std::shared_ptr<const Plans> plans_;
};

/// out = (1/n) IDFT(multiplier * DFT(in)), evaluated in long double so that
/// repeated application accumulates only the final rounding to double.
void spectral_multiply_extended(std::span<const std::complex<double>> in,
                                std::span<const std::complex<long double>> multiplier,
                                std::span<std::complex<double>> out);

}  // namespace eventclock
