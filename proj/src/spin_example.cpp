#include "eventclock/spin_example.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eventclock::spin {

void SpinExampleConfig::validate() const {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
        throw std::invalid_argument("SpinExampleConfig: |a|^2 + |b|^2 must equal 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("SpinExampleConfig: T must be > 0");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("SpinExampleConfig: delta must be >= 0");
}

double coupling(const SpinExampleConfig& config) {
    switch (config.g_convention) {
        case GConvention::paper: return std::numbers::pi / config.T;
        case GConvention::flip_at_T: return std::numbers::pi / (4.0 * config.T);
    }
    throw std::invalid_argument("coupling: unknown convention");
}

SpinModel build(const SpinExampleConfig& config) {
    config.validate();

    Vector system(2);
    system << config.a, config.b;
    const StateVector psi0 = tensor(StateVector(system), StateVector::basis(2, kUp));

    const DenseOperator one = DenseOperator::identity(2);
    const DenseOperator generator = Complex(coupling(config)) * tensor(one - pauli_z(), pauli_x());

    CorrelationSpec spec{{{kUp, kUp}, {kDown, kDown}}, 2, 2};
    spec.validate();
    return {psi0, PiecewiseHamiltonian::constant(generator, 0.0, config.T), spec};
}

double analytic_survival(const SpinExampleConfig& config, std::size_t k) {
    config.validate();
    if (std::abs(config.a) > 1e-12)
        throw std::invalid_argument("analytic_survival: closed form requires a = 0");
    const double c = std::cos(2.0 * coupling(config) * config.delta);
    return std::pow(c * c, static_cast<double>(k));
}

}  // namespace eventclock::spin
