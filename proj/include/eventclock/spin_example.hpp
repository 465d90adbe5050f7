#pragma once

// Two-spin detector model. The system spin starts in a|up> + b|down>, the
// detector spin in |up'>, and they couple through
//   H = g (1 - sigma_z) (x) sigma_x'     on [0, T),  zero afterwards,
// written in the library's system-first Kronecker ordering. Only the
// |down> branch of the system rotates the detector, at angular rate 2g.
// The correlation projector pairs (up, up') and (down, down').

#include <cstddef>

#include "eventclock/detector.hpp"
#include "eventclock/hilbert.hpp"

namespace eventclock::spin {

inline constexpr std::size_t kUp = 0;
inline constexpr std::size_t kDown = 1;

enum class GConvention {
    /// g = pi / T: the detector branch completes a full 2 pi rotation on
    /// [0, T] and is fully correlated at T / 4.
    paper,
    /// g = pi / (4 T): rotation angle pi / 2 is reached exactly at T.
    flip_at_T,
};

struct SpinExampleConfig {
    Complex a{0.0, 0.0};
    Complex b{1.0, 0.0};
    double T = 1.0;
    GConvention g_convention = GConvention::paper;
    double delta = 0.125;

    void validate() const;
};

/// Coupling constant g for the configured convention.
double coupling(const SpinExampleConfig& config);

struct SpinModel {
    StateVector psi0;
    PiecewiseHamiltonian h;
    CorrelationSpec spec;
};

SpinModel build(const SpinExampleConfig& config);

/// Closed-form survival cos^{2k}(2 g delta); only valid for a = 0.
double analytic_survival(const SpinExampleConfig& config, std::size_t k);

}  // namespace eventclock::spin
