#pragma once

// The "a measurement has occurred" projector M on system (x) detector, its
// Heisenberg-picture expectation P_M(t), the time density m(t) = dP_M/dt, and
// the diagnostics showing why P_M(t) is not a probability distribution in t.

#include <cstddef>
#include <utility>
#include <vector>

#include "eventclock/hilbert.hpp"

namespace eventclock {

/// Correlated pairs (system basis index, detector basis index); the projector
/// is the sum of |s_i> (x) |d_i><d_i| (x) <s_i| over the pairs.
struct CorrelationSpec {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t system_dim = 0;
    std::size_t detector_dim = 0;

    /// Throws std::invalid_argument on an empty list, an out-of-range index,
    /// a duplicate pair, or a basis state shared by two different pairs.
    void validate() const;
    std::size_t dim() const noexcept { return system_dim * detector_dim; }
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    /// Equal lengths and strictly increasing times.
    void validate() const;
    std::size_t size() const noexcept { return times.size(); }
};

DenseOperator build_correlation_projector(const CorrelationSpec& spec);

/// P_M(t) = <psi0| U(0,t)^dagger M U(0,t) |psi0> at each t >= 0. Values
/// outside [-1e-12, 1+1e-12] raise NumericalError; the rest are clamped to [0,1].
TimeSeries pm_of_t(const CorrelationSpec& spec, const PiecewiseHamiltonian& h, const StateVector& psi0,
                   const std::vector<double>& times);

/// Finite-difference derivative of a uniformly sampled series: central in the
/// interior, second-order one-sided at the two ends. Values are not clamped
/// and go negative wherever the series decreases.
TimeSeries m_of_t(const TimeSeries& series);

struct CommutatorNorms {
    double same_time_norm;
    double two_time_norm;
};

/// Spectral norms of [M(t1), M(t1)] and [M(t1), M(t2)].
CommutatorNorms commutator_diagnostics(const CorrelationSpec& spec, const PiecewiseHamiltonian& h, double t1,
                                       double t2);

struct NormalizationReport {
    /// P_M(t) + P_{1-M}(t) at each grid time (each must be 1).
    std::vector<double> fixed_time_sum;
    /// Trapezoid integral of P_M over the grid; no unit-sum contract.
    double time_integral;

    double max_fixed_time_deviation() const;
};

NormalizationReport normalization_diagnostics(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                              const StateVector& psi0, const std::vector<double>& t_grid);

/// Trapezoid rule on a sampled series.
double trapezoid(const TimeSeries& series);

/// Throws std::invalid_argument unless the grid has >= 2 points with uniform
/// spacing (relative tolerance 1e-9).
double uniform_spacing(const std::vector<double>& times);

}  // namespace eventclock
