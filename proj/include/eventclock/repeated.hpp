#pragma once

// Repeated projective measurement of M at t_k = k * delta.
//
// Between measurements the state evolves with the propagator of the model over
// [t_{k-1}, t_k]; a null outcome projects with (1 - M) and renormalises. The
// full outcome distribution is tracked deterministically: p_detect[k] is the
// probability that the first detection happens at t_k and survival[k] that no
// detection has happened up to and including t_k, so that
//   sum_{j <= k} p_detect[j] + survival[k] = 1
// at every step.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eventclock/detector.hpp"
#include "eventclock/hilbert.hpp"

namespace eventclock {

struct DetectionSchedule {
    double delta = 0.0;
    std::size_t k_max = 1;
    double survival_floor = 1e-12;

    void validate() const;
};

/// Step arrays are indexed from 0 for t_1 = delta, so entry i refers to k = i + 1.
struct DetectionDistribution {
    std::vector<double> times;
    std::vector<double> p_detect;
    std::vector<double> survival;
    /// Survival dropped below the schedule's floor before k_max. Later steps
    /// are padded with p_detect = 0 and the frozen survival value.
    bool truncated = false;
    std::size_t steps_computed = 0;

    std::size_t size() const noexcept { return times.size(); }
    /// max_k |sum_{j<=k} p_detect[j] + survival[k] - 1|
    double telescoping_residual() const;
};

struct CollapseOutcome {
    double p_detect;
    double p_null;
    /// (1 - M) U psi / ||.||; absent when the null branch has probability < 1e-300.
    std::optional<StateVector> null_state;
};

CollapseOutcome collapse_step(const StateVector& psi, const DenseOperator& m, const DenseOperator& u);

DetectionDistribution detection_distribution(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                             const StateVector& psi0, const DetectionSchedule& sched);

/// Monte Carlo version of the same protocol: each trajectory draws a detection
/// outcome per step. Returns empirical frequencies in the layout of
/// DetectionDistribution. Deterministic for a given seed.
DetectionDistribution sample_detection_distribution(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                                    const StateVector& psi0, const DetectionSchedule& sched,
                                                    std::size_t trajectories, std::uint64_t seed);

struct ChainOperators {
    DenseOperator a_k;
    DenseOperator b_k;
};

/// Explicit products
///   A_k = U_1^+ (1-M) ... U_{k-1}^+ (1-M) U_k^+ M U_k (1-M) U_{k-1} ... (1-M) U_1
///   B_k = same with the central M replaced by (1-M)
/// where U_j is the propagator over [t_{j-1}, t_j].
ChainOperators build_chain_operators(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                     const DetectionSchedule& sched, std::size_t k);

struct ChainExpectations {
    double a_k;
    double b_k;
};

ChainExpectations operator_chain(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                 const StateVector& psi0, const DetectionSchedule& sched, std::size_t k);

/// sqrt(<H^2> - <H>^2) with H the generator in force at t (0 outside segments).
double energy_variance(const PiecewiseHamiltonian& h, const StateVector& psi, double t);

struct ZenoSweepRow {
    std::size_t k;
    double delta;
    double survival_at_tau;
    double delta_e;
    double resolvability;
};

/// For each k: delta = tau / k, run the protocol for k steps and report the
/// survival at t_k = tau together with dE (in psi0 at t = 0) and delta * dE.
/// Rows are evaluated concurrently; results do not depend on scheduling.
std::vector<ZenoSweepRow> zeno_sweep(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                     const StateVector& psi0, double tau, const std::vector<std::size_t>& k_values);

enum class Regime { frozen, resolvable };

struct ResolvabilityReport {
    /// 1 / dE; +infinity when dE = 0.
    double delta_threshold;
    std::vector<Regime> regimes;
};

ResolvabilityReport resolvability_report(const std::vector<ZenoSweepRow>& rows);

}  // namespace eventclock
