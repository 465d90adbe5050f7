#include "eventclock/repeated.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "eventclock/errors.hpp"
#include "eventclock/kernels.hpp"

namespace eventclock {
namespace {

constexpr double kExhaustedBranch = 1e-300;

double norm_sq(const Vector& v) { return kernels::norm_sq({v.data(), static_cast<std::size_t>(v.size())}); }

void require_dims(const CorrelationSpec& spec, const PiecewiseHamiltonian& h, const StateVector& psi0) {
    if (spec.dim() != h.dim() || psi0.dim() != h.dim())
        throw DimensionError("repeated measurement: spec, Hamiltonian and state dimensions differ");
}

double step_time(const DetectionSchedule& sched, std::size_t k) { return static_cast<double>(k) * sched.delta; }

DenseOperator step_propagator(const PiecewiseHamiltonian& h, const DetectionSchedule& sched, std::size_t k) {
    return propagator(h, step_time(sched, k - 1), step_time(sched, k));
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void DetectionSchedule::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("DetectionSchedule: delta must be > 0");
    if (k_max < 1) throw std::invalid_argument("DetectionSchedule: k_max must be >= 1");
    if (!(survival_floor >= 0.0 && survival_floor < 1.0))
        throw std::invalid_argument("DetectionSchedule: survival_floor must lie in [0, 1)");
}

double DetectionDistribution::telescoping_residual() const {
    double cumulative = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        cumulative += p_detect[i];
        worst = std::max(worst, std::abs(cumulative + survival[i] - 1.0));
    }
    return worst;
}

CollapseOutcome collapse_step(const StateVector& psi, const DenseOperator& m, const DenseOperator& u) {
    if (psi.dim() != m.dim() || m.dim() != u.dim()) throw DimensionError("collapse_step: dimension mismatch");
    if (!m.is_projector()) throw std::invalid_argument("collapse_step: measured operator is not a projector");
    if (!u.is_unitary()) throw std::invalid_argument("collapse_step: evolution is not unitary");

    const Vector evolved = u.apply(psi);
    const Vector detected = m.apply(evolved);
    const Vector null_branch = evolved - detected;

    CollapseOutcome out{norm_sq(detected), norm_sq(null_branch), std::nullopt};
    if (out.p_null >= kExhaustedBranch) out.null_state = StateVector::normalized(null_branch);
    return out;
}

DetectionDistribution detection_distribution(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                             const StateVector& psi0, const DetectionSchedule& sched) {
    require_dims(spec, h, psi0);
    sched.validate();
    const DenseOperator m = build_correlation_projector(spec);

    DetectionDistribution dist;
    dist.times.reserve(sched.k_max);
    dist.p_detect.reserve(sched.k_max);
    dist.survival.reserve(sched.k_max);

    StateVector state = psi0;
    double survival = 1.0;
    bool stopped = false;
    for (std::size_t k = 1; k <= sched.k_max; ++k) {
        dist.times.push_back(step_time(sched, k));
        if (stopped) {
            dist.p_detect.push_back(0.0);
            dist.survival.push_back(survival);
            continue;
        }
        const CollapseOutcome step = collapse_step(state, m, step_propagator(h, sched, k));
        dist.p_detect.push_back(survival * step.p_detect);
        survival *= step.p_null;
        dist.survival.push_back(survival);
        dist.steps_computed = k;

        if (!step.null_state || survival < sched.survival_floor) {
            stopped = true;
            dist.truncated = k < sched.k_max;
        } else {
            state = *step.null_state;
        }
    }
    return dist;
}

DetectionDistribution sample_detection_distribution(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                                    const StateVector& psi0, const DetectionSchedule& sched,
                                                    std::size_t trajectories, std::uint64_t seed) {
    require_dims(spec, h, psi0);
    sched.validate();
    if (trajectories == 0) throw std::invalid_argument("sample_detection_distribution: need at least one trajectory");

    const DenseOperator m = build_correlation_projector(spec);
    std::vector<DenseOperator> steps;
    steps.reserve(sched.k_max);
    for (std::size_t k = 1; k <= sched.k_max; ++k) steps.push_back(step_propagator(h, sched, k));

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> first_detection(sched.k_max, 0);
    for (std::size_t n = 0; n < trajectories; ++n) {
        Vector state = psi0.amplitudes();
        for (std::size_t k = 0; k < sched.k_max; ++k) {
            const Vector evolved = steps[k].apply(state);
            const Vector detected = m.apply(evolved);
            const double p = norm_sq(detected) / norm_sq(evolved);
            if (uniform01(rng) < p) {
                ++first_detection[k];
                break;
            }
            state = evolved - detected;
            const double null_norm = std::sqrt(norm_sq(state));
            if (null_norm == 0.0) break;
            state /= null_norm;
        }
    }

    DetectionDistribution dist;
    const double total = static_cast<double>(trajectories);
    std::size_t cumulative = 0;
    for (std::size_t k = 0; k < sched.k_max; ++k) {
        cumulative += first_detection[k];
        dist.times.push_back(step_time(sched, k + 1));
        dist.p_detect.push_back(static_cast<double>(first_detection[k]) / total);
        dist.survival.push_back(static_cast<double>(trajectories - cumulative) / total);
    }
    dist.steps_computed = sched.k_max;
    return dist;
}

ChainOperators build_chain_operators(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                     const DetectionSchedule& sched, std::size_t k) {
    if (spec.dim() != h.dim()) throw DimensionError("build_chain_operators: dimension mismatch");
    sched.validate();
    if (k < 1 || k > sched.k_max) throw std::invalid_argument("build_chain_operators: k must lie in [1, k_max]");

    const DenseOperator m = build_correlation_projector(spec);
    const auto n = static_cast<Eigen::Index>(m.dim());
    const Matrix null_proj = Matrix::Identity(n, n) - m.entries();

    // X = U_k (1-M) U_{k-1} ... (1-M) U_1
    Matrix x = step_propagator(h, sched, 1).entries();
    for (std::size_t j = 2; j <= k; ++j) x = step_propagator(h, sched, j).entries() * (null_proj * x);

    const Matrix x_adj = x.adjoint();
    return {DenseOperator(Matrix(x_adj * m.entries() * x)), DenseOperator(Matrix(x_adj * null_proj * x))};
}

ChainExpectations operator_chain(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                 const StateVector& psi0, const DetectionSchedule& sched, std::size_t k) {
    require_dims(spec, h, psi0);
    const ChainOperators ops = build_chain_operators(spec, h, sched, k);
    return {expectation(ops.a_k, psi0), expectation(ops.b_k, psi0)};
}

double energy_variance(const PiecewiseHamiltonian& h, const StateVector& psi, double t) {
    if (psi.dim() != h.dim()) throw DimensionError("energy_variance: dimension mismatch");
    if (!h.inside_segment(t)) return 0.0;

    const DenseOperator gen = h.generator_at(t);
    const Vector h_psi = gen.apply(psi);
    const double mean = expectation(gen, psi);
    const double second = norm_sq(h_psi);
    return std::sqrt(std::max(0.0, second - mean * mean));
}

std::vector<ZenoSweepRow> zeno_sweep(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                     const StateVector& psi0, double tau, const std::vector<std::size_t>& k_values) {
    require_dims(spec, h, psi0);
    if (!(tau > 0.0)) throw std::invalid_argument("zeno_sweep: tau must be > 0");
    for (const std::size_t k : k_values)
        if (k < 1) throw std::invalid_argument("zeno_sweep: every k must be >= 1");

    const double spread = energy_variance(h, psi0, 0.0);

    std::vector<std::future<ZenoSweepRow>> pending;
    pending.reserve(k_values.size());
    for (const std::size_t k : k_values) {
        pending.push_back(std::async(std::launch::async, [&, k] {
            const DetectionSchedule sched{tau / static_cast<double>(k), k, 1e-12};
            const DetectionDistribution dist = detection_distribution(spec, h, psi0, sched);
            return ZenoSweepRow{k, sched.delta, dist.survival.back(), spread, sched.delta * spread};
        }));
    }
    std::vector<ZenoSweepRow> rows;
    rows.reserve(pending.size());
    for (auto& f : pending) rows.push_back(f.get());
    return rows;
}

ResolvabilityReport resolvability_report(const std::vector<ZenoSweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("resolvability_report: no rows");
    const double spread = rows.front().delta_e;
    for (const auto& r : rows) {
        if (std::abs(r.delta_e - spread) > 1e-12 * std::max(1.0, std::abs(spread)))
            throw std::invalid_argument("resolvability_report: rows do not share one energy spread");
    }

    ResolvabilityReport report;
    report.delta_threshold = spread > 0.0 ? 1.0 / spread : std::numeric_limits<double>::infinity();
    report.regimes.reserve(rows.size());
    for (const auto& r : rows)
        report.regimes.push_back(r.delta * spread < 1.0 ? Regime::frozen : Regime::resolvable);
    return report;
}

}  // namespace eventclock
