#include "eventclock/detector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eventclock/errors.hpp"

namespace eventclock {
namespace {

constexpr double kRangeSlack = 1e-12;

void require_dims(const CorrelationSpec& spec, const PiecewiseHamiltonian& h) {
    if (spec.dim() != h.dim()) throw DimensionError("correlation spec and Hamiltonian dimensions differ");
}

}  // namespace

void CorrelationSpec::validate() const {
    if (system_dim == 0 || detector_dim == 0)
        throw std::invalid_argument("CorrelationSpec: dimensions must be positive");
    if (pairs.empty()) throw std::invalid_argument("CorrelationSpec: pair list is empty");

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::set<std::size_t> systems, detectors;
    for (const auto& [s, d] : pairs) {
        if (s >= system_dim || d >= detector_dim) {
            std::ostringstream msg;
            msg << "CorrelationSpec: pair (" << s << ", " << d << ") out of range for " << system_dim << "x"
                << detector_dim;
            throw std::invalid_argument(msg.str());
        }
        if (!seen.insert({s, d}).second) throw std::invalid_argument("CorrelationSpec: duplicate pair");
        // Distinct outcomes need orthogonal detector states and distinct system eigenstates.
        if (!detectors.insert(d).second)
            throw std::invalid_argument("CorrelationSpec: detector state shared by two pairs");
        if (!systems.insert(s).second)
            throw std::invalid_argument("CorrelationSpec: system state shared by two pairs");
    }
}

void TimeSeries::validate() const {
    if (times.size() != values.size()) throw std::invalid_argument("TimeSeries: length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("TimeSeries: times not strictly increasing");
}

double uniform_spacing(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("uniform_spacing: need at least two samples");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw std::invalid_argument("uniform_spacing: times not increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("uniform_spacing: grid spacing is not uniform");
    }
    return dt;
}

DenseOperator build_correlation_projector(const CorrelationSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.dim());
    Matrix m = Matrix::Zero(n, n);
    for (const auto& [s, d] : spec.pairs) {
        const auto idx = static_cast<Eigen::Index>(s * spec.detector_dim + d);
        m(idx, idx) = 1.0;
    }
    DenseOperator out(std::move(m));
    if (!out.is_projector()) throw CertificationError("build_correlation_projector: result is not a projector");
    return out;
}

TimeSeries pm_of_t(const CorrelationSpec& spec, const PiecewiseHamiltonian& h, const StateVector& psi0,
                   const std::vector<double>& times) {
    require_dims(spec, h);
    if (psi0.dim() != spec.dim()) throw DimensionError("pm_of_t: state dimension mismatch");
    const DenseOperator m = build_correlation_projector(spec);

    TimeSeries out;
    out.times = times;
    out.values.reserve(times.size());
    for (const double t : times) {
        if (t < 0.0) throw std::invalid_argument("pm_of_t: times must be non-negative");
        const double p = expectation(heisenberg(m, propagator(h, 0.0, t)), psi0);
        if (p < -kRangeSlack || p > 1.0 + kRangeSlack) {
            std::ostringstream msg;
            msg << "pm_of_t: P_M(" << t << ") = " << p << " outside [0,1]";
            throw NumericalError(msg.str());
        }
        out.values.push_back(std::clamp(p, 0.0, 1.0));
    }
    out.validate();
    return out;
}

TimeSeries m_of_t(const TimeSeries& series) {
    series.validate();
    const std::size_t n = series.size();
    if (n < 3) throw std::invalid_argument("m_of_t: need at least three samples");
    const double dt = uniform_spacing(series.times);
    const auto& f = series.values;

    TimeSeries out;
    out.times = series.times;
    out.values.resize(n);
    out.values[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < n; ++i) out.values[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    out.values[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return out;
}

CommutatorNorms commutator_diagnostics(const CorrelationSpec& spec, const PiecewiseHamiltonian& h, double t1,
                                       double t2) {
    require_dims(spec, h);
    if (t1 == t2) throw std::invalid_argument("commutator_diagnostics: requires t1 != t2");
    if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("commutator_diagnostics: times must be non-negative");

    const DenseOperator m = build_correlation_projector(spec);
    const Matrix m1 = heisenberg(m, propagator(h, 0.0, t1)).entries();
    const Matrix m2 = heisenberg(m, propagator(h, 0.0, t2)).entries();
    return {spectral_norm(m1 * m1 - m1 * m1), spectral_norm(m1 * m2 - m2 * m1)};
}

double NormalizationReport::max_fixed_time_deviation() const {
    double worst = 0.0;
    for (const double s : fixed_time_sum) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

double trapezoid(const TimeSeries& series) {
    series.validate();
    double acc = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i)
        acc += 0.5 * (series.times[i] - series.times[i - 1]) * (series.values[i] + series.values[i - 1]);
    return acc;
}

NormalizationReport normalization_diagnostics(const CorrelationSpec& spec, const PiecewiseHamiltonian& h,
                                              const StateVector& psi0, const std::vector<double>& t_grid) {
    require_dims(spec, h);
    uniform_spacing(t_grid);
    const DenseOperator m = build_correlation_projector(spec);
    const DenseOperator complement = DenseOperator::identity(m.dim()) - m;

    NormalizationReport report;
    report.fixed_time_sum.reserve(t_grid.size());
    TimeSeries pm;
    pm.times = t_grid;
    for (const double t : t_grid) {
        if (t < 0.0) throw std::invalid_argument("normalization_diagnostics: times must be non-negative");
        const DenseOperator u = propagator(h, 0.0, t);
        const double p_m = expectation(heisenberg(m, u), psi0);
        const double p_not = expectation(heisenberg(complement, u), psi0);
        report.fixed_time_sum.push_back(p_m + p_not);
        pm.values.push_back(std::clamp(p_m, 0.0, 1.0));
    }
    report.time_integral = trapezoid(pm);
    return report;
}

}  // namespace eventclock
