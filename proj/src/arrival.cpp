#include "eventclock/arrival.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <limits>
#include <tuple>

#include "eventclock/errors.hpp"
#include "eventclock/fft.hpp"
#include "eventclock/kernels.hpp"

namespace eventclock::arrival {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_sq(std::span<const cplx> v) { return kernels::norm_sq(v); }

void scale(std::vector<cplx>& v, double s) {
    for (auto& z : v) z *= s;
}

// exp(-i p^2 t / 2) for every momentum.
std::vector<cplx> free_phases(const std::vector<double>& momenta, double t) {
    std::vector<cplx> out(momenta.size());
    for (std::size_t k = 0; k < momenta.size(); ++k) out[k] = std::polar(1.0, -0.5 * momenta[k] * momenta[k] * t);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Geometry and packets

void GridGeometry::validate() const {
    if (n < 4 || !std::has_single_bit(n)) throw std::invalid_argument("GridGeometry: n must be a power of two >= 4");
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min))
        throw std::invalid_argument("GridGeometry: dx must be positive and finite");
    origin_index();
}

std::size_t GridGeometry::origin_index() const {
    const double pos = -x_min / dx;
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) > 1e-9 || rounded < 0.0 || rounded >= static_cast<double>(n))
        throw std::invalid_argument("GridGeometry: x = 0 is not a grid point");
    return static_cast<std::size_t>(rounded);
}

std::vector<double> GridGeometry::momenta() const {
    std::vector<double> p(n);
    const double dp = kTwoPi / (static_cast<double>(n) * dx);
    for (std::size_t k = 0; k < n; ++k) {
        const auto signed_k = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        p[k] = signed_k * dp;
    }
    return p;
}

GridWavepacket::GridWavepacket(GridGeometry geometry, std::vector<cplx> amplitudes)
    : geometry_(geometry), amplitudes_(std::move(amplitudes)) {
    geometry_.validate();
    if (amplitudes_.size() != geometry_.n) throw std::invalid_argument("GridWavepacket: amplitude count != n");
    const double nrm = norm();
    if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "GridWavepacket: norm " << nrm << " differs from 1 by more than 1e-10";
        throw std::invalid_argument(msg.str());
    }
}

double GridWavepacket::norm() const { return norm_sq(amplitudes_) * geometry_.dx; }

std::vector<cplx> GridWavepacket::spectrum() const { return Fft(geometry_.n).forward(amplitudes_); }

GridWavepacket GridWavepacket::from_spectrum(const GridGeometry& geometry, std::span<const cplx> spectrum) {
    geometry.validate();
    if (spectrum.size() != geometry.n) throw std::invalid_argument("from_spectrum: coefficient count != n");
    std::vector<cplx> psi = Fft(geometry.n).backward(spectrum);
    const double total = norm_sq(psi) * geometry.dx;
    if (!(total > 0.0)) throw std::invalid_argument("from_spectrum: zero spectrum");
    scale(psi, 1.0 / std::sqrt(total));
    return GridWavepacket(geometry, std::move(psi));
}

GridWavepacket gaussian_packet(const GridGeometry& geometry, double x0, double sigma, double p0) {
    geometry.validate();
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be > 0");
    std::vector<cplx> psi(geometry.n);
    for (std::size_t j = 0; j < geometry.n; ++j) {
        const double x = geometry.x(j);
        const double u = (x - x0) / (2.0 * sigma);
        psi[j] = std::polar(std::exp(-u * u), p0 * x);
    }
    scale(psi, 1.0 / std::sqrt(norm_sq(psi) * geometry.dx));
    return GridWavepacket(geometry, std::move(psi));
}

GridWavepacket evolve_free(const GridWavepacket& w, double t) {
    if (t == 0.0) return w;
    const GridGeometry& g = w.geometry();
    const std::vector<double> p = g.momenta();
    std::vector<std::complex<long double>> phases(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
        const cplx z = std::polar(1.0, -0.5 * p[k] * p[k] * t);
        const long double re = z.real(), im = z.imag();
        const long double inv = 1.0L / std::sqrt(re * re + im * im);
        phases[k] = {re * inv, im * inv};
    }
    std::vector<cplx> psi(g.n);
    spectral_multiply_extended(w.amplitudes(), phases, psi);
    return GridWavepacket(g, std::move(psi));
}

double p_plus(const GridWavepacket& w) {
    const auto& psi = w.amplitudes();
    const std::size_t j0 = w.geometry().origin_index();
    const std::span<const cplx> right(psi.data() + j0 + 1, psi.size() - j0 - 1);
    return w.geometry().dx * (norm_sq(right) + 0.5 * std::norm(psi[j0]));
}

double current_at_origin(const GridWavepacket& w) {
    const GridGeometry& g = w.geometry();
    const std::size_t n = g.n;
    const std::size_t j0 = g.origin_index();
    const std::vector<cplx> spec = w.spectrum();

    // d/dx -> i p; the Nyquist mode has no well-defined derivative and is dropped.
    std::vector<double> weights = g.momenta();
    weights[n / 2] = 0.0;
    std::vector<cplx> basis(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = (j0 * k) % n;
        basis[k] = std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(n));
    }
    const kernels::WeightedDot sums = kernels::dot_weighted(spec, basis, weights);
    const cplx dpsi = cplx(0.0, 1.0) * sums.weighted / static_cast<double>(n);
    return std::imag(std::conj(w.amplitudes()[j0]) * dpsi);
}

double boundary_mass(const GridWavepacket& w, std::size_t points) {
    const auto& psi = w.amplitudes();
    points = std::min(points, psi.size() / 2);
    const std::span<const cplx> head(psi.data(), points);
    const std::span<const cplx> tail(psi.data() + psi.size() - points, points);
    return w.geometry().dx * (norm_sq(head) + norm_sq(tail));
}

void check_wraparound(const GridWavepacket& w) {
    const double mass = boundary_mass(w);
    if (!(mass < kWraparoundLimit)) {
        std::ostringstream msg;
        msg << "wrap-around guard: probability " << mass << " within 5 points of the periodic boundary";
        throw NumericalError(msg.str());
    }
}

double centroid(const GridWavepacket& w) {
    const auto& psi = w.amplitudes();
    double acc = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) acc += w.geometry().x(j) * std::norm(psi[j]);
    return acc * w.geometry().dx;
}

std::vector<ArrivalSample> arrival_trajectory(const GridWavepacket& w0, const std::vector<double>& times) {
    std::vector<ArrivalSample> out;
    out.reserve(times.size());
    for (const double t : times) {
        const GridWavepacket w = evolve_free(w0, t);
        check_wraparound(w);
        out.push_back({t, p_plus(w), current_at_origin(w)});
    }
    return out;
}

double time_integral_demo(const GridWavepacket& w0, double t_max, double dt) {
    if (!(t_max >= 0.0)) throw std::invalid_argument("time_integral_demo: t_max must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("time_integral_demo: dt must be > 0");
    if (t_max == 0.0) return 0.0;

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    const double h = t_max / static_cast<double>(steps);

    const GridGeometry& g = w0.geometry();
    const Fft fft(g.n);
    const std::vector<cplx> spec0 = fft.forward(w0.amplitudes());
    const std::vector<double> momenta = g.momenta();

    double acc = 0.0;
    double previous = 0.0;
    std::vector<cplx> spec(g.n);
    std::vector<cplx> psi(g.n);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * h;
        spec = spec0;
        kernels::mul_inplace(spec, free_phases(momenta, t));
        fft.backward(spec, psi);
        scale(psi, 1.0 / static_cast<double>(g.n));
        const GridWavepacket w(g, psi);
        check_wraparound(w);
        const double current = p_plus(w);
        if (i > 0) acc += 0.5 * h * (previous + current);
        previous = current;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Backflow

void BackflowCandidate::validate() const {
    if (!(p1 > 0.0 && p2 > 0.0)) throw std::invalid_argument("BackflowCandidate: momenta must be > 0");
    if (!(s1 > 0.0 && s2 > 0.0)) throw std::invalid_argument("BackflowCandidate: widths must be > 0");
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("BackflowCandidate: w must lie in [0, 1]");
    if (!(phi >= 0.0 && phi < kTwoPi)) throw std::invalid_argument("BackflowCandidate: phi must lie in [0, 2 pi)");
}

std::vector<cplx> candidate_spectrum(const BackflowCandidate& c, const BackflowSettings& settings) {
    c.validate();
    const GridGeometry& g = settings.geometry;
    g.validate();
    const std::vector<double> p = g.momenta();

    auto gaussian = [&p](double centre, double width) {
        std::vector<double> out(p.size(), 0.0);
        double total = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!(p[k] > 0.0)) continue;
            const double u = (p[k] - centre) / (2.0 * width);
            out[k] = std::exp(-u * u);
            total += out[k] * out[k];
        }
        for (auto& v : out) v /= std::sqrt(total);
        return out;
    };
    const std::vector<double> g1 = gaussian(c.p1, c.s1);
    const std::vector<double> g2 = gaussian(c.p2, c.s2);
    const cplx mix = std::sqrt(c.w) * std::polar(1.0, c.phi);
    const double keep = std::sqrt(1.0 - c.w);

    std::vector<cplx> spec(g.n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < g.n; ++k) {
        if (!(p[k] > 0.0)) continue;
        // Centre the envelope at launch_x: F_k carries exp(i p (x_min - launch_x)).
        spec[k] = (keep * g1[k] + mix * g2[k]) * std::polar(1.0, p[k] * (g.x_min - settings.launch_x));
    }
    const double total = norm_sq(spec) * g.dx / static_cast<double>(g.n);
    if (!(total > 0.0)) throw std::invalid_argument("candidate_spectrum: no support at p > 0 on this grid");
    for (auto& z : spec) z /= std::sqrt(total);
    return spec;
}

GridWavepacket candidate_packet(const BackflowCandidate& c, const BackflowSettings& settings) {
    return GridWavepacket::from_spectrum(settings.geometry, candidate_spectrum(c, settings));
}

BackflowResult backflow_scan(std::span<const BackflowCandidate> candidates, const std::vector<double>& t_grid,
                             const BackflowSettings& settings) {
    if (candidates.empty() || t_grid.empty()) throw std::invalid_argument("backflow_scan: empty scan grid");
    const GridGeometry& g = settings.geometry;
    g.validate();
    const std::vector<double> p = g.momenta();

    // Only p > 0 carries amplitude; the rest is exactly zero by construction.
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < g.n; ++k)
        if (p[k] > 0.0) support.push_back(k);
    const std::size_t m = support.size();

    std::vector<double> p_support(m);
    for (std::size_t i = 0; i < m; ++i) p_support[i] = p[support[i]];

    // Origin-referenced coefficients: psi(0, t) = (1/n) sum_k G_k exp(-i p_k^2 t / 2).
    std::vector<std::vector<cplx>> origin_coeffs;
    origin_coeffs.reserve(candidates.size());
    for (const auto& c : candidates) {
        const std::vector<cplx> spec = candidate_spectrum(c, settings);
        std::vector<cplx> coeffs(m);
        for (std::size_t i = 0; i < m; ++i)
            coeffs[i] = spec[support[i]] * std::polar(1.0, -p_support[i] * g.x_min);
        origin_coeffs.push_back(std::move(coeffs));
    }

    const double inv_n = 1.0 / static_cast<double>(g.n);
    auto key = [&](std::size_t ci, std::size_t ti) {
        return std::make_tuple(candidates[ci].w, candidates[ci].phi, t_grid[ti]);
    };

    BackflowResult best{candidates.front(), t_grid.front(), std::numeric_limits<double>::infinity()};
    std::size_t best_c = 0, best_t = 0;
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const std::vector<cplx> phases = free_phases(p_support, t_grid[ti]);
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            const kernels::WeightedDot s = kernels::dot_weighted(origin_coeffs[ci], phases, p_support);
            const cplx psi0 = s.plain * inv_n;
            const cplx dpsi0 = cplx(0.0, 1.0) * s.weighted * inv_n;
            const double j = std::imag(std::conj(psi0) * dpsi0);
            if (j < best.j_min || (j == best.j_min && key(ci, ti) < key(best_c, best_t))) {
                best = {candidates[ci], t_grid[ti], j};
                best_c = ci;
                best_t = ti;
            }
        }
    }
    return best;
}

std::vector<BackflowCandidate> candidate_grid(const BackflowCandidate& base, double w_min, double w_max,
                                              double w_step, std::size_t phi_steps) {
    if (!(w_step > 0.0) || phi_steps == 0 || w_max < w_min)
        throw std::invalid_argument("candidate_grid: empty or malformed grid");
    std::vector<BackflowCandidate> out;
    const auto w_count = static_cast<std::size_t>(std::floor((w_max - w_min) / w_step + 1e-9)) + 1;
    for (std::size_t i = 0; i < w_count; ++i) {
        for (std::size_t j = 0; j < phi_steps; ++j) {
            BackflowCandidate c = base;
            c.w = w_min + static_cast<double>(i) * w_step;
            c.phi = kTwoPi * static_cast<double>(j) / static_cast<double>(phi_steps);
            c.validate();
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace eventclock::arrival
