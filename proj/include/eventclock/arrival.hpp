#pragma once

// Free particle on a periodic 1-D grid (hbar = m = 1): exact spectral
// evolution, the probability P_+ of finding the particle at x > 0, the
// probability current at the origin, and a scan for quantum backflow.
//
// Grid conventions: x_j = x_min + j dx for j = 0..n-1, n a power of two, and
// the origin must be a grid point. Momentum-space coefficients follow the
// unnormalised DFT, psi_j = (1/n) sum_k F_k exp(i p_k (x_j - x_min)) with
// p_k = 2 pi k / (n dx) for k < n/2 and 2 pi (k - n) / (n dx) otherwise.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eventclock::arrival {

using cplx = std::complex<double>;

struct GridGeometry {
    std::size_t n = 8192;
    double x_min = -128.0;
    double dx = 1.0 / 32.0;

    void validate() const;
    std::size_t origin_index() const;
    double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx; }
    std::vector<double> momenta() const;
};

/// Grid wavefunction with sum |psi|^2 dx = 1 (within 1e-10).
class GridWavepacket {
public:
    GridWavepacket(GridGeometry geometry, std::vector<cplx> amplitudes);

    /// Packet from DFT coefficients, rescaled to unit norm.
    static GridWavepacket from_spectrum(const GridGeometry& geometry, std::span<const cplx> spectrum);

    const GridGeometry& geometry() const noexcept { return geometry_; }
    const std::vector<cplx>& amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    double norm() const;
    /// DFT coefficients F_k.
    std::vector<cplx> spectrum() const;

private:
    GridGeometry geometry_;
    std::vector<cplx> amplitudes_;
};

/// psi(x) proportional to exp(-(x - x0)^2 / (4 sigma^2) + i p0 x); sigma is the
/// standard deviation of |psi|^2.
GridWavepacket gaussian_packet(const GridGeometry& geometry, double x0, double sigma, double p0);

/// Exact free evolution: each momentum component picks up exp(-i p^2 t / 2).
GridWavepacket evolve_free(const GridWavepacket& w, double t);

/// Probability on x > 0; the grid point at x = 0 contributes half its cell.
double p_plus(const GridWavepacket& w);

/// J(0) = Im(conj(psi) dpsi/dx) at the origin, derivative taken spectrally.
/// With this sign, dP_+/dt = J(0, t).
double current_at_origin(const GridWavepacket& w);

/// Probability in the first and last `points` grid cells.
double boundary_mass(const GridWavepacket& w, std::size_t points = 5);

inline constexpr double kWraparoundLimit = 1e-8;

/// Throws NumericalError when boundary_mass(w) >= kWraparoundLimit.
void check_wraparound(const GridWavepacket& w);

/// Mean position sum x |psi|^2 dx.
double centroid(const GridWavepacket& w);

struct ArrivalSample {
    double t;
    double p_plus;
    double j_origin;
};

/// P_+ and J(0) along the free trajectory of w0; every sample passes the
/// wrap-around guard.
std::vector<ArrivalSample> arrival_trajectory(const GridWavepacket& w0, const std::vector<double>& times);

/// Trapezoid integral of P_+(t) over [0, t_max] with spacing at most dt
/// (the last interval is not shortened: spacing is t_max / ceil(t_max / dt)).
double time_integral_demo(const GridWavepacket& w0, double t_max, double dt);

/// Two positive-momentum Gaussian components in momentum space:
///   phi(p) = sqrt(1 - w) G(p; p1, s1) + sqrt(w) e^{i phi} G(p; p2, s2),
/// G a Gaussian of momentum standard deviation s normalised over the grid
/// momenta p > 0, and
/// phi(p) = 0 exactly for p <= 0.
struct BackflowCandidate {
    double p1 = 1.0;
    double p2 = 3.0;
    double s1 = 0.5;
    double s2 = 0.5;
    double w = 0.0;
    double phi = 0.0;

    void validate() const;
};

/// Both components are centred at launch_x when t = 0.
struct BackflowSettings {
    GridGeometry geometry{};
    double launch_x = -2.0;
};

/// DFT coefficients of the candidate (unit position-space norm).
std::vector<cplx> candidate_spectrum(const BackflowCandidate& c, const BackflowSettings& settings = {});
GridWavepacket candidate_packet(const BackflowCandidate& c, const BackflowSettings& settings = {});

struct BackflowResult {
    BackflowCandidate best;
    double t_star;
    double j_min;
};

/// Minimum of J(0, t) over candidates x times. Ties resolve to the smallest w,
/// then the smallest phi, then the smallest t.
BackflowResult backflow_scan(std::span<const BackflowCandidate> candidates, const std::vector<double>& t_grid,
                             const BackflowSettings& settings = {});

/// w in {w_min, w_min + w_step, ..., w_max} crossed with phi = j * 2 pi / phi_steps.
std::vector<BackflowCandidate> candidate_grid(const BackflowCandidate& base, double w_min, double w_max,
                                              double w_step, std::size_t phi_steps);

}  // namespace eventclock::arrival
