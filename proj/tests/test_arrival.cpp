#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "eventclock/arrival.hpp"
#include "eventclock/errors.hpp"
#include "eventclock/fft.hpp"

using namespace eventclock;
using namespace eventclock::arrival;
using std::numbers::pi;

namespace {

// Standard run: x0 = -20, sigma = 2, p0 = 1 on the default grid.
GridWavepacket standard_packet() { return gaussian_packet(GridGeometry{}, -20.0, 2.0, 1.0); }

// P_+ for a free Gaussian in the continuum.
double p_plus_exact(double t) {
    const double mu = -20.0 + t;
    const double st = std::sqrt(4.0 + std::pow(t / 4.0, 2));
    return 0.5 * (1.0 + std::erf(mu / (st * std::sqrt(2.0))));
}

GridGeometry small_grid() { return {256, -16.0, 0.125}; }

}  // namespace

TEST(Fft, MatchesNaiveDftAndRoundTrips) {
    const std::size_t n = 16;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d;
    std::vector<cplx> x(n);
    for (auto& z : x) z = {d(rng), d(rng)};
    const Fft fft(n);
    const auto f = fft.forward(x);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * std::polar(1.0, -2 * pi * double(j * k) / double(n));
        EXPECT_NEAR(std::abs(f[k] - acc), 0.0, 1e-12);
    }
    const auto back = fft.backward(f);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(back[j] / double(n) - x[j]), 0.0, 1e-14);
}

TEST(Fft, RejectsInPlaceAndWrongSizes) {
    const Fft fft(8);
    std::vector<cplx> a(8), b(4);
    EXPECT_THROW(fft.forward(a, a), std::invalid_argument);
    EXPECT_THROW(fft.forward(a, b), std::invalid_argument);
    EXPECT_THROW(Fft(0), std::invalid_argument);
}

TEST(Fft, ExtendedSpectralMultiplyMatchesDoublePath) {
    const std::size_t n = 64;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> d;
    std::vector<cplx> x(n), m(n);
    std::vector<std::complex<long double>> ml(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = {d(rng), d(rng)};
        m[k] = {d(rng), d(rng)};
        ml[k] = {m[k].real(), m[k].imag()};
    }
    const Fft fft(n);
    auto spec = fft.forward(x);
    for (std::size_t k = 0; k < n; ++k) spec[k] *= m[k];
    const auto expected = fft.backward(spec);
    std::vector<cplx> out(n);
    spectral_multiply_extended(x, ml, out);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(out[j] - expected[j] / double(n)), 0.0, 1e-13);
    std::vector<cplx> short_out(n - 1);
    EXPECT_THROW(spectral_multiply_extended(x, ml, short_out), std::invalid_argument);
}

TEST(Geometry, Validation) {
    EXPECT_NO_THROW(GridGeometry{}.validate());
    EXPECT_EQ(GridGeometry{}.origin_index(), 4096u);
    EXPECT_THROW((GridGeometry{1000, -16.0, 0.125}.validate()), std::invalid_argument);
    EXPECT_THROW((GridGeometry{256, -16.05, 0.125}.validate()), std::invalid_argument);
    EXPECT_THROW((GridGeometry{256, 1.0, 0.125}.validate()), std::invalid_argument);
    const auto p = small_grid().momenta();
    EXPECT_DOUBLE_EQ(p[1], 2 * pi / 32.0);
    EXPECT_DOUBLE_EQ(p[255], -2 * pi / 32.0);
    EXPECT_DOUBLE_EQ(p[128], -pi / 0.125);
}

TEST(Wavepacket, GaussianMomentsAndNorm) {
    const GridWavepacket w = gaussian_packet(GridGeometry{}, -20.0, 2.0, 1.0);
    EXPECT_NEAR(w.norm(), 1.0, 1e-13);
    EXPECT_NEAR(centroid(w), -20.0, 1e-10);
    EXPECT_THROW(GridWavepacket(small_grid(), std::vector<cplx>(256, 1.0)), std::invalid_argument);
}

TEST(Wavepacket, SpectrumRoundTrip) {
    const GridWavepacket w = gaussian_packet(small_grid(), -2.0, 1.0, 0.5);
    const GridWavepacket back = GridWavepacket::from_spectrum(small_grid(), w.spectrum());
    for (std::size_t j = 0; j < w.size(); ++j) EXPECT_NEAR(std::abs(back.amplitudes()[j] - w.amplitudes()[j]), 0.0, 1e-14);
}

TEST(FreeEvolution, CentroidMovesWithGroupVelocity) {
    const GridWavepacket w0 = standard_packet();
    for (double t : {5.0, 20.0, 40.0}) {
        const GridWavepacket w = evolve_free(w0, t);
        EXPECT_NEAR(centroid(w), -20.0 + t, 1e-8) << t;
        EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    }
}

TEST(FreeEvolution, CompositionOfSteps) {
    const GridWavepacket w0 = standard_packet();
    const GridWavepacket a = evolve_free(evolve_free(w0, 3.0), 4.5);
    const GridWavepacket b = evolve_free(w0, 7.5);
    for (std::size_t j = 0; j < a.size(); j += 17) EXPECT_NEAR(std::abs(a.amplitudes()[j] - b.amplitudes()[j]), 0.0, 1e-12);
}

TEST(FreeEvolution, NormDriftOverTenThousandSteps) {
    GridWavepacket w = gaussian_packet({1024, -32.0, 1.0 / 16.0}, -10.0, 1.0, 1.0);
    for (int i = 0; i < 10000; ++i) w = evolve_free(w, 1e-3);
    EXPECT_LE(std::abs(w.norm() - 1.0), 1e-12);
    EXPECT_NEAR(centroid(w), 0.0, 1e-8);
}

TEST(PPlus, AgreesWithContinuumGaussian) {
    const GridWavepacket w0 = standard_packet();
    for (double t : {0.0, 10.0, 20.0, 30.0, 45.0, 60.0})
        EXPECT_NEAR(p_plus(evolve_free(w0, t)), p_plus_exact(t), 1e-6) << t;
    EXPECT_NEAR(p_plus(evolve_free(w0, 30.0)), 0.901181529, 1e-6);
    EXPECT_NEAR(p_plus(evolve_free(w0, 20.0)), 0.5, 1e-12);
}

TEST(PPlus, OriginCellCountsHalf) {
    const GridGeometry g = small_grid();
    std::vector<cplx> psi(g.n, 0.0);
    psi[g.origin_index()] = 1.0 / std::sqrt(g.dx);
    EXPECT_NEAR(p_plus(GridWavepacket(g, psi)), 0.5, 1e-15);
}

TEST(Current, ContinuityAlongStandardTrajectory) {
    const GridWavepacket w0 = standard_packet();
    const double dt = 1e-3;
    double worst = 0.0;
    for (double t = 0.0; t < 60.0; t += 0.5) {
        const double dp = (p_plus(evolve_free(w0, t + dt)) - p_plus(evolve_free(w0, t))) / dt;
        worst = std::max(worst, std::abs(dp - current_at_origin(evolve_free(w0, t + 0.5 * dt))));
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(Current, PlaneWaveDirection) {
    // A right-moving Gaussian centred on the origin carries J(0) = p0 |psi(0)|^2.
    const GridWavepacket w = gaussian_packet(GridGeometry{}, 0.0, 3.0, 2.0);
    const double density = std::norm(w.amplitudes()[w.geometry().origin_index()]);
    EXPECT_NEAR(current_at_origin(w), 2.0 * density, 1e-10);
    const GridWavepacket left = gaussian_packet(GridGeometry{}, 0.0, 3.0, -2.0);
    EXPECT_NEAR(current_at_origin(left), -2.0 * density, 1e-10);
}

TEST(Wraparound, GuardTripsWhenPacketReachesBoundary) {
    const GridWavepacket w0 = standard_packet();
    EXPECT_NO_THROW(check_wraparound(evolve_free(w0, 60.0)));
    EXPECT_THROW(check_wraparound(evolve_free(w0, 200.0)), NumericalError);
    EXPECT_THROW(arrival_trajectory(w0, {0.0, 200.0}), NumericalError);
}

TEST(TimeIntegral, GrowsByTheElapsedTime) {
    const GridWavepacket w0 = standard_packet();
    const double i40 = time_integral_demo(w0, 40.0, 0.05);
    const double i60 = time_integral_demo(w0, 60.0, 0.05);
    EXPECT_NEAR(i60 - i40, 19.7873552, 2e-4);
    EXPECT_NEAR(i60 - i40, 20.0, 0.5);
    EXPECT_EQ(time_integral_demo(w0, 0.0, 0.1), 0.0);
}

TEST(Backflow, CandidateHasNoNonPositiveMomenta) {
    const BackflowCandidate c{1.0, 3.0, 0.5, 0.5, 0.3, pi};
    const auto spec = candidate_spectrum(c);
    const auto p = GridGeometry{}.momenta();
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (p[k] <= 0.0) EXPECT_EQ(spec[k], cplx(0.0, 0.0));
    const GridWavepacket w = candidate_packet(c);
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    EXPECT_NEAR(centroid(w), -2.0, 0.05);
}

TEST(Backflow, CandidateValidation) {
    EXPECT_THROW((BackflowCandidate{-1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((BackflowCandidate{1.0, 3.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((BackflowCandidate{1.0, 3.0, 0.5, 0.5, 1.5}.validate()), std::invalid_argument);
    EXPECT_THROW((BackflowCandidate{1.0, 3.0, 0.5, 0.5, 0.5, 7.0}.validate()), std::invalid_argument);
}

TEST(Backflow, ScanMatchesReferenceAndEvaluatesTheCurrent) {
    const auto candidates = candidate_grid({}, 0.1, 0.9, 0.1, 16);
    ASSERT_EQ(candidates.size(), 9u * 16u);
    std::vector<double> times;
    for (int i = 0; i <= 300; ++i) times.push_back(0.01 * i);
    const BackflowResult r = backflow_scan(candidates, times);
    EXPECT_NEAR(r.j_min, -0.057385173534, 1e-9);
    EXPECT_NEAR(r.best.w, 0.3, 1e-12);
    EXPECT_NEAR(r.best.phi, pi, 1e-12);
    EXPECT_NEAR(r.t_star, 0.93, 1e-12);
    // The scan's fast path agrees with the full grid current.
    EXPECT_NEAR(current_at_origin(evolve_free(candidate_packet(r.best), r.t_star)), r.j_min, 1e-10);
}

TEST(Backflow, SingleGaussianStaysNonNegative) {
    std::vector<double> times;
    for (int i = 0; i <= 3000; ++i) times.push_back(0.01 * i);
    const BackflowCandidate single{1.0, 3.0, 0.5, 0.5, 0.0, 0.0};
    const BackflowResult r = backflow_scan(std::span(&single, 1), times);
    EXPECT_GT(r.j_min, -1e-10);
    EXPECT_NEAR(r.j_min, 3.17e-4, 1e-5);
}

TEST(Backflow, TieBreakIsIndependentOfCandidateOrder) {
    auto candidates = candidate_grid({}, 0.1, 0.5, 0.2, 8);
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(0.02 * i);
    const BackflowResult a = backflow_scan(candidates, times);
    std::reverse(candidates.begin(), candidates.end());
    const BackflowResult b = backflow_scan(candidates, times);
    EXPECT_EQ(a.best.w, b.best.w);
    EXPECT_EQ(a.best.phi, b.best.phi);
    EXPECT_EQ(a.t_star, b.t_star);
    EXPECT_EQ(a.j_min, b.j_min);
}

TEST(Backflow, DoublingMomentaRoughlyHalvesTheTime) {
    std::vector<double> times;
    for (int i = 0; i <= 300; ++i) times.push_back(0.01 * i);
    BackflowCandidate fast;
    fast.p1 = 2.0;
    fast.p2 = 6.0;
    const BackflowResult r = backflow_scan(candidate_grid(fast, 0.1, 0.9, 0.1, 16), times);
    EXPECT_LT(r.j_min, -1e-4);
    EXPECT_NEAR(r.t_star, 0.49, 1e-12);
}
