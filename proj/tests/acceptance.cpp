// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-eventclock-binary>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "eventclock/arrival.hpp"
#include "eventclock/detector.hpp"
#include "eventclock/repeated.hpp"
#include "eventclock/spin_example.hpp"

using namespace eventclock;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Every protocol run made by the criteria below, for the telescoping check.
std::vector<DetectionDistribution> g_runs;

DetectionDistribution record(DetectionDistribution d) {
    g_runs.push_back(d);
    return d;
}

Outcome zeno_freezing() {
    const spin::SpinModel model = spin::build({});
    const std::size_t ks[] = {10, 100, 1000};
    const double quoted[] = {0.0144, 0.6737, 0.9613};
    double prev = -1.0, worst_closed = 0.0, worst_quoted = 0.0;
    bool increasing = true;
    for (int i = 0; i < 3; ++i) {
        const double k = static_cast<double>(ks[i]);
        const auto dist = record(detection_distribution(model.spec, model.h, model.psi0, {1.0 / k, ks[i]}));
        const double s = dist.survival.back();
        worst_closed = std::max(worst_closed, std::abs(s - std::pow(std::cos(2 * pi / k), 2 * k)));
        worst_quoted = std::max(worst_quoted, std::abs(s - quoted[i]));
        increasing = increasing && s > prev;
        prev = s;
    }
    return {worst_closed <= 1e-10 && worst_quoted <= 1e-3 && increasing,
            fmt("max|sim-closed|=%.2e max|sim-quoted|=%.2e increasing=%d", worst_closed, worst_quoted, increasing)};
}

struct RandomInstance {
    PiecewiseHamiltonian h;
    StateVector psi0;
};

RandomInstance random_instance(std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Matrix a(4, 4);
    for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) a(r, c) = {d(rng), d(rng)};
    Vector v(4);
    for (Eigen::Index i = 0; i < 4; ++i) v(i) = {d(rng), d(rng)};
    return {PiecewiseHamiltonian::constant(DenseOperator(Matrix((a + a.adjoint()) * 0.5)), 0.0, 10.0),
            StateVector::normalized(v)};
}

Outcome chain_equivalence() {
    double worst = 0.0;
    auto compare = [&](const CorrelationSpec& spec, const PiecewiseHamiltonian& h, const StateVector& psi0,
                       const DetectionSchedule& sched) {
        const auto dist = record(detection_distribution(spec, h, psi0, sched));
        for (std::size_t k = 1; k <= sched.k_max; ++k) {
            const ChainExpectations e = operator_chain(spec, h, psi0, sched, k);
            worst = std::max({worst, std::abs(e.a_k - dist.p_detect[k - 1]), std::abs(e.b_k - dist.survival[k - 1])});
        }
    };
    const spin::SpinModel model = spin::build({});
    compare(model.spec, model.h, model.psi0, {0.125, 10, 0.0});
    compare(model.spec, model.h, model.psi0, {0.07, 10, 0.0});
    std::mt19937_64 rng(31337);
    const CorrelationSpec spec{{{0, 0}, {1, 1}}, 2, 2};
    for (int i = 0; i < 20; ++i) {
        const RandomInstance inst = random_instance(rng);
        compare(spec, inst.h, inst.psi0, {0.1, 10, 0.0});
    }
    const Matrix a3 = build_chain_operators(model.spec, model.h, {0.125, 3}, 3).a_k.entries();
    const double defect = spectral_norm(a3 * a3 - a3);
    return {worst <= 1e-10 && defect > 1e-6, fmt("max|chain-recursion|=%.2e ||A3^2-A3||=%.4f", worst, defect)};
}

Outcome telescoping() {
    // Extra runs: the truncating and sampled paths.
    const spin::SpinModel model = spin::build({});
    record(detection_distribution(model.spec, model.h, model.psi0, {0.25, 6}));
    record(detection_distribution(model.spec, model.h, model.psi0, {0.125, 12, 1e-3}));
    record(sample_detection_distribution(model.spec, model.h, model.psi0, {0.125, 8}, 5000, 1));
    double worst = 0.0;
    for (const auto& d : g_runs) worst = std::max(worst, d.telescoping_residual());
    return {worst <= 1e-10, fmt("%zu runs, max residual=%.2e", g_runs.size(), worst)};
}

Outcome negative_density() {
    const spin::SpinModel model = spin::build({});
    std::vector<double> times(1001);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / 1000.0;
    const TimeSeries m = m_of_t(pm_of_t(model.spec, model.h, model.psi0, times));
    const double value = m.values[375];
    const double rel = std::abs(value + 2 * pi) / (2 * pi);
    return {rel < 0.01 && value < 0.0, fmt("m(3T/8)=%.9f expected=%.9f rel=%.2e", value, -2 * pi, rel)};
}

Outcome commutators() {
    const spin::SpinModel model = spin::build({});
    double worst_same = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double t1 = 0.05 * i;
        worst_same = std::max(worst_same, commutator_diagnostics(model.spec, model.h, t1, t1 + 0.0371).same_time_norm);
    }
    const CommutatorNorms c = commutator_diagnostics(model.spec, model.h, 0.125, 0.25);
    worst_same = std::max(worst_same, c.same_time_norm);
    return {worst_same <= 1e-12 && c.two_time_norm > 0.1,
            fmt("max same-time=%.2e two-time(T/8,T/4)=%.12f (baseline 0.5)", worst_same, c.two_time_norm)};
}

Outcome resolvability() {
    const spin::SpinModel model = spin::build({});
    const double de = energy_variance(model.h, model.psi0, 0.0);
    const auto rows = zeno_sweep(model.spec, model.h, model.psi0, 1.0, {10, 100, 1000});
    const double threshold = resolvability_report(rows).delta_threshold;
    const double e1 = std::abs(de - 2 * pi), e2 = std::abs(threshold - 1.0 / (2 * pi));
    return {e1 <= 1e-12 && e2 <= 1e-12, fmt("dE=%.15f threshold=%.15f", de, threshold)};
}

Outcome continuity() {
    using namespace arrival;
    const GridWavepacket w0 = gaussian_packet(GridGeometry{}, -20.0, 2.0, 1.0);
    const double dt = 1e-3;
    double worst = 0.0;
    for (double t = 0.0; t < 60.0; t += 0.5) {
        const double dp = (p_plus(evolve_free(w0, t + dt)) - p_plus(evolve_free(w0, t))) / dt;
        worst = std::max(worst, std::abs(dp - current_at_origin(evolve_free(w0, t + 0.5 * dt))));
    }
    GridWavepacket w = w0;
    for (int i = 0; i < 10000; ++i) w = evolve_free(w, dt);
    const double drift = std::abs(w.norm() - 1.0);
    return {worst <= 1e-6 && drift <= 1e-12, fmt("max|dP+/dt - J(0)|=%.2e norm drift=%.2e", worst, drift)};
}

Outcome backflow() {
    using namespace arrival;
    std::vector<double> times;
    for (int i = 0; i <= 3000; ++i) times.push_back(0.01 * i);
    const auto candidates = candidate_grid({}, 0.1, 0.9, 0.1, 16);
    const BackflowResult r = backflow_scan(candidates, times);
    const auto spec = candidate_spectrum(r.best);
    const auto p = GridGeometry{}.momenta();
    bool positive_only = true;
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (p[k] <= 0.0 && spec[k] != cplx(0.0, 0.0)) positive_only = false;
    const BackflowCandidate single{1.0, 3.0, 0.5, 0.5, 0.0, 0.0};
    const BackflowResult base = backflow_scan(std::span(&single, 1), times);
    return {r.j_min < -1e-4 && positive_only && base.j_min >= -1e-10,
            fmt("J(0,t*)=%.6e at w=%.1f phi=%.4f t*=%.2f; single-Gaussian min J=%.3e", r.j_min, r.best.w, r.best.phi,
                r.t_star, base.j_min)};
}

Outcome time_norm() {
    using namespace arrival;
    const GridWavepacket w0 = gaussian_packet(GridGeometry{}, -20.0, 2.0, 1.0);
    const double growth = time_integral_demo(w0, 60.0, 0.01) - time_integral_demo(w0, 40.0, 0.01);
    return {std::abs(growth - 20.0) <= 0.5, fmt("integral growth 40->60 = %.6f", growth)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism(const std::string& tool) {
    if (tool.empty()) return {false, "no eventclock binary given"};
    const fs::path dir = fs::temp_directory_path() / ("eventclock_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::pair<std::string, std::string> runs[] = {
        {"zeno-sweep", R"({"k_values": [10, 100, 1000]})"},
        {"detect", R"({"delta": 0.125, "k_max": 12, "samples": 5000, "seed": 11})"},
        {"commutators", R"({"pairs": [[0.125, 0.25], [0.1, 0.7]]})"},
        {"arrival-evolve", R"({"t_max": 60, "dt": 0.5, "format": "json"})"},
    };
    bool ok = true;
    std::size_t bytes = 0;
    for (const auto& [exp, cfg] : runs) {
        const fs::path c = dir / (exp + ".json");
        std::ofstream(c) << cfg;
        std::string out[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path o = dir / (exp + "_" + std::to_string(i) + ".out");
            const std::string cmd = "'" + tool + "' " + exp + " --config '" + c.string() + "' --out '" + o.string() + "'";
            const int status = std::system(cmd.c_str());
            ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
            out[i] = slurp(o);
        }
        ok = ok && !out[0].empty() && out[0] == out[1];
        bytes += out[0].size();
    }
    fs::remove_all(dir);
    return {ok, fmt("4 experiments x 2 runs, %zu bytes each, identical=%d", bytes, ok)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string tool = argc > 1 ? argv[1] : "";
    // Telescoping runs last: it checks every protocol run the others made.
    const std::vector<std::tuple<int, std::string, std::function<Outcome()>>> criteria{
        {1, "zeno freezing", zeno_freezing},
        {3, "chain/recursion equivalence", chain_equivalence},
        {4, "negative time-density", negative_density},
        {5, "commutator pathology", commutators},
        {6, "resolvability threshold", resolvability},
        {7, "continuity and norm", continuity},
        {8, "backflow", backflow},
        {9, "time-norm failure", time_norm},
        {10, "cli determinism", [&] { return determinism(tool); }},
        {2, "telescoping normalization", telescoping},
    };
    std::map<int, std::pair<std::string, Outcome>> results;
    for (const auto& [id, name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        results[id] = {name, o};
    }
    int failures = 0;
    for (const auto& [id, entry] : results) {
        const auto& [name, o] = entry;
        std::cout << (o.pass ? "PASS " : "FAIL ") << "[" << id << " " << name << "] " << o.detail << '\n';
        failures += o.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
