#include "eventclock/cli/run.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eventclock/errors.hpp"

namespace eventclock::cli {
namespace {

std::vector<double> uniform_times(double t_max, double dt) {
    if (t_max == 0.0) return {0.0};
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    const double h = t_max / static_cast<double>(steps);
    std::vector<double> times(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) times[i] = static_cast<double>(i) * h;
    return times;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

Table spin_run(const SpinRunParams& p) {
    const spin::SpinModel model = spin::build(p.spin);
    const TimeSeries pm = pm_of_t(model.spec, model.h, model.psi0, linspace(0.0, p.t_max, p.t_samples));
    const TimeSeries density = m_of_t(pm);
    Table t{"spin-run", {"t", "p_m", "m_density"}, {"time", "probability", "1/time"}, {}};
    for (std::size_t i = 0; i < pm.size(); ++i) t.rows.push_back({pm.times[i], pm.values[i], density.values[i]});
    return t;
}

Table zeno(const ZenoSweepParams& p) {
    const spin::SpinModel model = spin::build(p.spin);
    Table t{"zeno-sweep",
            {"k", "delta", "survival_at_tau", "delta_e", "resolvability"},
            {"count", "time", "probability", "energy", "dimensionless"},
            {}};
    for (const auto& row : zeno_sweep(model.spec, model.h, model.psi0, p.tau, p.k_values))
        t.rows.push_back({static_cast<double>(row.k), row.delta, row.survival_at_tau, row.delta_e, row.resolvability});
    return t;
}

Table detect(const DetectParams& p) {
    const spin::SpinModel model = spin::build(p.spin);
    const DetectionDistribution dist =
        p.samples ? sample_detection_distribution(model.spec, model.h, model.psi0, p.schedule, *p.samples, *p.seed)
                  : detection_distribution(model.spec, model.h, model.psi0, p.schedule);
    Table t{"detect", {"k", "t", "p_detect", "survival"}, {"count", "time", "probability", "probability"}, {}};
    for (std::size_t i = 0; i < dist.size(); ++i)
        t.rows.push_back({static_cast<double>(i + 1), dist.times[i], dist.p_detect[i], dist.survival[i]});
    return t;
}

Table commutators(const CommutatorParams& p) {
    const spin::SpinModel model = spin::build(p.spin);
    Table t{"commutators",
            {"t1", "t2", "same_time_norm", "two_time_norm"},
            {"time", "time", "dimensionless", "dimensionless"},
            {}};
    for (const auto& [t1, t2] : p.pairs) {
        const CommutatorNorms norms = commutator_diagnostics(model.spec, model.h, t1, t2);
        t.rows.push_back({t1, t2, norms.same_time_norm, norms.two_time_norm});
    }
    return t;
}

Table arrival_evolve(const ArrivalEvolveParams& p) {
    const arrival::GridWavepacket w0 = arrival::gaussian_packet(p.grid, p.x0, p.sigma, p.p0);
    Table t{"arrival-evolve", {"t", "p_plus", "j_origin"}, {"time", "probability", "probability/time"}, {}};
    for (const auto& s : arrival::arrival_trajectory(w0, uniform_times(p.t_max, p.dt)))
        t.rows.push_back({s.t, s.p_plus, s.j_origin});
    return t;
}

Table backflow(const BackflowParams& p) {
    const auto candidates = arrival::candidate_grid(p.base, p.w_min, p.w_max, p.w_step, p.phi_steps);
    std::vector<double> times;
    const auto steps = static_cast<std::size_t>(std::floor((p.t_max - p.t_min) / p.t_step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) times.push_back(p.t_min + static_cast<double>(i) * p.t_step);
    const arrival::BackflowResult r = arrival::backflow_scan(candidates, times, p.settings);
    Table t{"arrival-backflow",
            {"p1", "p2", "s1", "s2", "w", "phi", "t_star", "j_min"},
            {"momentum", "momentum", "momentum", "momentum", "dimensionless", "radian", "time", "probability/time"},
            {}};
    t.rows.push_back({r.best.p1, r.best.p2, r.best.s1, r.best.s2, r.best.w, r.best.phi, r.t_star, r.j_min});
    return t;
}

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

Table execute(const RunConfig& config) {
    return std::visit(Overloaded{
                          [](const SpinRunParams& p) { return spin_run(p); },
                          [](const ZenoSweepParams& p) { return zeno(p); },
                          [](const DetectParams& p) { return detect(p); },
                          [](const CommutatorParams& p) { return commutators(p); },
                          [](const ArrivalEvolveParams& p) { return arrival_evolve(p); },
                          [](const BackflowParams& p) { return backflow(p); },
                      },
                      config.parameters);
}

int run(const RunConfig& config, std::ostream& err) {
    try {
        const Table table = execute(config);
        write_atomically(config.output_path, config.format == Format::csv ? to_csv(table) : to_json(table));
        return kExitOk;
    } catch (const NumericalError& e) {
        err << "eventclock: numerical certification failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "eventclock: " << e.what() << '\n';
        return kExitFailure;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Measurement-time statistics: repeated-measurement detection, Zeno sweeps, arrival currents"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format_name;

    const std::vector<std::pair<Experiment, std::string>> descriptions{
        {Experiment::spin_run, "P_M(t) and m(t) for the two-spin detector"},
        {Experiment::zeno_sweep, "Survival at fixed tau for several measurement counts"},
        {Experiment::detect, "Detection-time distribution of the repeated-measurement protocol"},
        {Experiment::commutators, "Same-time and two-time commutator norms of M(t)"},
        {Experiment::arrival_evolve, "P_+(t) and J(0,t) for a free Gaussian packet"},
        {Experiment::arrival_backflow, "Scan two-component positive-momentum states for negative J(0,t)"},
    };
    for (const auto& [experiment, text] : descriptions) {
        CLI::App* sub = app.add_subcommand(std::string(experiment_name(experiment)), text);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_path, "Output file (overrides the config's \"output\")");
        sub->add_option("--format", format_name, "csv or json (overrides the config's \"format\")");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    const Experiment experiment = *parse_experiment(chosen);

    RunConfig config;
    try {
        std::optional<Format> format;
        if (!format_name.empty()) {
            format = parse_format(format_name);
            if (!format) throw ConfigError("--format", "expected csv or json");
        }
        std::optional<std::filesystem::path> out;
        if (!out_path.empty()) out = out_path;
        config = load_config(experiment, config_path, out, format);
    } catch (const ConfigError& e) {
        std::cerr << "eventclock: " << e.what() << '\n';
        return kExitConfig;
    }
    return run(config, std::cerr);
}

}  // namespace eventclock::cli
