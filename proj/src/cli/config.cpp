#include "eventclock/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace eventclock::cli {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxSteps = 1'000'000;

// Pulls typed values out of a flat JSON object and remembers which keys were
// consumed so that leftovers can be reported as unknown.
class KeyReader {
public:
    explicit KeyReader(const json& doc) : doc_(doc) {
        if (!doc_.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = fetch(key, fallback.has_value());
        if (v == nullptr) return *fallback;
        if (!v->is_number()) throw ConfigError(key, "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
        return x;
    }

    std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
        const json* v = fetch(key, fallback.has_value());
        if (v == nullptr) return *fallback;
        return as_count(*v, key);
    }

    std::uint64_t seed(const std::string& key) {
        const json* v = fetch(key, false);
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
            throw ConfigError(key, "expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        const json* v = fetch(key, fallback.has_value());
        if (v == nullptr) return *fallback;
        if (!v->is_string()) throw ConfigError(key, "expected a string");
        return v->get<std::string>();
    }

    /// A number (real) or a two-element array [re, im].
    Complex complex(const std::string& key, Complex fallback) {
        const json* v = fetch(key, true);
        if (v == nullptr) return fallback;
        if (v->is_number()) return {v->get<double>(), 0.0};
        if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number())
            return {(*v)[0].get<double>(), (*v)[1].get<double>()};
        throw ConfigError(key, "expected a number or [re, im]");
    }

    const json& array(const std::string& key) {
        const json* v = fetch(key, false);
        if (!v->is_array() || v->empty()) throw ConfigError(key, "expected a non-empty array");
        return *v;
    }

    void reject_unknown() const {
        for (const auto& item : doc_.items())
            if (!used_.count(item.key())) throw ConfigError(item.key(), "unknown key for this experiment");
    }

    static std::size_t as_count(const json& v, const std::string& key) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ConfigError(key, "expected a non-negative integer");
        return v.get<std::size_t>();
    }

private:
    const json* fetch(const std::string& key, bool optional) {
        used_.insert(key);
        if (!doc_.contains(key)) {
            if (optional) return nullptr;
            throw ConfigError(key, "required key is missing");
        }
        return &doc_.at(key);
    }

    const json& doc_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

spin::SpinExampleConfig read_spin(KeyReader& r) {
    spin::SpinExampleConfig c;
    c.T = r.number("T", 1.0);
    require(c.T > 0.0, "T", "must be > 0");
    const std::string conv = r.text("convention", "paper");
    if (conv == "paper") {
        c.g_convention = spin::GConvention::paper;
    } else if (conv == "flip_at_T") {
        c.g_convention = spin::GConvention::flip_at_T;
    } else {
        throw ConfigError("convention", "expected \"paper\" or \"flip_at_T\"");
    }
    c.a = r.complex("a", {0.0, 0.0});
    c.b = r.complex("b", {1.0, 0.0});
    require(std::abs(std::norm(c.a) + std::norm(c.b) - 1.0) <= 1e-12, "b", "|a|^2 + |b|^2 must equal 1");
    return c;
}

arrival::GridGeometry read_grid(KeyReader& r) {
    arrival::GridGeometry g;
    g.n = r.count("grid_n", g.n);
    g.x_min = r.number("x_min", g.x_min);
    g.dx = r.number("dx", g.dx);
    require(g.n >= 4 && (g.n & (g.n - 1)) == 0, "grid_n", "must be a power of two >= 4");
    require(g.dx > 0.0, "dx", "must be > 0");
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("x_min", e.what());
    }
    return g;
}

SpinRunParams read_spin_run(KeyReader& r) {
    SpinRunParams p;
    p.spin = read_spin(r);
    p.t_max = r.number("t_max", p.spin.T);
    p.t_samples = r.count("t_samples", p.t_samples);
    require(p.t_max > 0.0, "t_max", "must be > 0");
    require(p.t_samples >= 3 && p.t_samples <= kMaxSteps, "t_samples", "must lie in [3, 1e6]");
    return p;
}

ZenoSweepParams read_zeno(KeyReader& r) {
    ZenoSweepParams p;
    p.spin = read_spin(r);
    p.tau = r.number("tau", p.spin.T);
    require(p.tau > 0.0, "tau", "must be > 0");
    for (const auto& v : r.array("k_values")) {
        const std::size_t k = KeyReader::as_count(v, "k_values");
        require(k >= 1 && k <= kMaxSteps, "k_values", "every k must lie in [1, 1e6]");
        p.k_values.push_back(k);
    }
    return p;
}

DetectParams read_detect(KeyReader& r) {
    DetectParams p;
    p.spin = read_spin(r);
    p.schedule.delta = r.number("delta");
    p.schedule.k_max = r.count("k_max");
    p.schedule.survival_floor = r.number("survival_floor", 1e-12);
    require(p.schedule.delta > 0.0, "delta", "must be > 0");
    require(p.schedule.k_max >= 1 && p.schedule.k_max <= kMaxSteps, "k_max", "must lie in [1, 1e6]");
    require(p.schedule.survival_floor >= 0.0 && p.schedule.survival_floor < 1.0, "survival_floor",
            "must lie in [0, 1)");
    if (r.has("samples")) {
        p.samples = r.count("samples");
        require(*p.samples >= 1, "samples", "must be >= 1");
        require(r.has("seed"), "seed", "sampling mode requires an explicit seed");
        p.seed = r.seed("seed");
    } else {
        require(!r.has("seed"), "seed", "only valid together with samples");
    }
    p.spin.delta = p.schedule.delta;
    return p;
}

CommutatorParams read_commutators(KeyReader& r) {
    CommutatorParams p;
    p.spin = read_spin(r);
    for (const auto& pair : r.array("pairs")) {
        require(pair.is_array() && pair.size() == 2 && pair[0].is_number() && pair[1].is_number(), "pairs",
                "each entry must be [t1, t2]");
        const double t1 = pair[0].get<double>();
        const double t2 = pair[1].get<double>();
        require(t1 >= 0.0 && t2 >= 0.0, "pairs", "times must be >= 0");
        require(t1 != t2, "pairs", "t1 and t2 must differ");
        p.pairs.emplace_back(t1, t2);
    }
    return p;
}

ArrivalEvolveParams read_arrival(KeyReader& r) {
    ArrivalEvolveParams p;
    p.grid = read_grid(r);
    p.x0 = r.number("x0", p.x0);
    p.sigma = r.number("sigma", p.sigma);
    p.p0 = r.number("p0", p.p0);
    p.t_max = r.number("t_max");
    p.dt = r.number("dt");
    require(p.sigma > 0.0, "sigma", "must be > 0");
    require(p.t_max >= 0.0, "t_max", "must be >= 0");
    require(p.dt > 0.0, "dt", "must be > 0");
    require(p.t_max / p.dt <= static_cast<double>(kMaxSteps), "dt", "more than 1e6 samples requested");
    return p;
}

BackflowParams read_backflow(KeyReader& r) {
    BackflowParams p;
    p.settings.geometry = read_grid(r);
    p.settings.launch_x = r.number("launch_x", p.settings.launch_x);
    p.base.p1 = r.number("p1", p.base.p1);
    p.base.p2 = r.number("p2", p.base.p2);
    p.base.s1 = r.number("s1", p.base.s1);
    p.base.s2 = r.number("s2", p.base.s2);
    require(p.base.p1 > 0.0, "p1", "must be > 0");
    require(p.base.p2 > 0.0, "p2", "must be > 0");
    require(p.base.s1 > 0.0, "s1", "must be > 0");
    require(p.base.s2 > 0.0, "s2", "must be > 0");
    p.w_min = r.number("w_min", p.w_min);
    p.w_max = r.number("w_max", p.w_max);
    p.w_step = r.number("w_step", p.w_step);
    require(p.w_min >= 0.0 && p.w_min <= 1.0, "w_min", "must lie in [0, 1]");
    require(p.w_max >= p.w_min && p.w_max <= 1.0, "w_max", "must lie in [w_min, 1]");
    require(p.w_step > 0.0, "w_step", "must be > 0");
    p.phi_steps = r.count("phi_steps", p.phi_steps);
    require(p.phi_steps >= 1, "phi_steps", "must be >= 1");
    p.t_min = r.number("t_min", p.t_min);
    p.t_max = r.number("t_max", p.t_max);
    p.t_step = r.number("t_step", p.t_step);
    require(p.t_max >= p.t_min, "t_max", "must be >= t_min");
    require(p.t_step > 0.0, "t_step", "must be > 0");
    require((p.t_max - p.t_min) / p.t_step <= static_cast<double>(kMaxSteps), "t_step", "more than 1e6 times");
    return p;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error("config key '" + key + "': " + message), key_(std::move(key)) {}

std::string_view experiment_name(Experiment e) noexcept {
    switch (e) {
        case Experiment::spin_run: return "spin-run";
        case Experiment::zeno_sweep: return "zeno-sweep";
        case Experiment::detect: return "detect";
        case Experiment::commutators: return "commutators";
        case Experiment::arrival_evolve: return "arrival-evolve";
        case Experiment::arrival_backflow: return "arrival-backflow";
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) noexcept {
    for (const Experiment e : {Experiment::spin_run, Experiment::zeno_sweep, Experiment::detect,
                               Experiment::commutators, Experiment::arrival_evolve, Experiment::arrival_backflow})
        if (experiment_name(e) == name) return e;
    return std::nullopt;
}

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    return std::nullopt;
}

RunConfig make_config(Experiment experiment, const nlohmann::json& document,
                      const std::optional<std::filesystem::path>& out, const std::optional<Format>& format) {
    KeyReader r(document);

    if (r.has("experiment")) {
        const std::string named = r.text("experiment");
        if (named != experiment_name(experiment))
            throw ConfigError("experiment", "config is for '" + named + "', not '" +
                                                std::string(experiment_name(experiment)) + "'");
    }

    RunConfig config{experiment, SpinRunParams{}, {}, Format::csv};
    switch (experiment) {
        case Experiment::spin_run: config.parameters = read_spin_run(r); break;
        case Experiment::zeno_sweep: config.parameters = read_zeno(r); break;
        case Experiment::detect: config.parameters = read_detect(r); break;
        case Experiment::commutators: config.parameters = read_commutators(r); break;
        case Experiment::arrival_evolve: config.parameters = read_arrival(r); break;
        case Experiment::arrival_backflow: config.parameters = read_backflow(r); break;
    }

    const std::string doc_format = r.text("format", "csv");
    if (format) {
        config.format = *format;
    } else if (auto f = parse_format(doc_format)) {
        config.format = *f;
    } else {
        throw ConfigError("format", "expected \"csv\" or \"json\"");
    }

    const std::string doc_output = r.text("output", "");
    if (out) {
        config.output_path = *out;
    } else if (!doc_output.empty()) {
        config.output_path = doc_output;
    } else {
        throw ConfigError("output", "no output path (use --out or the \"output\" key)");
    }

    r.reject_unknown();
    return config;
}

RunConfig load_config(Experiment experiment, const std::filesystem::path& config_path,
                      const std::optional<std::filesystem::path>& out, const std::optional<Format>& format) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("--config", "cannot open " + config_path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return make_config(experiment, doc, out, format);
}

}  // namespace eventclock::cli
