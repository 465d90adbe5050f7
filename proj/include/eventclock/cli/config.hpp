#pragma once

// Run configuration for the eventclock command-line front end.
//
// A config is one flat JSON object per experiment; see docs/config.md. Every
// key is validated (presence, type, range) before any computation starts, and
// unknown keys are rejected so that typos never silently fall back to a
// default.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "eventclock/arrival.hpp"
#include "eventclock/repeated.hpp"
#include "eventclock/spin_example.hpp"

namespace eventclock::cli {

enum class Experiment { spin_run, zeno_sweep, detect, commutators, arrival_evolve, arrival_backflow };
enum class Format { csv, json };

std::string_view experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;
std::optional<Format> parse_format(std::string_view name) noexcept;

/// Validation failure; key() names the offending config key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct SpinRunParams {
    spin::SpinExampleConfig spin;
    double t_max = 1.0;
    std::size_t t_samples = 1001;
};

struct ZenoSweepParams {
    spin::SpinExampleConfig spin;
    double tau = 1.0;
    std::vector<std::size_t> k_values;
};

struct DetectParams {
    spin::SpinExampleConfig spin;
    DetectionSchedule schedule;
    /// Sampling mode: both set or both absent.
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
};

struct CommutatorParams {
    spin::SpinExampleConfig spin;
    std::vector<std::pair<double, double>> pairs;
};

struct ArrivalEvolveParams {
    arrival::GridGeometry grid;
    double x0 = -20.0;
    double sigma = 2.0;
    double p0 = 1.0;
    double t_max = 0.0;
    double dt = 0.0;
};

struct BackflowParams {
    arrival::BackflowCandidate base;
    arrival::BackflowSettings settings;
    double w_min = 0.1;
    double w_max = 0.9;
    double w_step = 0.1;
    std::size_t phi_steps = 16;
    double t_min = 0.0;
    double t_max = 10.0;
    double t_step = 0.01;
};

using Parameters = std::variant<SpinRunParams, ZenoSweepParams, DetectParams, CommutatorParams,
                                ArrivalEvolveParams, BackflowParams>;

struct RunConfig {
    Experiment experiment = Experiment::spin_run;
    Parameters parameters;
    std::filesystem::path output_path;
    Format format = Format::csv;
};

/// Validates a parsed document. `out` and `format` override the document's
/// "output" and "format" keys.
RunConfig make_config(Experiment experiment, const nlohmann::json& document,
                      const std::optional<std::filesystem::path>& out = std::nullopt,
                      const std::optional<Format>& format = std::nullopt);

/// Reads and validates a config file; unreadable or malformed JSON is a ConfigError.
RunConfig load_config(Experiment experiment, const std::filesystem::path& config_path,
                      const std::optional<std::filesystem::path>& out = std::nullopt,
                      const std::optional<Format>& format = std::nullopt);

}  // namespace eventclock::cli
