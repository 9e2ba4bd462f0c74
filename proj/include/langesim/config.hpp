#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "langesim/force_field.hpp"
#include "langesim/params.hpp"
#include "langesim/potential.hpp"

namespace langesim {

enum class ExperimentKind { linear_response, negative_mobility, resonance_scan, diffusion_sweep };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& tag);

// Time step used for a forcing period in a frequency scan: the first rule
// whose bounds contain the period wins, otherwise system.dt.
struct DtRule {
    std::optional<double> max_period;  // applies when period <= max_period
    std::optional<double> min_period;  // applies when period >= min_period
    double dt = 0.0;
};

struct ResonanceSettings {
    std::vector<double> frequencies;  // omega / (2 pi)
    std::vector<DtRule> dt_rules;
    double sim_time = 0.0;            // per eta and frequency, rounded up to whole periods
    double burn_in_time = 0.0;        // rounded up to whole periods
    std::optional<double> tail_min;   // frequency window of the log-log tail fit
    std::optional<double> tail_max;
};

struct DiffusionSettings {
    std::int64_t replicas = 0;
    double tau_neq = 0.0;
    double tau_sim = 0.0;
    std::optional<double> fit_max_eta;  // quadratic fit uses eta <= this
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::linear_response;
    SystemParamsInit system;
    std::string potential = "cos2d";
    ForceSpec force;
    std::string force_tag;
    std::vector<double> etas;
    std::int64_t n_steps = 0;        // per eta (linear response, negative mobility)
    std::int64_t burn_in_steps = 0;  // per eta, discarded
    std::int64_t batches = 64;       // target batch count for time-series standard errors
    bool through_origin = false;
    ResonanceSettings resonance;
    DiffusionSettings diffusion;
    std::uint64_t seed = 1;
    std::string output;
    std::string profile;
    // The effective configuration after profile and seed resolution, echoed
    // into output headers.
    nlohmann::json resolved;

    SystemParams params() const { return SystemParams(system); }
    Potential make_potential() const { return Potential::from_descriptor(potential); }
    ForceField make_field(const SystemParams& p) const { return ForceField(force, make_potential(), p); }
};

struct ConfigOverrides {
    std::optional<std::string> profile;  // default "desk" when the file has profiles
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<ExperimentKind> experiment;
};

// Parses and validates a configuration document. A top-level "profiles"
// object maps profile names to JSON merge patches applied before parsing.
// Seed precedence: override, then LANGESIM_SEED, then the document.
// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

// dt for one frequency of a scan: the rule dt refined so that the period is
// a whole number of steps, T / ceil(T / dt_rule).
double scan_time_step(const ResonanceSettings& settings, double default_dt, double period);

}  // namespace langesim
