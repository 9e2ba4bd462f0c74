#include "langesim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "langesim/diffusion.hpp"
#include "langesim/stats.hpp"

namespace langesim {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::linear_response: return "linear-response";
    case ExperimentKind::negative_mobility: return "negative-mobility";
    case ExperimentKind::resonance_scan: return "resonance-scan";
    case ExperimentKind::diffusion_sweep: return "diffusion-sweep";
    }
    return "?";
}

ExperimentKind parse_experiment(const std::string& tag) {
    for (auto k : {ExperimentKind::linear_response, ExperimentKind::negative_mobility, ExperimentKind::resonance_scan,
                   ExperimentKind::diffusion_sweep})
        if (to_string(k) == tag) return k;
    throw ConfigError("experiment: unknown experiment '" + tag + "'");
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key()))
            throw ConfigError((where.empty() ? it.key() : where + "." + it.key()) + ": unknown key");
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
    return v;
}

std::int64_t integer(const json& j, const std::string& field) {
    const double v = number(j, field);
    if (v != std::floor(v) || std::abs(v) > 9.0e18) throw ConfigError(field + ": must be an integer");
    return static_cast<std::int64_t>(v);
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field + ": must be a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& field) {
    if (!j.is_boolean()) throw ConfigError(field + ": must be true or false");
    return j.get<bool>();
}

std::vector<double> number_list(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field + ": must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

SystemParamsInit parse_system(const json& j) {
    check_keys(j, "system", {"dim", "beta", "gamma", "mass", "dt", "period", "cell"});
    SystemParamsInit s;
    if (j.contains("dim")) s.dim = static_cast<int>(integer(j["dim"], "system.dim"));
    if (s.dim < 1 || s.dim > kMaxDim) throw ConfigError("system.dim: must be between 1 and " + std::to_string(kMaxDim));
    if (j.contains("beta")) s.beta = number(j["beta"], "system.beta");
    if (j.contains("gamma")) s.gamma = number(j["gamma"], "system.gamma");
    if (j.contains("dt")) s.dt = number(j["dt"], "system.dt");
    if (j.contains("period")) s.period = number(j["period"], "system.period");
    if (j.contains("mass")) {
        const json& m = j["mass"];
        if (m.is_number()) {
            s.mass = Mat(number(m, "system.mass") * Mat::Identity(s.dim, s.dim));
        } else {
            if (!m.is_array() || static_cast<int>(m.size()) != s.dim)
                throw ConfigError("system.mass: must be a number or a dim x dim array");
            Mat M(s.dim, s.dim);
            for (int r = 0; r < s.dim; ++r) {
                const auto row = number_list(m[static_cast<std::size_t>(r)], "system.mass");
                if (static_cast<int>(row.size()) != s.dim) throw ConfigError("system.mass: must be a dim x dim array");
                for (int c = 0; c < s.dim; ++c) M(r, c) = row[static_cast<std::size_t>(c)];
            }
            s.mass = M;
        }
    }
    if (j.contains("cell")) {
        const auto c = number_list(j["cell"], "system.cell");
        if (static_cast<int>(c.size()) != s.dim) throw ConfigError("system.cell: must have dim entries");
        Vec v(s.dim);
        for (int k = 0; k < s.dim; ++k) v(k) = c[static_cast<std::size_t>(k)];
        s.cell = v;
    }
    return s;
}

ForceSpec parse_force(const json& j, std::string& tag) {
    if (j.is_string()) {
        tag = j.get<std::string>();
        return parse_force_tag(tag);
    }
    check_keys(j, "force", {"kind", "modulation"});
    if (!j.contains("kind")) throw ConfigError("force.kind: missing");
    tag = text(j["kind"], "force.kind");
    ForceSpec spec = parse_force_tag(tag);
    if (j.contains("modulation")) {
        const std::string m = text(j["modulation"], "force.modulation");
        if (m == "cosine" || m == "cos") spec.modulation = Modulation::cosine;
        else if (m == "none") spec.modulation = Modulation::none;
        else throw ConfigError("force.modulation: must be 'cosine' or 'none'");
    }
    return spec;
}

std::vector<double> parse_etas(const json& j) {
    check_keys(j, "eta", {"max", "count", "values", "include_zero"});
    std::vector<double> etas;
    if (j.contains("values")) {
        if (j.contains("max") || j.contains("count")) throw ConfigError("eta: give either values or max/count");
        etas = number_list(j["values"], "eta.values");
    } else {
        if (!j.contains("max")) throw ConfigError("eta.max: missing");
        const double max = number(j["max"], "eta.max");
        if (!(max > 0.0)) throw ConfigError("eta.max: must be strictly positive");
        const std::int64_t count = j.contains("count") ? integer(j["count"], "eta.count") : 10;
        if (count < 1) throw ConfigError("eta.count: must be at least 1");
        if (j.contains("include_zero") && boolean(j["include_zero"], "eta.include_zero")) etas.push_back(0.0);
        for (std::int64_t k = 1; k <= count; ++k)
            etas.push_back(max * static_cast<double>(k) / static_cast<double>(count));
    }
    if (etas.empty()) throw ConfigError("eta.values: must not be empty");
    return etas;
}

ResonanceSettings parse_resonance(const json& j) {
    check_keys(j, "resonance", {"frequencies", "dt_rules", "sim_time", "burn_in_time", "tail"});
    ResonanceSettings r;
    if (!j.contains("frequencies")) throw ConfigError("resonance.frequencies: missing");
    r.frequencies = number_list(j["frequencies"], "resonance.frequencies");
    if (r.frequencies.empty()) throw ConfigError("resonance.frequencies: must not be empty");
    for (double f : r.frequencies)
        if (!(f > 0.0)) throw ConfigError("resonance.frequencies: must be strictly positive");
    if (j.contains("dt_rules")) {
        if (!j["dt_rules"].is_array()) throw ConfigError("resonance.dt_rules: must be an array");
        for (const auto& rule : j["dt_rules"]) {
            check_keys(rule, "resonance.dt_rules", {"max_period", "min_period", "dt"});
            DtRule d;
            if (rule.contains("max_period")) d.max_period = number(rule["max_period"], "resonance.dt_rules.max_period");
            if (rule.contains("min_period")) d.min_period = number(rule["min_period"], "resonance.dt_rules.min_period");
            if (!rule.contains("dt")) throw ConfigError("resonance.dt_rules.dt: missing");
            d.dt = number(rule["dt"], "resonance.dt_rules.dt");
            if (!(d.dt > 0.0)) throw ConfigError("resonance.dt_rules.dt: must be strictly positive");
            r.dt_rules.push_back(d);
        }
    }
    if (!j.contains("sim_time")) throw ConfigError("resonance.sim_time: missing");
    r.sim_time = number(j["sim_time"], "resonance.sim_time");
    if (!(r.sim_time > 0.0)) throw ConfigError("resonance.sim_time: must be strictly positive");
    if (j.contains("burn_in_time")) r.burn_in_time = number(j["burn_in_time"], "resonance.burn_in_time");
    if (r.burn_in_time < 0.0) throw ConfigError("resonance.burn_in_time: must be non-negative");
    if (j.contains("tail")) {
        check_keys(j["tail"], "resonance.tail", {"min", "max"});
        if (j["tail"].contains("min")) r.tail_min = number(j["tail"]["min"], "resonance.tail.min");
        if (j["tail"].contains("max")) r.tail_max = number(j["tail"]["max"], "resonance.tail.max");
    }
    return r;
}

DiffusionSettings parse_diffusion(const json& j) {
    check_keys(j, "diffusion", {"replicas", "tau_neq", "tau_sim", "fit_max_eta"});
    DiffusionSettings d;
    if (!j.contains("replicas")) throw ConfigError("diffusion.replicas: missing");
    if (!j.contains("tau_sim")) throw ConfigError("diffusion.tau_sim: missing");
    d.replicas = integer(j["replicas"], "diffusion.replicas");
    d.tau_sim = number(j["tau_sim"], "diffusion.tau_sim");
    if (j.contains("tau_neq")) d.tau_neq = number(j["tau_neq"], "diffusion.tau_neq");
    if (j.contains("fit_max_eta")) {
        d.fit_max_eta = number(j["fit_max_eta"], "diffusion.fit_max_eta");
        if (!(*d.fit_max_eta > 0.0)) throw ConfigError("diffusion.fit_max_eta: must be strictly positive");
    }
    return d;
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("LANGESIM_SEED");
    if (!s || !*s) return std::nullopt;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("LANGESIM_SEED: not an unsigned 64-bit integer");
    }
}

std::uint64_t parse_seed(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return std::stoull(j.get<std::string>(), nullptr, 0);
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("seed: must be an unsigned 64-bit integer");
}

}  // namespace

double scan_time_step(const ResonanceSettings& settings, double default_dt, double period) {
    double dt = default_dt;
    for (const auto& rule : settings.dt_rules) {
        const bool below = !rule.max_period || period <= *rule.max_period;
        const bool above = !rule.min_period || period >= *rule.min_period;
        if (below && above) {
            dt = rule.dt;
            break;
        }
    }
    const double steps = std::ceil(period / dt * (1.0 - 1e-12));
    return period / std::max(1.0, steps);
}

ExperimentConfig parse_config(const json& input, const ConfigOverrides& overrides) {
    if (!input.is_object()) throw ConfigError("config: top level must be an object");
    json doc = input;
    std::string profile;
    if (doc.contains("profiles")) {
        const json profiles = doc["profiles"];
        doc.erase("profiles");
        if (!profiles.is_object()) throw ConfigError("profiles: must be an object");
        profile = overrides.profile.value_or("desk");
        if (!profiles.contains(profile)) throw ConfigError("profiles: no profile named '" + profile + "'");
        doc.merge_patch(profiles[profile]);
    } else if (overrides.profile && *overrides.profile != "desk") {
        throw ConfigError("profiles: no profile named '" + *overrides.profile + "'");
    }

    check_keys(doc, "", {"experiment", "system", "potential", "force", "eta", "n_steps", "burn_in_steps", "batches",
                         "fit", "resonance", "diffusion", "seed", "output", "description"});

    ExperimentConfig cfg;
    cfg.profile = profile;
    if (overrides.experiment) {
        cfg.experiment = *overrides.experiment;
        if (doc.contains("experiment") && parse_experiment(text(doc["experiment"], "experiment")) != cfg.experiment)
            throw ConfigError("experiment: config is for '" + doc["experiment"].get<std::string>() +
                              "', not '" + to_string(cfg.experiment) + "'");
    } else {
        if (!doc.contains("experiment")) throw ConfigError("experiment: missing");
        cfg.experiment = parse_experiment(text(doc["experiment"], "experiment"));
    }
    doc["experiment"] = to_string(cfg.experiment);

    cfg.system = parse_system(doc.value("system", json::object()));
    if (doc.contains("potential")) cfg.potential = text(doc["potential"], "potential");
    if (!doc.contains("force")) throw ConfigError("force: missing");
    cfg.force = parse_force(doc["force"], cfg.force_tag);

    if (!doc.contains("eta")) throw ConfigError("eta: missing");
    cfg.etas = parse_etas(doc["eta"]);
    for (double e : cfg.etas)
        if (e < 0.0) throw ConfigError("eta.values: must be non-negative");
    if (count_distinct(cfg.etas) < 3)
        throw ConfigError(cfg.experiment == ExperimentKind::diffusion_sweep
                              ? "eta: the quadratic fit needs at least 3 distinct values"
                              : "eta: the linear fit needs at least 3 distinct values");

    if (doc.contains("n_steps")) cfg.n_steps = integer(doc["n_steps"], "n_steps");
    if (doc.contains("burn_in_steps")) cfg.burn_in_steps = integer(doc["burn_in_steps"], "burn_in_steps");
    if (doc.contains("batches")) cfg.batches = integer(doc["batches"], "batches");
    if (cfg.burn_in_steps < 0) throw ConfigError("burn_in_steps: must be non-negative");
    if (cfg.batches < 2) throw ConfigError("batches: must be at least 2");
    if (doc.contains("fit")) {
        check_keys(doc["fit"], "fit", {"intercept"});
        if (doc["fit"].contains("intercept")) cfg.through_origin = !boolean(doc["fit"]["intercept"], "fit.intercept");
    }

    if (overrides.seed) cfg.seed = *overrides.seed;
    else if (auto e = env_seed()) cfg.seed = *e;
    else if (doc.contains("seed")) cfg.seed = parse_seed(doc["seed"]);
    doc["seed"] = cfg.seed;

    if (overrides.output) cfg.output = *overrides.output;
    else if (doc.contains("output")) cfg.output = text(doc["output"], "output");
    doc.erase("output");

    // Model-level validation with the base period.
    const SystemParams params(cfg.system);
    const Potential pot = cfg.make_potential();
    validate_model(params, pot, cfg.make_field(params));

    switch (cfg.experiment) {
    case ExperimentKind::linear_response:
    case ExperimentKind::negative_mobility: {
        const std::int64_t I = params.steps_per_period();
        if (cfg.n_steps <= 0 || cfg.n_steps % I != 0)
            throw ConfigError("n_steps: must be a positive multiple of period / dt (" + std::to_string(I) + ")");
        if (cfg.n_steps / I < 2 * cfg.batches)
            throw ConfigError("n_steps: too short for the requested number of batches");
        break;
    }
    case ExperimentKind::resonance_scan:
        if (!doc.contains("resonance")) throw ConfigError("resonance: missing");
        cfg.resonance = parse_resonance(doc["resonance"]);
        if (cfg.make_field(params).modulation() != Modulation::cosine)
            throw ConfigError("force.modulation: a frequency scan needs a cosine-modulated force");
        break;
    case ExperimentKind::diffusion_sweep:
        if (!doc.contains("diffusion")) throw ConfigError("diffusion: missing");
        cfg.diffusion = parse_diffusion(doc["diffusion"]);
        make_replica_plan(params, cfg.diffusion.replicas, cfg.diffusion.tau_neq, cfg.diffusion.tau_sim);
        if (cfg.diffusion.fit_max_eta) {
            std::vector<double> in_window;
            for (double e : cfg.etas)
                if (e <= *cfg.diffusion.fit_max_eta) in_window.push_back(e);
            if (count_distinct(in_window) < 3)
                throw ConfigError("diffusion.fit_max_eta: fewer than 3 distinct eta values inside the fit window");
        }
        break;
    }
    if (cfg.experiment != ExperimentKind::resonance_scan && doc.contains("resonance"))
        throw ConfigError("resonance: only valid for resonance-scan");
    if (cfg.experiment != ExperimentKind::diffusion_sweep && doc.contains("diffusion"))
        throw ConfigError("diffusion: only valid for diffusion-sweep");

    if (!profile.empty()) doc["profile"] = profile;
    cfg.resolved = std::move(doc);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    return parse_config(doc, overrides);
}

}  // namespace langesim
