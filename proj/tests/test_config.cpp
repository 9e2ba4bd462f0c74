#include <cstdlib>

#include "doctest.h"

#include "langesim/config.hpp"

using namespace langesim;
using nlohmann::json;

namespace {

json base() {
    return {{"experiment", "linear-response"},
            {"potential", "cos2d"},
            {"force", "cosine-mode(2)"},
            {"eta", {{"max", 1.0}, {"count", 4}}},
            {"n_steps", 12800},
            {"seed", 5}};
}

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a valid document parses") {
    const ExperimentConfig c = parse_config(base());
    CHECK(c.experiment == ExperimentKind::linear_response);
    CHECK(c.etas == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(c.seed == 5);
    CHECK(c.resolved["seed"] == 5);
    CHECK_FALSE(c.through_origin);
}

TEST_CASE("validation errors name the field") {
    json d = base();
    d["system"] = {{"dt", 0.03}};
    CHECK(error_of(d).find("system.period") != std::string::npos);
    d = base();
    d["eta"]["max"] = 0.0;
    CHECK(error_of(d).find("eta.max") != std::string::npos);
    d = base();
    d["system"] = {{"mass", {{1.0, 0.0}, {0.0, -1.0}}}};
    CHECK(error_of(d).find("system.mass") != std::string::npos);
    d = base();
    d["eta"] = {{"values", {0.0}}};
    CHECK(error_of(d).find("3 distinct") != std::string::npos);
    d = base();
    d["n_steps"] = 12850;
    CHECK(error_of(d).find("n_steps") != std::string::npos);
    d = base();
    d["bogus"] = 1;
    CHECK(error_of(d).find("bogus") != std::string::npos);
    d = base();
    d["experiment"] = "diffusion-sweep";
    d["force"] = "nm";
    d.erase("n_steps");
    d["diffusion"] = {{"replicas", 10}, {"tau_neq", 0.5}, {"tau_sim", 10}};
    CHECK(error_of(d).find("diffusion.tau_neq") != std::string::npos);
    d["diffusion"] = {{"replicas", 10}, {"tau_neq", 1}, {"tau_sim", 10}, {"fit_max_eta", 0.3}};
    d["eta"] = {{"values", {0.0, 0.25, 0.5, 1.0}}};
    CHECK(error_of(d).find("fit_max_eta") != std::string::npos);
    d = base();
    d["experiment"] = "resonance-scan";
    d["force"] = "nm";
    d["resonance"] = {{"frequencies", {1.0}}, {"sim_time", 10}};
    CHECK(error_of(d).find("force.modulation") != std::string::npos);
}

TEST_CASE("profiles are merge patches with desk as default") {
    json d = base();
    d["profiles"] = {{"desk", {{"n_steps", 25600}}}, {"paper", {{"n_steps", 51200}, {"eta", {{"count", 5}}}}}};
    CHECK(parse_config(d).n_steps == 25600);
    ConfigOverrides ov;
    ov.profile = "paper";
    const ExperimentConfig p = parse_config(d, ov);
    CHECK(p.n_steps == 51200);
    CHECK(p.etas.size() == 5);
    CHECK(p.resolved["profile"] == "paper");
    ov.profile = "nope";
    CHECK_THROWS_AS(parse_config(d, ov), ConfigError);
}

TEST_CASE("seed precedence: flag, then environment, then file") {
    ::setenv("LANGESIM_SEED", "77", 1);
    CHECK(parse_config(base()).seed == 77);
    ConfigOverrides ov;
    ov.seed = 3;
    CHECK(parse_config(base(), ov).seed == 3);
    ::setenv("LANGESIM_SEED", "x1", 1);
    CHECK_THROWS_AS(parse_config(base()), ConfigError);
    ::unsetenv("LANGESIM_SEED");
    CHECK(parse_config(base()).seed == 5);
}

TEST_CASE("frequency scan time step refinement") {
    ResonanceSettings r;
    r.dt_rules = {{1.0, std::nullopt, 0.001}, {std::nullopt, 20.0, 0.025}};
    CHECK(scan_time_step(r, 0.01, 0.5) == doctest::Approx(0.001));
    CHECK(scan_time_step(r, 0.01, 40.0) == doctest::Approx(0.025));
    const double dt = scan_time_step(r, 0.01, 1.0 / 0.45);
    CHECK(dt <= 0.01);
    const double steps = (1.0 / 0.45) / dt;
    CHECK(std::abs(steps - std::round(steps)) < 1e-9);
}

}  // TEST_SUITE
