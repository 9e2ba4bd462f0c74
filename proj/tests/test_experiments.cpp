#include <sstream>
#include <string>

#include "doctest.h"

#include "langesim/experiments.hpp"

using namespace langesim;
using nlohmann::json;

namespace {

json small(const std::string& experiment, const std::string& force) {
    return {{"experiment", experiment},
            {"force", force},
            {"eta", {{"max", 0.6}, {"count", 3}}},
            {"n_steps", 4000},
            {"burn_in_steps", 200},
            {"batches", 8},
            {"seed", 21}};
}

std::string csv_of(const ExperimentConfig& cfg, const ExecPolicy& policy) {
    std::ostringstream os;
    run_and_write(cfg, os, policy);
    return os.str();
}

std::string first_data_line(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') return line;
    return "";
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("linear response CSV layout and determinism") {
    const ExperimentConfig cfg = parse_config(small("linear-response", "cosine-mode(1)"));
    const std::string a = csv_of(cfg, ExecPolicy::serial());
    CHECK(a.rfind("# langesim = ", 0) == 0);
    CHECK(a.find("# experiment = linear-response") != std::string::npos);
    CHECK(a.find("# config = {") != std::string::npos);
    CHECK(first_data_line(a) == "eta,mean_vx,mean_vy,stderr_x,stderr_y");
    CHECK(a.find("# slope_x = ") != std::string::npos);
    CHECK(a == csv_of(cfg, ExecPolicy::serial()));
    CHECK(a == csv_of(cfg, ExecPolicy::parallel(3)));
}

TEST_CASE("different seeds give different output") {
    json d = small("linear-response", "cosine-mode(1)");
    const std::string a = csv_of(parse_config(d), ExecPolicy::serial());
    d["seed"] = 22;
    CHECK(a != csv_of(parse_config(d), ExecPolicy::serial()));
}

TEST_CASE("zero force gives a null slope") {
    json d = small("linear-response", "zero");
    d["n_steps"] = 200000;
    d["batches"] = 32;
    const LinearResponseResult r = run_linear_response(parse_config(d));
    for (int k = 0; k < 2; ++k) CHECK(std::abs(r.fit.slope(k)) <= 4.0 * r.fit.slope_std_error(k));
}

TEST_CASE("constant force: velocity and force share their sign") {
    json d = small("negative-mobility", "constant-dir(0)");
    d["n_steps"] = 2000000;
    d["batches"] = 16;
    const NegativeMobilityResult r = run_negative_mobility(parse_config(d));
    CHECK(r.fit.slope(0) > 0.0);
    for (const auto& row : r.rows) CHECK(row.force(0) == 1.0);
    CHECK_FALSE(r.negative_mobility);
    std::ostringstream os;
    write_csv(os, parse_config(d), r);
    CHECK(first_data_line(os.str()) == "eta,mean_vx,mean_vy,force_x,force_y,stderr_vx,stderr_vy,stderr_fx,stderr_fy");
    CHECK(os.str().find("# negative_mobility = false") != std::string::npos);
}

TEST_CASE("resonance scan and diffusion sweep layouts") {
    json r = small("resonance-scan", "constant-dir");
    r.erase("n_steps");
    r["batches"] = 2;
    r["resonance"] = {{"frequencies", {0.5, 2.0, 4.0}}, {"sim_time", 20}, {"tail", {{"min", 0.5}, {"max", 4}}}};
    const ExperimentConfig rc = parse_config(r);
    const std::string rs = csv_of(rc, ExecPolicy::serial());
    CHECK(first_data_line(rs) ==
          "frequency,dt,amplitude_x,stderr_x,re_x,im_x,re_stderr_x,im_stderr_x,amplitude_y,stderr_y,re_y,im_y,"
          "re_stderr_y,im_stderr_y");
    CHECK(rs.find("# tail_slope_x = ") != std::string::npos);
    CHECK(rs == csv_of(rc, ExecPolicy::parallel(2)));

    json d = small("diffusion-sweep", "nm");
    d.erase("n_steps");
    d["eta"] = {{"values", {0.0, 0.25, 0.5, 1.0}}};
    d["diffusion"] = {{"replicas", 16}, {"tau_neq", 1}, {"tau_sim", 4}, {"fit_max_eta", 0.5}};
    const ExperimentConfig dc = parse_config(d);
    const std::string ds = csv_of(dc, ExecPolicy::serial());
    CHECK(first_data_line(ds) == "eta,D_xx,D_xy,D_yy,V_x,V_y,eig1,eig2,stderr_D_xx,stderr_D_xy,stderr_D_yy,"
                                 "stderr_V_x,stderr_V_y,nonpositive");
    CHECK(ds.find("# fit_max_eta = 0.5") != std::string::npos);
    CHECK(ds == csv_of(dc, ExecPolicy::parallel(2)));
}

TEST_CASE("blow-up propagates as NumericalBlowup") {
    json d = small("linear-response", "nm");
    d["eta"] = {{"values", {1e200, 2e200, 3e200}}};
    CHECK_THROWS_AS(run_linear_response(parse_config(d)), NumericalBlowup);
}

}  // TEST_SUITE
