#include <cmath>

#include "doctest.h"

#include "langesim/diffusion.hpp"

using namespace langesim;

namespace {

Mat mat2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

SystemParams params2() { return SystemParams(SystemParamsInit{}); }

// Exact Brownian displacements with covariance 2 D t.
DisplacementSet brownian(std::int64_t replicas, const Mat& D, double t, std::uint64_t seed, std::int64_t first = 0) {
    const Mat L = (2.0 * t * D).llt().matrixL();
    DisplacementSet set(2);
    for (std::int64_t k = first; k < first + replicas; ++k) {
        RandomStream rng = derive_stream(seed, static_cast<std::uint64_t>(k));
        Vec g(2);
        rng.fill_normal(g);
        set.add(L * g);
    }
    return set;
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("spectrum examples") {
    CHECK(spectrum(mat2(1, 0, 0, 1)) == std::vector<double>{1.0, 1.0});
    CHECK(spectrum(mat2(3, 0, 0, 1)) == std::vector<double>{3.0, 1.0});
    const auto ev = spectrum(mat2(2, 1, 1, 2));
    CHECK(ev[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(spectrum(mat2(2, 1, 0.5, 2)), AsymmetryError);
    Mat m3 = Mat::Zero(3, 3);
    m3.diagonal() << 1.0, 5.0, 2.0;
    CHECK(spectrum(m3) == std::vector<double>{5.0, 2.0, 1.0});
}

TEST_CASE("estimator recovers the diffusion of exact Brownian replicas") {
    const Mat D = mat2(1.0, 0.0, 0.0, 0.25);
    const DisplacementSet set = brownian(10000, D, 3.0, 42);
    const DiffusionEstimate e = estimate_from_displacements(set, 3.0);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) CHECK(std::abs(e.diffusion(j, k) - D(j, k)) <= 3.0 * e.diffusion_std_error(j, k));
    CHECK(e.diffusion(0, 1) == e.diffusion(1, 0));
    CHECK((e.diffusion - e.diffusion.transpose()).norm() == 0.0);
    CHECK(e.diffusion_std_error(0, 0) == doctest::Approx(std::sqrt(2.0 / 10000)).epsilon(0.1));
    CHECK_FALSE(e.nonpositive);
}

TEST_CASE("replica merge gives the same estimate") {
    const Mat D = mat2(0.5, 0.1, 0.1, 0.3);
    const DisplacementSet whole = brownian(1000, D, 2.0, 7);
    DisplacementSet a = brownian(500, D, 2.0, 7), b = brownian(500, D, 2.0, 7, 500);
    a.merge(b);
    const DiffusionEstimate x = estimate_from_displacements(whole, 2.0), y = estimate_from_displacements(a, 2.0);
    CHECK(x.diffusion == y.diffusion);
    CHECK(x.drift == y.drift);
}

TEST_CASE("disjoint seeds agree within combined errors") {
    const Mat D = mat2(1.0, 0.0, 0.0, 0.25);
    const auto x = estimate_from_displacements(brownian(5000, D, 1.0, 1), 1.0);
    const auto y = estimate_from_displacements(brownian(5000, D, 1.0, 2), 1.0);
    for (int j = 0; j < 2; ++j)
        CHECK(std::abs(x.diffusion(j, j) - y.diffusion(j, j)) <=
              4.0 * std::hypot(x.diffusion_std_error(j, j), y.diffusion_std_error(j, j)));
}

TEST_CASE("replica plan validation names the field") {
    const SystemParams p = params2();
    CHECK_THROWS_WITH_AS(make_replica_plan(p, 1, 0.0, 10.0), doctest::Contains("diffusion.replicas"), ConfigError);
    CHECK_THROWS_WITH_AS(make_replica_plan(p, 10, 0.5, 10.0), doctest::Contains("diffusion.tau_neq"), ConfigError);
    CHECK_THROWS_WITH_AS(make_replica_plan(p, 10, 1.0, 10.005), doctest::Contains("diffusion.tau_sim"), ConfigError);
    const ReplicaPlan plan = make_replica_plan(p, 10, 2.0, 10.0);
    CHECK(plan.burn_in_steps == 200);
    CHECK(plan.sample_steps == 1000);
}

TEST_CASE("serial and parallel replica runs are bit-identical") {
    const SystemParams p = params2();
    const Potential v = Potential::from_descriptor("cos2d");
    const ForceField f(parse_force_tag("nm"), v, p);
    const auto a = estimate_drift_diffusion(p, v, f, 0.5, 64, 1.0, 5.0, 9, ExecPolicy::serial());
    const auto b = estimate_drift_diffusion(p, v, f, 0.5, 64, 1.0, 5.0, 9, ExecPolicy::parallel(3));
    CHECK(a.diffusion == b.diffusion);
    CHECK(a.drift == b.drift);
    CHECK(a.diffusion_std_error == b.diffusion_std_error);
}

TEST_CASE("equilibrium drift vanishes") {
    const SystemParams p = params2();
    const Potential v = Potential::from_descriptor("cos2d");
    const auto e = estimate_drift_diffusion(p, v, ForceField(p), 0.0, 400, 0.0, 20.0, 3);
    for (int k = 0; k < 2; ++k) CHECK(std::abs(e.drift(k)) <= 4.0 * e.drift_std_error(k));
}

TEST_CASE("quadratic fit on exact data") {
    const std::vector<double> eta = {0.0, 0.1, 0.2, 0.5, 1.0};
    std::vector<double> q, l;
    for (double e : eta) {
        q.push_back(1.0 + 2.0 * e * e);
        l.push_back(1.0 + 0.5 * e);
    }
    const QuadraticFit a = quadratic_fit(eta, q, {});
    CHECK(a.d0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(a.a) < 1e-12);
    CHECK(a.b == doctest::Approx(2.0).epsilon(1e-12));
    const QuadraticFit b = quadratic_fit(eta, l, {});
    CHECK(b.a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(b.b) < 1e-12);
    const std::vector<double> two = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(quadratic_fit(two, std::vector<double>{1, 2, 2}, {}), RankDeficientError);
}

}  // TEST_SUITE
