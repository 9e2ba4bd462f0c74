#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "langesim/force_field.hpp"
#include "langesim/params.hpp"
#include "langesim/potential.hpp"
#include "langesim/trig.hpp"

using namespace langesim;

namespace {

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

SystemParams params2(double period = 1.0, double dt = 0.01) {
    SystemParamsInit init;
    init.period = period;
    init.dt = dt;
    return SystemParams(init);
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("sincos_reduced agrees with libm to a few ulp") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> wide(-2.0e4, 2.0e4), narrow(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double x = i % 2 ? wide(gen) : narrow(gen);
        double s, c;
        sincos_reduced(x, s, c);
        worst = std::max({worst, std::abs(s - std::sin(x)), std::abs(c - std::cos(x))});
    }
    CHECK(worst < 4.0e-16);
    double s, c;
    sincos_reduced(0.0, s, c);
    CHECK(s == 0.0);
    CHECK(c == 1.0);
}

TEST_CASE("cos2d value and gradient") {
    const Potential v = Potential::from_descriptor("cos2d");
    CHECK(v.value(vec2(0.0, 0.0)) == doctest::Approx(4.0));
    const Vec g = v.gradient(vec2(M_PI / 4, 0.0));
    CHECK(g(0) == doctest::Approx(-4.0 - std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(g(1) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
}

TEST_CASE("gradients match central differences") {
    const double h = 1e-6;
    for (const char* tag : {"cos2d", "separable", "zero"}) {
        const Potential v = Potential::from_descriptor(tag);
        for (const Vec& q : {vec2(0.3, 1.7), vec2(4.0, 5.5), vec2(2.2, 0.1)}) {
            const Vec g = v.gradient(q);
            for (int k = 0; k < 2; ++k) {
                Vec a = q, b = q;
                a(k) += h;
                b(k) -= h;
                CHECK(g(k) == doctest::Approx((v.value(a) - v.value(b)) / (2 * h)).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("unknown potential is a config error naming the field") {
    CHECK_THROWS_WITH_AS(Potential::from_descriptor("lj"), doctest::Contains("potential.kind"), ConfigError);
}

TEST_CASE("params validation names the offending field") {
    SystemParamsInit init;
    init.dt = 0.03;
    CHECK_THROWS_WITH_AS(SystemParams{init}, doctest::Contains("system.period"), ConfigError);
    init = {};
    init.beta = 0.0;
    CHECK_THROWS_WITH_AS(SystemParams{init}, doctest::Contains("system.beta"), ConfigError);
    init = {};
    Mat m(2, 2);
    m << 1.0, 2.0, 2.0, 1.0;
    init.mass = m;
    CHECK_THROWS_WITH_AS(SystemParams{init}, doctest::Contains("system.mass"), ConfigError);
    m << 1.0, 0.5, 0.4, 1.0;
    init.mass = m;
    CHECK_THROWS_WITH_AS(SystemParams{init}, doctest::Contains("symmetric"), ConfigError);
}

TEST_CASE("steps per period and scalar mass") {
    const SystemParams p = params2(1.0, 0.01);
    CHECK(p.steps_per_period() == 100);
    REQUIRE(p.scalar_mass().has_value());
    CHECK(*p.scalar_mass() == 1.0);
    CHECK(p.with_period(2.0, 0.001).steps_per_period() == 2000);
    CHECK(whole_steps(1000.0, 0.01) == std::optional<std::int64_t>(100000));
    CHECK_FALSE(whole_steps(0.015, 0.01).has_value());
}

TEST_CASE("force catalog values") {
    const SystemParams p = params2();
    const Potential v = Potential::from_descriptor("cos2d");
    const Vec q = vec2(0.4, 2.1);
    const double w = std::exp(v.value(q));

    const ForceField nm(parse_force_tag("nm"), v, p);
    CHECK(nm.modulation() == Modulation::none);
    CHECK(nm.spatial(q)(0) == doctest::Approx(w * (-1.0 + 3.0 * std::cos(0.8))).epsilon(1e-14));
    CHECK(nm.spatial(q)(1) == 0.0);

    const ForceField cm(parse_force_tag("cosine-mode(3)"), v, p);
    CHECK(cm.spatial(q)(0) == doctest::Approx(w * std::cos(1.2)).epsilon(1e-14));

    const ForceField sr(parse_force_tag("sr"), v, p);
    CHECK(sr.modulation() == Modulation::cosine);
    CHECK(sr.eval(0.25, q)(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sr.eval(0.5, q)(0) == doctest::Approx(-w * std::cos(0.8)).epsilon(1e-13));

    const ForceField cd(parse_force_tag("constant-dir"), v, p);
    CHECK(cd.modulation() == Modulation::cosine);
    CHECK(cd.eval(0.0, q)(0) == 1.0);
    const ForceField cd0(parse_force_tag("constant-dir(0)"), v, p);
    CHECK(cd0.modulation() == Modulation::none);
    CHECK(cd0.time_average(q)(0) == 1.0);

    const ForceField gr(parse_force_tag("gradient(cos-x+cos-y)"), v, p);
    CHECK(gr.spatial(q)(0) == doctest::Approx(std::sin(0.4)).epsilon(1e-14));
    CHECK(gr.spatial(q)(1) == doctest::Approx(std::sin(2.1)).epsilon(1e-14));

    CHECK(ForceField(parse_force_tag("zero"), v, p).is_zero());
    CHECK_THROWS_AS(parse_force_tag("warp(9)"), ConfigError);
}

TEST_CASE("modulated forcing has zero time average") {
    const SystemParams p = params2(0.5, 0.01);
    const Potential v = Potential::from_descriptor("cos2d");
    const ForceField sr(parse_force_tag("sr"), v, p);
    double acc = 0.0;
    for (std::int64_t i = 0; i < p.steps_per_period(); ++i) acc += sr.temporal_at_phase(i, p.steps_per_period());
    CHECK(std::abs(acc) < 1e-12);
    CHECK(sr.time_average(vec2(1.0, 1.0)).norm() == 0.0);
}

}  // TEST_SUITE
