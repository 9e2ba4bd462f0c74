#include <cmath>

#include "doctest.h"

#include "langesim/diffusion.hpp"
#include "langesim/integrator.hpp"
#include "langesim/random_stream.hpp"

using namespace langesim;

namespace {

Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

SystemParams make_params(int dim, double gamma = 1.0, double dt = 0.01, double period = 1.0) {
    SystemParamsInit init;
    init.dim = dim;
    init.gamma = gamma;
    init.dt = dt;
    init.period = period;
    return SystemParams(init);
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("hand-evaluated free step") {
    const SystemParams p = make_params(1);
    const SplittingIntegrator integ(p, Potential(), ForceField(p), 0.0);
    const double alpha = std::exp(-0.005);
    CHECK(integ.friction_factor()(0, 0) == doctest::Approx(alpha).epsilon(1e-15));
    const PhaseState s = integ.step(PhaseState::at(vec1(0.0), vec1(1.0)), vec1(0.0), vec1(0.0));
    CHECK(s.q(0) == doctest::Approx(0.01 * alpha).epsilon(1e-15));
    CHECK(s.q(0) == doctest::Approx(0.00995012479).epsilon(1e-9));
    CHECK(s.p(0) == doctest::Approx(alpha * alpha).epsilon(1e-15));
    CHECK(s.p(0) == doctest::Approx(0.9900498337).epsilon(1e-9));
    CHECK(s.Q(0) == s.q(0));
    CHECK(s.step_index == 1);
}

TEST_CASE("large friction annihilates momentum") {
    const SystemParams p = make_params(2, 1.0e4);
    const SplittingIntegrator integ(p, Potential(), ForceField(p), 0.0);
    const PhaseState s = integ.step(PhaseState::at(vec2(1.0, 1.0), vec2(3.0, -2.0)), vec2(0, 0), vec2(0, 0));
    CHECK(s.p.norm() < 1e-40);
}

TEST_CASE("noise factor preserves the Gibbs momentum covariance") {
    SystemParamsInit init;
    Mat m(2, 2);
    m << 2.0, 0.5, 0.5, 1.0;
    init.mass = m;
    init.beta = 2.0;
    init.gamma = 3.0;
    const SystemParams p(init);
    const SplittingIntegrator integ(p, Potential(), ForceField(p), 0.0);
    const Mat& a = integ.friction_factor();
    const Mat& s = integ.noise_factor();
    const Mat cov = m / p.beta();
    // O-step: p -> a p + s G keeps N(0, M / beta) invariant.
    const Mat image = a * cov * a.transpose() + s * s.transpose();
    CHECK((image - cov).norm() < 1e-13);
}

TEST_CASE("run reproduces step with the same normals") {
    const SystemParams p = make_params(2);
    const Potential v = Potential::from_descriptor("cos2d");
    const ForceField f(parse_force_tag("sr"), v, p);
    const SplittingIntegrator integ(p, v, f, 0.3);
    const PhaseState s0 = PhaseState::at(vec2(6.2, 0.1), vec2(1.5, -0.7));
    RandomStream a(5, 0), b(5, 0);
    const PhaseState fast = integ.run(s0, 500, a);
    PhaseState slow = s0;
    for (int k = 0; k < 500; ++k) {
        Vec g0(2), g1(2);
        b.fill_normal(g0);
        b.fill_normal(g1);
        slow = integ.step(slow, g0, g1);
    }
    CHECK(fast == slow);
    CHECK(a.normals_drawn() == 2000);
}

TEST_CASE("matrix-mass path matches the scalar path for mass = m Id") {
    SystemParamsInit init;
    init.mass = 2.0 * Mat::Identity(2, 2);
    const SystemParams scalar(init);
    init.mass = Mat(2, 2);
    (*init.mass) << 2.0, 1e-300, 1e-300, 2.0;
    const SystemParams general(init);
    REQUIRE_FALSE(general.scalar_mass().has_value());
    const Potential v = Potential::from_descriptor("cos2d");
    const SplittingIntegrator a(scalar, v, ForceField(scalar), 0.0), b(general, v, ForceField(general), 0.0);
    RandomStream ra(3, 1), rb(3, 1);
    const PhaseState s0 = PhaseState::at(vec2(1.0, 2.0), vec2(0.5, 0.5));
    const PhaseState x = a.run(s0, 200, ra), y = b.run(s0, 200, rb);
    CHECK((x.Q - y.Q).norm() < 1e-12);
    CHECK((x.p - y.p).norm() < 1e-12);
}

TEST_CASE("wrapping keeps q in the cell and Q consistent") {
    const SystemParams p = make_params(2);
    const SplittingIntegrator integ(p, Potential(), ForceField(p), 0.0);
    RandomStream rng(11, 0);
    PhaseState s = PhaseState::at(vec2(0.0, 6.28), vec2(40.0, -40.0));
    s = integ.run(s, 1000, rng);
    for (int k = 0; k < 2; ++k) {
        CHECK(s.q(k) >= 0.0);
        CHECK(s.q(k) < kTwoPi);
        const double unwrapped = s.q(k) + kTwoPi * static_cast<double>(s.winding(k));
        const double start = k == 0 ? 0.0 : 6.28;
        CHECK(s.Q(k) - start == doctest::Approx(unwrapped - start).epsilon(1e-9));
    }
    double x = kTwoPi;
    std::int64_t w = 0;
    wrap_axis(x, w, kTwoPi);
    CHECK(x == 0.0);
    CHECK(w == 1);
    x = -1e-18;
    w = 0;
    wrap_axis(x, w, kTwoPi);
    CHECK(x >= 0.0);
    CHECK(x < kTwoPi);
}

TEST_CASE("blow-up reports the step") {
    const SystemParams p = make_params(2, 1.0, 0.5, 1.0);
    const Potential v = Potential::from_descriptor("cos2d");
    const ForceField f(parse_force_tag("nm"), v, p);
    const SplittingIntegrator integ(p, v, f, 1.0e200);
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(integ.run(PhaseState::at(vec2(0.1, 0.1), vec2(0, 0)), 10, rng), NumericalBlowup);
}

TEST_CASE("draw_initial_state is deterministic per stream") {
    const SystemParams p = make_params(2);
    RandomStream a = derive_stream(9, 4), b = derive_stream(9, 4), c = derive_stream(9, 5);
    const PhaseState x = draw_initial_state(p, a), y = draw_initial_state(p, b), z = draw_initial_state(p, c);
    CHECK(x == y);
    CHECK_FALSE(x == z);
}

TEST_CASE("random streams") {
    RandomStream a(1, 0), b(1, 0), c(1, 1), d(2, 0);
    for (int i = 0; i < 10; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
        CHECK(va != d.next_u64());
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    RandomStream u(3, 3);
    double lo = 1.0, hi = 0.0, sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        const double g = u.normal();
        sum += g;
        sum2 += g * g;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

}  // TEST_SUITE
