#include <cmath>
#include <vector>

#include "doctest.h"

#include "langesim/experiments.hpp"
#include "langesim/observables.hpp"
#include "langesim/stats.hpp"

using namespace langesim;

namespace {

Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

VelocityProfile profile_from(const std::vector<double>& xs, int periods = 1) {
    const auto I = static_cast<std::int64_t>(xs.size());
    VelocityProfile prof(2, I);
    for (int r = 0; r < periods; ++r)
        for (std::int64_t i = 0; i < I; ++i) prof.add(i, vec2(xs[static_cast<std::size_t>(i)], 0.0));
    return prof;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("constant momenta give exact bin means and zero errors") {
    VelocityProfile prof(2, 4);
    for (int n = 0; n < 40; ++n) prof.add(n % 4, vec2(0.3, -1.2));
    const auto bins = stroboscopic_velocity(prof, 0.25);
    REQUIRE(bins.size() == 4);
    for (const auto& b : bins) {
        CHECK(b.mean(0) == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(b.mean(1) == doctest::Approx(-1.2).epsilon(1e-15));
        CHECK(b.std_error.norm() < 1e-15);
    }
    CHECK(bins[3].tau == doctest::Approx(0.75));
}

TEST_CASE("empty or singleton bins are rejected") {
    VelocityProfile prof(2, 3);
    prof.add(0, vec2(1, 1));
    prof.add(1, vec2(1, 1));
    CHECK_THROWS_AS(stroboscopic_velocity(prof, 0.1), EmptyBinError);
    CHECK_THROWS_AS(mode_amplitude(prof, 1), EmptyBinError);
}

TEST_CASE("merge of halves equals the whole") {
    VelocityProfile whole(2, 5), a(2, 5), b(2, 5);
    for (int n = 0; n < 100; ++n) {
        const Vec v = vec2(std::sin(0.37 * n), std::cos(1.3 * n));
        whole.add(n % 5, v);
        (n < 50 ? a : b).add(n % 5, v);
    }
    a.merge(b);
    for (int i = 0; i < 5; ++i) {
        CHECK(a.count(i) == whole.count(i));
        CHECK((a.mean(i) - whole.mean(i)).norm() < 1e-14);
        CHECK((a.variance(i) - whole.variance(i)).norm() < 1e-13);
    }
}

TEST_CASE("sampled cosine is traced by the bin means") {
    const int I = 64;
    const double dt = 1.0 / I, omega = kTwoPi;
    VelocityProfile prof(2, I);
    for (int n = 0; n < 10 * I; ++n) prof.add(n % I, vec2(std::cos(omega * n * dt), 0.0));
    const auto bins = stroboscopic_velocity(prof, dt);
    for (int i = 0; i < I; ++i) CHECK(std::abs(bins[i].mean(0) - std::cos(omega * bins[i].tau)) < 1e-12);
}

TEST_CASE("DFT of cosine, sine and constant bin means") {
    const int I = 50;
    const double A = 0.7;
    std::vector<double> c(I), s(I), k(I, 2.5);
    for (int i = 0; i < I; ++i) {
        c[i] = A * std::cos(kTwoPi * i / I);
        s[i] = A * std::sin(kTwoPi * i / I);
    }
    const CVec mc = mode_amplitude(profile_from(c, 2), 1);
    CHECK(std::abs(mc(0).real() - A / 2) < 1e-12);
    CHECK(std::abs(mc(0).imag()) < 1e-12);
    const CVec ms = mode_amplitude(profile_from(s, 2), 1);
    CHECK(std::abs(ms(0).real()) < 1e-12);
    CHECK(std::abs(ms(0).imag() + A / 2) < 1e-12);
    const VelocityProfile pk = profile_from(k, 2);
    CHECK(std::abs(mode_amplitude(pk, 1)(0)) < 1e-12);
    CHECK(std::abs(mode_amplitude(pk, 0)(0) - 2.5) < 1e-12);
    CHECK_THROWS_AS(mode_amplitude(pk, I), std::invalid_argument);
}

TEST_CASE("all modes reconstruct the bin means") {
    const int I = 16;
    std::vector<double> x(I);
    for (int i = 0; i < I; ++i) x[i] = std::sin(0.9 * i * i) + 0.1 * i;
    const VelocityProfile prof = profile_from(x);
    std::vector<CVec> modes;
    for (int k = 0; k < I; ++k) modes.push_back(mode_amplitude(prof, k));
    for (int i = 0; i < I; ++i) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < I; ++k) acc += modes[k](0) * std::polar(1.0, kTwoPi * k * i / I);
        CHECK(std::abs(acc.real() - x[i]) < 1e-10);
        CHECK(std::abs(acc.imag()) < 1e-10);
    }
}

TEST_CASE("linear response fit on exact data") {
    const std::vector<double> eta = {0.1, 0.2, 0.3, 0.4};
    std::vector<Vec> y, z;
    for (double e : eta) {
        y.push_back(vec2(2.0 * e, -e));
        z.push_back(vec2(2.0 * e + 0.1, 0.0));
    }
    const ResponseFit a = fit_linear_response(eta, y);
    CHECK(a.slope(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(a.intercept(0)) < 1e-12);
    CHECK(a.rss(0) < 1e-24);
    CHECK(a.slope(1) == doctest::Approx(-1.0).epsilon(1e-12));
    const ResponseFit b = fit_linear_response(eta, z);
    CHECK(b.slope(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.intercept(0) == doctest::Approx(0.1).epsilon(1e-12));
    const ResponseFit o = fit_linear_response(eta, y, {}, true);
    CHECK(o.slope(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(o.intercept(0) == 0.0);
}

TEST_CASE("fit scales linearly and leaves orthogonal residuals") {
    const std::vector<double> eta = {0.1, 0.25, 0.3, 0.55, 0.8};
    std::vector<Vec> y, y3;
    for (double e : eta) {
        y.push_back(vec2(std::sin(7 * e), std::cos(3 * e)));
        y3.push_back(3.0 * y.back());
    }
    const ResponseFit a = fit_linear_response(eta, y), b = fit_linear_response(eta, y3);
    CHECK(b.slope(0) == doctest::Approx(3.0 * a.slope(0)).epsilon(1e-13));
    CHECK(b.intercept(1) == doctest::Approx(3.0 * a.intercept(1)).epsilon(1e-13));
    double r0 = 0.0, r1 = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double r = y[i](0) - a.intercept(0) - a.slope(0) * eta[i];
        r0 += r;
        r1 += r * eta[i];
        scale += std::abs(y[i](0));
    }
    CHECK(std::abs(r0) < 1e-10 * scale);
    CHECK(std::abs(r1) < 1e-10 * scale);
}

TEST_CASE("fits need three distinct eta") {
    const std::vector<double> eta = {0.0, 0.0, 0.0};
    const std::vector<Vec> y(3, vec2(0, 0));
    CHECK_THROWS_AS(fit_linear_response(eta, y), RankDeficientError);
    const std::vector<double> two = {0.1, 0.2, 0.2};
    CHECK_THROWS_AS(fit_linear_response(two, y), RankDeficientError);
}

TEST_CASE("polyfit recovers a quadratic and reports rank deficiency") {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double v : x) y.push_back(1.0 - 0.5 * v + 0.25 * v * v);
    const PolyFit p = polyfit(x, y, 2);
    CHECK(p.coef[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.coef[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(p.coef[2] == doctest::Approx(0.25).epsilon(1e-12));
    const std::vector<double> flat = {1, 1, 2, 2};
    CHECK_THROWS_AS(polyfit(flat, std::vector<double>{0, 0, 0, 0}, 2), RankDeficientError);
}

TEST_CASE("batch means error matches the iid formula for independent data") {
    RandomStream rng(4, 2);
    BatchMeans bm(1, 100);
    RunningStats rs;
    for (int i = 0; i < 100000; ++i) {
        const double g = rng.normal();
        bm.add(&g);
        rs.add(g);
    }
    CHECK(bm.batches() == 1000);
    CHECK(bm.mean()(0) == doctest::Approx(rs.mean()).epsilon(1e-12));
    CHECK(bm.std_error()(0) == doctest::Approx(std::sqrt(rs.variance() / 1e5)).epsilon(0.1));
    CHECK(period_batch_length(64000, 100, 64) % 100 == 0);
}

TEST_CASE("experienced force of a constant field is exact") {
    SystemParamsInit init;
    const SystemParams p(init);
    const Potential v = Potential::from_descriptor("cos2d");
    const ForceField f(parse_force_tag("constant-dir(0)"), v, p);
    ExperiencedForce sink(f, v, 10);
    PhaseState s = PhaseState::at(vec2(1, 2), vec2(0, 0));
    for (int i = 0; i < 100; ++i) sink(i, s);
    const MeanWithError m = mean_experienced_force(sink);
    CHECK(m.mean(0) == 1.0);
    CHECK(m.mean(1) == 0.0);
    ExperiencedForce empty(f, v, 10);
    sink.merge(empty);
    CHECK(mean_experienced_force(sink).mean(0) == 1.0);
}

TEST_CASE("complex response fit") {
    const std::vector<double> eta = {0.1, 0.2, 0.3};
    std::vector<CVec> a;
    for (double e : eta) {
        CVec c(2);
        c << std::complex<double>(3 * e, -4 * e), std::complex<double>(0, 0);
        a.push_back(c);
    }
    const ComplexResponseFit f = fit_complex_response(eta, a);
    CHECK(f.modulus(0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(f.slope(0).imag() == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("tail fit of a power law") {
    const std::vector<double> f = {0.5, 1, 2, 4, 8, 16};
    std::vector<double> a;
    for (double x : f) a.push_back(0.3 * std::pow(x, -1.5));
    const auto t = fit_tail(f, a, 1.0, 16.0);
    REQUIRE(t.has_value());
    CHECK(t->slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(t->points == 5);
    CHECK_FALSE(fit_tail(f, a, 10.0, 20.0).has_value());
}

}  // TEST_SUITE
