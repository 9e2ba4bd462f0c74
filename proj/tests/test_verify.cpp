#include <cmath>
#include <sstream>

#include "doctest.h"

#include "langesim/verify.hpp"

using namespace langesim;

TEST_SUITE("verify") {

TEST_CASE("report pass flag follows the tolerance") {
    CHECK(make_report("o", "q", 1.04, 1.0, 0.0, 0.05).passed);
    CHECK_FALSE(make_report("o", "q", 1.06, 1.0, 0.0, 0.05).passed);
}

TEST_CASE("Euler-Maruyama step without noise by hand") {
    SystemParamsInit init;
    init.dim = 1;
    init.beta = 1e300;
    const SystemParams p(init);
    const EulerMaruyama em(p, Potential(), ForceField(p), 0.0);
    Vec q(1), v(1);
    q << 0.0;
    v << 1.0;
    RandomStream rng(1, 0);
    const PhaseState s = em.run(PhaseState::at(q, v), 1, rng);
    CHECK(s.q(0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(s.p(0) == doctest::Approx(0.99).epsilon(1e-14));
}

TEST_CASE("step-halving slope at small friction is three") {
    CHECK(step_halving_slope(1e-4, {0.02, 0.01, 0.005, 0.0025}) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("smoke run of every oracle") {
    const VerifySettings st = VerifySettings::smoke();
    const auto reports = run_oracles(oracle_names(), st, ExecPolicy::parallel(2));
    CHECK(reports.size() > 20);
    for (const auto& r : reports) {
        CHECK(std::isfinite(r.measured));
        if (r.oracle == "csv_reproducibility") CHECK(r.passed);
        if (r.quantity == "max_abs_difference_from_zero_field") CHECK(r.passed);
    }
    std::ostringstream a, b;
    write_report(a, reports, st.seed);
    write_report(b, run_oracles(oracle_names(), st, ExecPolicy::serial()), st.seed);
    CHECK(a.str() == b.str());
    CHECK_THROWS_AS(run_oracle("nope", st), ConfigError);
}

}  // TEST_SUITE
