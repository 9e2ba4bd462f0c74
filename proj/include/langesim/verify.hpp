#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "langesim/ensemble.hpp"
#include "langesim/experiments.hpp"
#include "langesim/integrator.hpp"

namespace langesim {

// One checked quantity. passed == |measured - reference| <= tolerance.
struct OracleReport {
    std::string oracle;
    std::string quantity;
    double measured = 0.0;
    double reference = 0.0;
    double std_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double seconds = 0.0;  // wall time of the whole oracle; not written to the CSV report
};

OracleReport make_report(std::string oracle, std::string quantity, double measured, double reference,
                         double std_error, double tolerance);

// Euler-Maruyama discretization of the same dynamics, kept only as an
// independent cross-check of the splitting scheme:
//   p' = p + dt (-grad V(q) + eta F(t, q) - gamma M^{-1} p) + sqrt(2 gamma dt / beta) G
//   q' = q + dt M^{-1} p
class EulerMaruyama {
public:
    EulerMaruyama(const SystemParams& params, const Potential& pot, const ForceField& field, double eta);

    const SystemParams& params() const { return forces_.params(); }

    template <class... Sinks>
    PhaseState run(PhaseState s, std::int64_t n_steps, RandomStream& rng, Sinks&... sinks) const {
        const int d = params().dim();
        Vec f(d), g(d), dq(d);
        for (std::int64_t k = 0; k < n_steps; ++k) {
            forces_.force(s.q, s.step_index, f);
            rng.fill_normal(g);
            dq.noalias() = dt_ * (minv_ * s.p);
            s.p += dt_ * (f - gamma_ * (minv_ * s.p)) + noise_ * g;
            s.q += dq;
            s.Q += dq;
            wrap_into_cell(s.q, s.winding, params().cell());
            ++s.step_index;
            if (!std::isfinite(s.p.sum() + s.Q.sum())) throw NumericalBlowup("Euler-Maruyama trajectory diverged", s.step_index);
            (sinks(s.step_index, s), ...);
        }
        return s;
    }

private:
    SplittingIntegrator forces_;
    Mat minv_;
    double dt_;
    double gamma_;
    double noise_;
};

// D = Id / (beta gamma) for V = 0, F = 0 from the replica estimator.
std::vector<OracleReport> free_diffusion_oracle(double beta, double gamma, std::int64_t replicas, double tau_sim,
                                                std::uint64_t seed, const ExecPolicy& policy = {});

// Linear response to -grad W on cos2d; the slope must vanish. For W = 0 the
// velocities must also equal those of the zero field bit for bit.
std::vector<OracleReport> gradient_force_null_drift(GradientSource source, double eta_max, int points,
                                                    std::int64_t n_steps, std::uint64_t seed,
                                                    const ExecPolicy& policy = {});

struct GibbsSettings {
    std::int64_t n_steps = 10'000'000;  // single long trajectory for the momentum moments
    std::int64_t chains = 20'000;       // independent equilibrium chains for the position histogram
    std::int64_t chain_steps = 1'000;
    int bins = 16;                      // per axis
};

// Momentum moments against N(0, M / beta) and a chi-square test of the
// position histogram against exp(-beta V) / Z at eta = 0.
std::vector<OracleReport> gibbs_marginal_check(const SystemParams& params, const Potential& pot,
                                               const GibbsSettings& settings, std::uint64_t seed,
                                               const ExecPolicy& policy = {});

struct EmSettings {
    int refinement = 10;                   // dt_em = dt / refinement
    std::int64_t n_steps = 10'000'000;     // splitting steps; Euler-Maruyama covers the same time
    std::int64_t burn_in_steps = 10'000;
    double window_time = 100.0;            // free-particle displacement windows
    std::int64_t windows = 2'000;
};

// Splitting scheme against Euler-Maruyama: mean |p|^2 on cos2d, v_x / eta for
// "nm" at eta = 0.5, and the free-particle diffusion coefficient.
std::vector<OracleReport> em_cross_check(const EmSettings& settings, std::uint64_t seed,
                                         const ExecPolicy& policy = {});

// Deterministic part (zero noise, eta = 0, cos2d): |one step of dt - two
// steps of dt/2| over a set of initial states, log-log slope against dt.
double step_halving_slope(double gamma, const std::vector<double>& dts);
std::vector<OracleReport> strang_order_check(const std::vector<double>& dts = {0.02, 0.01, 0.005, 0.0025});

// Runs a small configuration of every experiment twice serially and once in
// parallel and compares the CSV bytes.
std::vector<OracleReport> csv_reproducibility_check(std::uint64_t seed, const ExecPolicy& policy = {});

struct VerifySettings {
    std::uint64_t seed = 1;
    std::int64_t free_replicas = 10'000;
    double free_tau_sim = 1000.0;
    int gradient_points = 10;
    double gradient_eta_max = 1.0;
    std::int64_t gradient_steps = 4'000'000;
    GibbsSettings gibbs;
    EmSettings em;

    // Small sizes for unit tests; statistical checks are not meaningful.
    static VerifySettings smoke();
};

const std::vector<std::string>& oracle_names();

std::vector<OracleReport> run_oracle(const std::string& name, const VerifySettings& settings,
                                     const ExecPolicy& policy = {});
std::vector<OracleReport> run_oracles(const std::vector<std::string>& names, const VerifySettings& settings,
                                      const ExecPolicy& policy = {}, const ProgressFn& progress = {});

void write_report(std::ostream& out, const std::vector<OracleReport>& reports, std::uint64_t seed);

}  // namespace langesim
