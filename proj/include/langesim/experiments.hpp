#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "langesim/config.hpp"
#include "langesim/diffusion.hpp"
#include "langesim/ensemble.hpp"
#include "langesim/observables.hpp"

namespace langesim {

using ProgressFn = std::function<void(const std::string&)>;

// Statistics of one forced trajectory at a single eta.
struct EtaRun {
    VelocityProfile profile;
    BatchMeans velocity;
    std::optional<ExperiencedForce> force;
};

// Draws the initial state from `rng`, discards `burn_in` steps, then records
// `n_steps` steps. The experienced force is tracked when `track_force`.
EtaRun simulate_eta(const SplittingIntegrator& integrator, std::int64_t burn_in, std::int64_t n_steps,
                    std::int64_t target_batches, RandomStream& rng, bool track_force);

struct LinearResponseRow {
    double eta = 0.0;
    Vec mean;
    Vec std_error;
};

struct LinearResponseResult {
    std::vector<LinearResponseRow> rows;
    ResponseFit fit;
    std::int64_t total_steps = 0;
    double seconds = 0.0;
};

struct NegativeMobilityRow {
    double eta = 0.0;
    Vec mean_velocity;
    Vec velocity_std_error;
    Vec force;
    Vec force_std_error;
};

struct NegativeMobilityResult {
    std::vector<NegativeMobilityRow> rows;
    ResponseFit fit;
    bool negative_mobility = false;  // sign(slope_x) != sign(experienced F_x) for every eta
    double slope_z = 0.0;            // |slope_x| / stderr
    double force_z_min = 0.0;        // min over eta of |F_x| / stderr
    std::int64_t total_steps = 0;
    double seconds = 0.0;
};

struct ResonanceRow {
    double frequency = 0.0;  // omega / (2 pi)
    double dt = 0.0;
    std::int64_t steps_per_eta = 0;
    ComplexResponseFit fit;
};

struct TailFit {
    double slope = 0.0;
    double slope_std_error = 0.0;
    int points = 0;
};

struct ResonanceResult {
    std::vector<ResonanceRow> rows;
    double argmax_frequency = 0.0;  // of |V_x|
    std::optional<TailFit> tail;
    std::int64_t total_steps = 0;
    double seconds = 0.0;
};

struct DiffusionRow {
    double eta = 0.0;
    DiffusionEstimate estimate;
};

struct DiffusionSweepResult {
    std::vector<DiffusionRow> rows;
    QuadraticFit fit;  // of D_xx
    std::int64_t total_steps = 0;
    double seconds = 0.0;
};

// Eta point i uses derive_stream(seed, i). Deterministic given (config, seed).
LinearResponseResult run_linear_response(const ExperimentConfig& cfg, const ExecPolicy& policy = {},
                                         const ProgressFn& progress = {});
NegativeMobilityResult run_negative_mobility(const ExperimentConfig& cfg, const ExecPolicy& policy = {},
                                             const ProgressFn& progress = {});
// Frequency j and eta i use derive_stream(derive_seed(seed, j), i).
ResonanceResult run_resonance_scan(const ExperimentConfig& cfg, const ExecPolicy& policy = {},
                                   const ProgressFn& progress = {});
// Eta point i runs its replicas from master seed derive_seed(seed, i).
DiffusionSweepResult run_diffusion_sweep(const ExperimentConfig& cfg, const ExecPolicy& policy = {},
                                         const ProgressFn& progress = {});

// Log-log least squares of amplitude against frequency over [lo, hi].
std::optional<TailFit> fit_tail(std::span<const double> frequencies, std::span<const double> amplitudes, double lo,
                                double hi);

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const LinearResponseResult& r);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const NegativeMobilityResult& r);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const ResonanceResult& r);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const DiffusionSweepResult& r);

// Runs the configured experiment and writes its CSV to `out`.
void run_and_write(const ExperimentConfig& cfg, std::ostream& out, const ExecPolicy& policy = {},
                   const ProgressFn& progress = {});

}  // namespace langesim
