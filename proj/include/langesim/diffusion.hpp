#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "langesim/ensemble.hpp"
#include "langesim/integrator.hpp"

namespace langesim {

// Unwrapped displacements of independent replicas, one row per replica in
// replica order. Merging concatenates.
class DisplacementSet {
public:
    explicit DisplacementSet(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()) / dim_; }

    void add(const Vec& dq) {
        for (int k = 0; k < dim_; ++k) data_.push_back(dq(k));
    }
    void merge(const DisplacementSet& other);
    double operator()(std::int64_t replica, int axis) const {
        return data_[static_cast<std::size_t>(replica * dim_ + axis)];
    }

private:
    int dim_;
    std::vector<double> data_;
};

struct DiffusionEstimate {
    Vec drift;
    Vec drift_std_error;
    Mat diffusion;  // symmetric by construction
    Mat diffusion_std_error;
    std::vector<double> eigenvalues;  // descending
    bool nonpositive = false;         // smallest eigenvalue <= 0
    std::int64_t replicas = 0;
    double tau_neq = 0.0;
    double tau_sim = 0.0;
};

// drift = mean / tau_sim and diffusion = (1/M) sum (dQ - mean)(dQ - mean)^T / (2 tau_sim).
// Entry-wise standard errors by the delta method on the fourth moments.
DiffusionEstimate estimate_from_displacements(const DisplacementSet& set, double tau_sim);

// Eigenvalues of a symmetric matrix in descending order. Throws
// AsymmetryError when |D - D^T| > 1e-12 |D|.
std::vector<double> spectrum(const Mat& D);

// q uniform in the cell and p ~ N(0, M / beta), drawn from `rng`.
PhaseState draw_initial_state(const SystemParams& params, RandomStream& rng);

struct ReplicaPlan {
    std::int64_t replicas = 0;
    std::int64_t burn_in_steps = 0;
    std::int64_t sample_steps = 0;
};

// Validates tau_neq and tau_sim against dt and the period and converts them to
// step counts.
ReplicaPlan make_replica_plan(const SystemParams& params, std::int64_t replicas, double tau_neq, double tau_sim);

// Replica k draws its initial state from derive_stream(master_seed, k), runs
// the burn-in, restarts the unwrapped position at q and records Q after the
// sampling span.
DisplacementSet replica_displacements(const SplittingIntegrator& integrator, const ReplicaPlan& plan,
                                      std::uint64_t master_seed, const ExecPolicy& policy,
                                      std::int64_t first_replica = 0);

DiffusionEstimate estimate_drift_diffusion(const SystemParams& params, const Potential& pot, const ForceField& field,
                                           double eta, std::int64_t replicas, double tau_neq, double tau_sim,
                                           std::uint64_t master_seed, const ExecPolicy& policy = {});

struct QuadraticFit {
    double d0 = 0.0, a = 0.0, b = 0.0;
    double d0_std_error = 0.0, a_std_error = 0.0, b_std_error = 0.0;
    double chi2 = 0.0;
    int dof = 0;
};

// Weighted least squares of D(eta) = d0 + a eta + b eta^2 with absolute
// errors `errs` (ordinary least squares when empty).
QuadraticFit quadratic_fit(std::span<const double> etas, std::span<const double> values,
                           std::span<const double> errs);

}  // namespace langesim
