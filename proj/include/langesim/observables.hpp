#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "langesim/force_field.hpp"
#include "langesim/integrator.hpp"
#include "langesim/stats.hpp"

namespace langesim {

// Per-phase velocity statistics over one forcing period. Bin i collects the
// velocities M^{-1} p^n of all steps with n mod I = i, so after N steps with
// I | N every bin holds N / I samples. Each bin keeps a running mean and
// sum of squared deviations per component.
class VelocityProfile {
public:
    VelocityProfile(int dim, std::int64_t bins);

    int dim() const { return dim_; }
    std::int64_t bins() const { return bins_; }

    void add(std::int64_t bin, const double* v) {
        auto& n = counts_[static_cast<std::size_t>(bin)];
        ++n;
        const double inv_n = 1.0 / static_cast<double>(n);
        double* mean = &means_[static_cast<std::size_t>(bin * dim_)];
        double* m2 = &m2_[static_cast<std::size_t>(bin * dim_)];
        for (int k = 0; k < dim_; ++k) {
            const double d = v[k] - mean[k];
            mean[k] += d * inv_n;
            m2[k] += d * (v[k] - mean[k]);
        }
    }
    void add(std::int64_t bin, const Vec& v) { add(bin, v.data()); }

    // Pools the samples of `other` (same shape) into this profile.
    void merge(const VelocityProfile& other);

    std::int64_t count(std::int64_t bin) const { return counts_[static_cast<std::size_t>(bin)]; }
    std::int64_t total_count() const;
    Vec mean(std::int64_t bin) const;
    // Unbiased per-component sample variance of the bin.
    Vec variance(std::int64_t bin) const;

private:
    int dim_;
    std::int64_t bins_;
    std::vector<std::int64_t> counts_;
    std::vector<double> means_;
    std::vector<double> m2_;
};

struct BinVelocity {
    double tau = 0.0;  // phase time i dt
    Vec mean;
    Vec std_error;
};

// Bin means with their standard errors sqrt(var / count). Throws
// EmptyBinError unless every bin holds at least two samples.
std::vector<BinVelocity> stroboscopic_velocity(const VelocityProfile& profile, double dt);

// (1/I) sum_i mean_i e^{-2 pi i k i / I} over the bin means. Requires equal,
// nonzero bin counts and 0 <= k < I.
CVec mode_amplitude(const VelocityProfile& profile, std::int64_t k);

// Mean over all bins of the bin means (the time-averaged velocity).
Vec period_average(const VelocityProfile& profile);

// Non-overlapping batch means of a vector time series. The standard error of
// the overall mean is sd(batch means) / sqrt(number of complete batches).
class BatchMeans {
public:
    BatchMeans(int dim, std::int64_t batch_length);

    void add(const double* x) {
        for (int k = 0; k < dim_; ++k) current_[static_cast<std::size_t>(k)] += x[k];
        if (++in_current_ == batch_length_) close_batch();
    }
    void add(const Vec& x) { add(x.data()); }

    // Pools completed batches and totals. A partial batch of `other` counts
    // toward the mean only.
    void merge(const BatchMeans& other);

    int dim() const { return dim_; }
    std::int64_t batch_length() const { return batch_length_; }
    std::int64_t samples() const { return samples_ + in_current_; }
    std::int64_t batches() const { return batch_stats_.empty() ? 0 : batch_stats_[0].count(); }

    // Mean of every sample added (complete and partial batches).
    Vec mean() const;
    // Throws EmptyBinError with fewer than two complete batches.
    Vec std_error() const;

private:
    void close_batch();

    int dim_;
    std::int64_t batch_length_;
    std::int64_t in_current_ = 0;
    std::int64_t samples_ = 0;
    std::vector<double> current_;
    std::vector<double> totals_;
    std::vector<RunningStats> batch_stats_;
};

// Batch length for roughly `target_batches` batches of whole periods over
// n_steps steps with `steps_per_period` steps per period.
std::int64_t period_batch_length(std::int64_t n_steps, std::int64_t steps_per_period, std::int64_t target_batches);

// Run sink feeding M^{-1} p into a velocity profile (bin n mod I) and, when
// given, into a batch-means accumulator.
class VelocitySink {
public:
    VelocitySink(const SystemParams& params, VelocityProfile& profile, BatchMeans* batches = nullptr);

    void operator()(std::int64_t step_index, const PhaseState& s) {
        double v[kMaxDim];
        velocity(s, v);
        profile_->add(step_index % bins_, v);
        if (batches_) batches_->add(v);
    }

private:
    void velocity(const PhaseState& s, double* v) const {
        if (scalar_) {
            for (int k = 0; k < dim_; ++k) v[k] = minv_s_ * s.p(k);
        } else {
            const Vec u = minv_ * s.p;
            for (int k = 0; k < dim_; ++k) v[k] = u(k);
        }
    }

    VelocityProfile* profile_;
    BatchMeans* batches_;
    std::int64_t bins_;
    int dim_;
    bool scalar_;
    double minv_s_ = 1.0;
    Mat minv_;
};

struct MeanWithError {
    Vec mean;
    Vec std_error;
};

// Run sink accumulating the time-averaged force F_0(q^n) felt along a
// trajectory.
class ExperiencedForce {
public:
    ExperiencedForce(const ForceField& field, const Potential& pot, std::int64_t batch_length);

    void operator()(std::int64_t, const PhaseState& s) {
        double f[kMaxDim] = {};
        if (active_) {
            const AxisTrig t = axis_trig(s.q);
            field_.spatial(t, field_.uses_potential() ? potential_.value(t) : 0.0, f);
            for (int k = 0; k < t.dim; ++k) f[k] *= mean_g_;
        }
        batches_.add(f);
    }

    void merge(const ExperiencedForce& other) { batches_.merge(other.batches_); }
    const BatchMeans& batches() const { return batches_; }

private:
    ForceField field_;
    Potential potential_;
    double mean_g_;
    bool active_;
    BatchMeans batches_;
};

// Mean of F_0(q^n) with its batch-means standard error (zero error and the
// plain mean when fewer than two batches are complete). Throws EmptyBinError
// without samples.
MeanWithError mean_experienced_force(const ExperiencedForce& sink);

struct ResponseFit {
    Vec slope;
    Vec intercept;  // zero when fitted through the origin
    Vec slope_std_error;
    Vec intercept_std_error;
    Vec rss;
};

// Per-component least squares of mean velocity against eta, with intercept
// unless `through_origin`. Optional weights are relative (the covariance is
// scaled by the residuals). Throws RankDeficientError with fewer than three
// distinct eta values.
ResponseFit fit_linear_response(std::span<const double> etas, std::span<const Vec> means,
                                std::span<const double> weights = {}, bool through_origin = false);

// Linear response of a complex amplitude, fitted separately on the real and
// imaginary parts. The modulus error is propagated to first order.
struct ComplexResponseFit {
    CVec slope;
    Vec real_std_error;
    Vec imag_std_error;
    Vec modulus;
    Vec modulus_std_error;
};

ComplexResponseFit fit_complex_response(std::span<const double> etas, std::span<const CVec> amplitudes);

}  // namespace langesim
