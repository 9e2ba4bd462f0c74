#include "langesim/observables.hpp"

#include <cmath>
#include <string>

namespace langesim {

VelocityProfile::VelocityProfile(int dim, std::int64_t bins)
    : dim_(dim), bins_(bins) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("VelocityProfile: bad dimension");
    if (bins < 1) throw std::invalid_argument("VelocityProfile: need at least one bin");
    counts_.assign(static_cast<std::size_t>(bins), 0);
    means_.assign(static_cast<std::size_t>(bins * dim), 0.0);
    m2_.assign(static_cast<std::size_t>(bins * dim), 0.0);
}

void VelocityProfile::merge(const VelocityProfile& other) {
    if (other.dim_ != dim_ || other.bins_ != bins_)
        throw std::invalid_argument("VelocityProfile::merge: shape mismatch");
    for (std::int64_t b = 0; b < bins_; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        const std::int64_t nb = other.counts_[ub];
        if (nb == 0) continue;
        const std::int64_t na = counts_[ub];
        const double n = static_cast<double>(na + nb);
        for (int k = 0; k < dim_; ++k) {
            const auto i = static_cast<std::size_t>(b * dim_ + k);
            if (na == 0) {
                means_[i] = other.means_[i];
                m2_[i] = other.m2_[i];
                continue;
            }
            const double d = other.means_[i] - means_[i];
            means_[i] += d * static_cast<double>(nb) / n;
            m2_[i] += other.m2_[i] + d * d * static_cast<double>(na) * static_cast<double>(nb) / n;
        }
        counts_[ub] = na + nb;
    }
}

std::int64_t VelocityProfile::total_count() const {
    std::int64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
}

Vec VelocityProfile::mean(std::int64_t bin) const {
    Vec m(dim_);
    for (int k = 0; k < dim_; ++k) m(k) = means_[static_cast<std::size_t>(bin * dim_ + k)];
    return m;
}

Vec VelocityProfile::variance(std::int64_t bin) const {
    const std::int64_t n = count(bin);
    Vec v = Vec::Zero(dim_);
    if (n < 2) return v;
    for (int k = 0; k < dim_; ++k) v(k) = m2_[static_cast<std::size_t>(bin * dim_ + k)] / static_cast<double>(n - 1);
    return v;
}

std::vector<BinVelocity> stroboscopic_velocity(const VelocityProfile& profile, double dt) {
    std::vector<BinVelocity> out;
    out.reserve(static_cast<std::size_t>(profile.bins()));
    for (std::int64_t i = 0; i < profile.bins(); ++i) {
        const std::int64_t n = profile.count(i);
        if (n < 2)
            throw EmptyBinError("stroboscopic_velocity: bin " + std::to_string(i) + " holds " + std::to_string(n) +
                                " samples");
        BinVelocity b;
        b.tau = static_cast<double>(i) * dt;
        b.mean = profile.mean(i);
        b.std_error = (profile.variance(i) / static_cast<double>(n)).cwiseSqrt();
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

void require_equal_counts(const VelocityProfile& profile, const char* who) {
    const std::int64_t n0 = profile.count(0);
    if (n0 == 0) throw EmptyBinError(std::string(who) + ": empty bins");
    for (std::int64_t i = 1; i < profile.bins(); ++i) {
        if (profile.count(i) != n0)
            throw EmptyBinError(std::string(who) + ": bin counts differ (run length not a whole number of periods)");
    }
}

}  // namespace

CVec mode_amplitude(const VelocityProfile& profile, std::int64_t k) {
    const std::int64_t I = profile.bins();
    if (k < 0 || k >= I) throw std::invalid_argument("mode_amplitude: k must lie in [0, bins)");
    require_equal_counts(profile, "mode_amplitude");
    const int d = profile.dim();
    CVec acc = CVec::Zero(d);
    for (std::int64_t i = 0; i < I; ++i) {
        const double angle = kTwoPi * static_cast<double>((k * i) % I) / static_cast<double>(I);
        const std::complex<double> w(std::cos(angle), -std::sin(angle));
        const Vec m = profile.mean(i);
        for (int c = 0; c < d; ++c) acc(c) += m(c) * w;
    }
    return acc / static_cast<double>(I);
}

Vec period_average(const VelocityProfile& profile) {
    require_equal_counts(profile, "period_average");
    Vec acc = Vec::Zero(profile.dim());
    for (std::int64_t i = 0; i < profile.bins(); ++i) acc += profile.mean(i);
    return acc / static_cast<double>(profile.bins());
}

BatchMeans::BatchMeans(int dim, std::int64_t batch_length)
    : dim_(dim),
      batch_length_(batch_length),
      current_(static_cast<std::size_t>(dim), 0.0),
      totals_(static_cast<std::size_t>(dim), 0.0),
      batch_stats_(static_cast<std::size_t>(dim)) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("BatchMeans: bad dimension");
    if (batch_length < 1) throw std::invalid_argument("BatchMeans: batch length must be positive");
}

void BatchMeans::close_batch() {
    const double inv = 1.0 / static_cast<double>(batch_length_);
    for (int k = 0; k < dim_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        batch_stats_[uk].add(current_[uk] * inv);
        totals_[uk] += current_[uk];
        current_[uk] = 0.0;
    }
    samples_ += in_current_;
    in_current_ = 0;
}

void BatchMeans::merge(const BatchMeans& other) {
    if (other.dim_ != dim_ || other.batch_length_ != batch_length_)
        throw std::invalid_argument("BatchMeans::merge: shape mismatch");
    for (int k = 0; k < dim_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        batch_stats_[uk].merge(other.batch_stats_[uk]);
        totals_[uk] += other.totals_[uk] + other.current_[uk];
    }
    samples_ += other.samples_ + other.in_current_;
}

Vec BatchMeans::mean() const {
    const std::int64_t n = samples();
    if (n == 0) throw EmptyBinError("BatchMeans: no samples");
    Vec m(dim_);
    for (int k = 0; k < dim_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        m(k) = (totals_[uk] + current_[uk]) / static_cast<double>(n);
    }
    return m;
}

Vec BatchMeans::std_error() const {
    const std::int64_t nb = batches();
    if (nb < 2) throw EmptyBinError("BatchMeans: fewer than two complete batches");
    Vec e(dim_);
    for (int k = 0; k < dim_; ++k)
        e(k) = std::sqrt(batch_stats_[static_cast<std::size_t>(k)].variance() / static_cast<double>(nb));
    return e;
}

std::int64_t period_batch_length(std::int64_t n_steps, std::int64_t steps_per_period, std::int64_t target_batches) {
    const std::int64_t periods = n_steps / steps_per_period;
    const std::int64_t per_batch = std::max<std::int64_t>(1, periods / std::max<std::int64_t>(1, target_batches));
    return per_batch * steps_per_period;
}

VelocitySink::VelocitySink(const SystemParams& params, VelocityProfile& profile, BatchMeans* batches)
    : profile_(&profile),
      batches_(batches),
      bins_(profile.bins()),
      dim_(params.dim()),
      scalar_(params.scalar_mass().has_value()),
      minv_(params.inverse_mass()) {
    if (profile.dim() != params.dim()) throw std::invalid_argument("VelocitySink: dimension mismatch");
    if (scalar_) minv_s_ = 1.0 / *params.scalar_mass();
}

ExperiencedForce::ExperiencedForce(const ForceField& field, const Potential& pot, std::int64_t batch_length)
    : field_(field),
      potential_(pot),
      mean_g_(field.temporal_mean()),
      active_(field.temporal_mean() != 0.0 && !field.is_zero()),
      batches_(field.dim(), batch_length) {}

MeanWithError mean_experienced_force(const ExperiencedForce& sink) {
    const BatchMeans& b = sink.batches();
    MeanWithError out;
    out.mean = b.mean();
    out.std_error = b.batches() >= 2 ? b.std_error() : Vec(Vec::Zero(b.dim()));
    return out;
}

ResponseFit fit_linear_response(std::span<const double> etas, std::span<const Vec> means,
                                std::span<const double> weights, bool through_origin) {
    if (etas.size() != means.size()) throw std::invalid_argument("fit_linear_response: length mismatch");
    if (count_distinct(etas) < 3)
        throw RankDeficientError("fit_linear_response: need at least 3 distinct eta values");
    const int d = static_cast<int>(means.front().size());
    std::vector<double> sigma;
    if (!weights.empty()) {
        if (weights.size() != etas.size()) throw std::invalid_argument("fit_linear_response: weights length mismatch");
        for (double w : weights) {
            if (!(w > 0.0)) throw std::invalid_argument("fit_linear_response: weights must be positive");
            sigma.push_back(1.0 / std::sqrt(w));
        }
    }
    ResponseFit fit;
    fit.slope = Vec::Zero(d);
    fit.intercept = Vec::Zero(d);
    fit.slope_std_error = Vec::Zero(d);
    fit.intercept_std_error = Vec::Zero(d);
    fit.rss = Vec::Zero(d);
    std::vector<double> y(etas.size());
    for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < etas.size(); ++i) y[i] = means[i](c);
        if (through_origin) {
            if (!weights.empty()) throw std::invalid_argument("fit_linear_response: weights need a free intercept");
            const PolyFit p = fit_through_origin(etas, y);
            fit.slope(c) = p.coef[0];
            fit.slope_std_error(c) = p.std_error[0];
            fit.rss(c) = p.rss;
        } else {
            const PolyFit p = polyfit(etas, y, 1, sigma, false);
            fit.intercept(c) = p.coef[0];
            fit.slope(c) = p.coef[1];
            fit.intercept_std_error(c) = p.std_error[0];
            fit.slope_std_error(c) = p.std_error[1];
            fit.rss(c) = p.rss;
        }
    }
    return fit;
}

ComplexResponseFit fit_complex_response(std::span<const double> etas, std::span<const CVec> amplitudes) {
    if (etas.size() != amplitudes.size()) throw std::invalid_argument("fit_complex_response: length mismatch");
    const int d = static_cast<int>(amplitudes.front().size());
    std::vector<Vec> re, im;
    for (const auto& a : amplitudes) {
        re.push_back(a.real());
        im.push_back(a.imag());
    }
    const ResponseFit fr = fit_linear_response(etas, re);
    const ResponseFit fi = fit_linear_response(etas, im);
    ComplexResponseFit out;
    out.slope = CVec(d);
    out.modulus = Vec(d);
    out.modulus_std_error = Vec(d);
    out.real_std_error = fr.slope_std_error;
    out.imag_std_error = fi.slope_std_error;
    for (int c = 0; c < d; ++c) {
        const double a = fr.slope(c), b = fi.slope(c);
        out.slope(c) = {a, b};
        const double m = std::hypot(a, b);
        out.modulus(c) = m;
        const double sa = fr.slope_std_error(c), sb = fi.slope_std_error(c);
        out.modulus_std_error(c) = m > 0.0 ? std::hypot(a * sa, b * sb) / m : std::hypot(sa, sb);
    }
    return out;
}

}  // namespace langesim
