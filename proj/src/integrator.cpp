#include "langesim/integrator.hpp"

namespace langesim {

PhaseState PhaseState::at(const Vec& q, const Vec& p, std::int64_t step_index) {
    PhaseState s;
    s.q = q;
    s.p = p;
    s.Q = q;
    s.winding = IVec::Zero(q.size());
    s.step_index = step_index;
    return s;
}

void wrap_into_cell(Vec& q, IVec& winding, const Vec& cell) {
    for (Eigen::Index k = 0; k < q.size(); ++k) wrap_axis(q(k), winding(k), cell(k));
}

void SplittingIntegrator::blowup(std::int64_t step) {
    throw NumericalBlowup("non-finite phase-space state at step " + std::to_string(step), step);
}

SplittingIntegrator::SplittingIntegrator(const SystemParams& params, const Potential& pot, const ForceField& field,
                                         double eta)
    : params_(params),
      potential_(pot),
      field_(field),
      eta_(eta),
      field_active_(eta != 0.0 && !field.is_zero()),
      steps_per_period_(params.steps_per_period()) {
    if (!std::isfinite(eta)) throw ConfigError("eta: must be finite");
    validate_model(params, pot, field);

    const int d = params.dim();
    const double dt = params.dt();
    const double gamma = params.gamma();
    const double beta = params.beta();

    Eigen::SelfAdjointEigenSolver<Mat> eig(params.mass());
    const Vec mass_eigs = eig.eigenvalues();
    const Mat U = eig.eigenvectors();
    Vec a(d), s(d);
    for (int k = 0; k < d; ++k) {
        a(k) = std::exp(-0.5 * gamma * dt / mass_eigs(k));
        s(k) = std::sqrt((1.0 - a(k) * a(k)) * mass_eigs(k) / beta);
    }
    alpha_ = U * a.asDiagonal() * U.transpose();
    noise_ = U * s.asDiagonal() * U.transpose();
    minv_ = params.inverse_mass();

    if (field_active_ && field_.modulation() == Modulation::cosine && steps_per_period_ <= (std::int64_t{1} << 22)) {
        temporal_table_.resize(static_cast<std::size_t>(steps_per_period_));
        for (std::int64_t i = 0; i < steps_per_period_; ++i)
            temporal_table_[static_cast<std::size_t>(i)] = field_.temporal_at_phase(i, steps_per_period_);
    }

    if (const auto m = params.scalar_mass()) {
        scalar_ = true;
        alpha_s_ = std::exp(-0.5 * gamma * dt / *m);
        noise_s_ = std::sqrt((1.0 - alpha_s_ * alpha_s_) * *m / beta);
        minv_s_ = 1.0 / *m;
        alpha_ = alpha_s_ * Mat::Identity(d, d);
        noise_ = noise_s_ * Mat::Identity(d, d);
    }
}

void SplittingIntegrator::force(const double* q, std::int64_t step_index, double* out) const {
    const int d = params_.dim();
    if (potential_.is_zero() && !field_active_) {
        for (int k = 0; k < d; ++k) out[k] = 0.0;
        return;
    }
    const AxisTrig t = axis_trig(q, d);
    potential_.gradient(t, out);
    for (int k = 0; k < d; ++k) out[k] = -out[k];
    if (!field_active_) return;
    const std::int64_t phase = step_index % steps_per_period_;
    const double g = temporal_table_.empty() ? field_.temporal_at_phase(phase, steps_per_period_)
                                             : temporal_table_[static_cast<std::size_t>(phase)];
    if (g == 0.0) return;
    double sp[kMaxDim];
    field_.spatial(t, field_.uses_potential() ? potential_.value(t) : 0.0, sp);
    const double scale = eta_ * g;
    for (int k = 0; k < d; ++k) out[k] += scale * sp[k];
}

PhaseState SplittingIntegrator::step(const PhaseState& s, const Vec& g_first, const Vec& g_second) const {
    const int d = params_.dim();
    PhaseState next = s;
    Vec f(d), p_half(d), dq(d);
    force(next.q, next.step_index, f);
    advance(next, f, g_first, g_second, p_half, dq);
    return next;
}

}  // namespace langesim
