#include "langesim/params.hpp"

#include <cmath>
#include <string>

namespace langesim {

std::optional<std::int64_t> whole_steps(double span, double dt) {
    if (!(span >= 0.0) || !(dt > 0.0) || !std::isfinite(span)) return std::nullopt;
    const double ratio = span / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) return std::nullopt;
    return static_cast<std::int64_t>(rounded);
}

SystemParams::SystemParams(const SystemParamsInit& init) : init_(init) {
    dim_ = init.dim;
    if (dim_ < 1 || dim_ > kMaxDim)
        throw ConfigError("system.dim: must be between 1 and " + std::to_string(kMaxDim));
    if (!(init.beta > 0.0) || !std::isfinite(init.beta))
        throw ConfigError("system.beta: must be strictly positive");
    if (!(init.gamma > 0.0) || !std::isfinite(init.gamma))
        throw ConfigError("system.gamma: must be strictly positive");
    if (!(init.dt > 0.0) || !std::isfinite(init.dt))
        throw ConfigError("system.dt: must be strictly positive");
    if (!(init.period > 0.0) || !std::isfinite(init.period))
        throw ConfigError("system.period: must be strictly positive");
    beta_ = init.beta;
    gamma_ = init.gamma;
    dt_ = init.dt;
    period_ = init.period;

    const auto steps = whole_steps(period_, dt_);
    if (!steps || *steps < 1)
        throw ConfigError("system.period: period / dt must be a positive integer (period=" +
                          std::to_string(period_) + ", dt=" + std::to_string(dt_) + ")");
    steps_per_period_ = *steps;

    if (init.mass) {
        if (init.mass->rows() != dim_ || init.mass->cols() != dim_)
            throw ConfigError("system.mass: must be a dim x dim matrix");
        mass_ = *init.mass;
    } else {
        mass_ = Mat::Identity(dim_, dim_);
    }
    if (!mass_.allFinite() || (mass_ - mass_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * mass_.cwiseAbs().maxCoeff())
        throw ConfigError("system.mass: must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> eig(mass_);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        throw ConfigError("system.mass: must be positive definite");
    inverse_mass_ = mass_.inverse();

    const double m0 = mass_(0, 0);
    if ((mass_ - m0 * Mat::Identity(dim_, dim_)).cwiseAbs().maxCoeff() == 0.0)
        scalar_mass_ = m0;

    if (init.cell) {
        if (init.cell->size() != dim_) throw ConfigError("system.cell: must have dim entries");
        cell_ = *init.cell;
    } else {
        cell_ = Vec::Constant(dim_, kTwoPi);
    }
    for (int k = 0; k < dim_; ++k)
        if (!(cell_(k) > 0.0) || !std::isfinite(cell_(k)))
            throw ConfigError("system.cell: lengths must be strictly positive");
}

SystemParams SystemParams::with_dt(double dt) const {
    SystemParamsInit init = init_;
    init.dt = dt;
    return SystemParams(init);
}

SystemParams SystemParams::with_period(double period, double dt) const {
    SystemParamsInit init = init_;
    init.period = period;
    init.dt = dt;
    return SystemParams(init);
}

}  // namespace langesim
