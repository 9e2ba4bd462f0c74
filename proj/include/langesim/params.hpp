#pragma once

#include <cstdint>
#include <optional>

#include "langesim/types.hpp"

namespace langesim {

struct SystemParamsInit {
    int dim = 2;
    double beta = 1.0;
    double gamma = 1.0;
    std::optional<Mat> mass;  // identity when absent
    double dt = 0.01;
    double period = 1.0;
    std::optional<Vec> cell;  // 2*pi per axis when absent
};

// Physical constants and time discretisation. Validated on construction:
// positive scalars, symmetric positive definite mass, and an integer number
// of steps per forcing period.
class SystemParams {
public:
    explicit SystemParams(const SystemParamsInit& init);
    SystemParams() : SystemParams(SystemParamsInit{}) {}

    int dim() const { return dim_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    const Mat& mass() const { return mass_; }
    const Mat& inverse_mass() const { return inverse_mass_; }
    // Scalar m when mass = m * Id.
    std::optional<double> scalar_mass() const { return scalar_mass_; }
    double dt() const { return dt_; }
    double period() const { return period_; }
    // Steps per period, I = T / dt.
    std::int64_t steps_per_period() const { return steps_per_period_; }
    const Vec& cell() const { return cell_; }

    // Copy with a different time step (the period is kept).
    SystemParams with_dt(double dt) const;
    SystemParams with_period(double period, double dt) const;

private:
    int dim_;
    double beta_;
    double gamma_;
    Mat mass_;
    Mat inverse_mass_;
    std::optional<double> scalar_mass_;
    double dt_;
    double period_;
    std::int64_t steps_per_period_;
    Vec cell_;
    SystemParamsInit init_;
};

// Number of whole steps of size dt in `span`, or nullopt if span is not an
// integer multiple of dt (relative tolerance 1e-9).
std::optional<std::int64_t> whole_steps(double span, double dt);

}  // namespace langesim
