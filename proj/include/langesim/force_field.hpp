#pragma once

#include <optional>
#include <string>

#include "langesim/params.hpp"
#include "langesim/potential.hpp"

namespace langesim {

enum class ForceShape {
    zero,
    cosine_mode,  // e^{beta V(q)} (cos(n x), 0)
    nm,           // e^{beta V(q)} (-1 + 3 cos(2x), 0)
    sr,           // e^{beta V(q)} (cos(2x), 0), cosine-modulated by default
    constant_dir, // (1, 0), cosine-modulated by default
    gradient,     // -grad W(q)
};

enum class Modulation { none, cosine };

// Source potential W for gradient forcings.
enum class GradientSource { zero, cos_x, cos_x_plus_cos_y };

struct ForceSpec {
    ForceShape shape = ForceShape::zero;
    int mode = 1;  // n for cosine_mode
    GradientSource source = GradientSource::zero;
    // Defaults to cosine for sr and constant_dir, none otherwise.
    std::optional<Modulation> modulation;
};

// Space-time periodic external force F(t, q) = g(t) S(q), with g either 1 or
// cos(omega t), omega = 2 pi / T. The amplitude eta is not part of the field.
class ForceField {
public:
    ForceField(const ForceSpec& spec, const Potential& pot, const SystemParams& params);
    // The zero field.
    explicit ForceField(const SystemParams& params);

    const ForceSpec& spec() const { return spec_; }
    Modulation modulation() const { return modulation_; }
    double period() const { return period_; }
    int dim() const { return dim_; }
    double omega() const { return modulation_ == Modulation::cosine ? kTwoPi / period_ : 0.0; }
    bool is_zero() const;
    std::string descriptor() const;

    // g(t), t reduced modulo the period.
    double temporal(double t) const;
    // g at phase index i of a period split into `steps_per_period` steps.
    double temporal_at_phase(std::int64_t phase_index, std::int64_t steps_per_period) const;
    // (1/T) int_0^T g(t) dt.
    double temporal_mean() const { return modulation_ == Modulation::cosine ? 0.0 : 1.0; }

    // S(q) into out[0..dim) given precomputed trig values and V(q).
    void spatial(const AxisTrig& t, double potential_value, double* out) const;
    Vec spatial(const Vec& q) const;
    bool uses_potential() const;

    Vec eval(double t, const Vec& q) const;
    // F_0(q): the time average of the field.
    Vec time_average(const Vec& q) const { return temporal_mean() * spatial(q); }

private:
    ForceSpec spec_;
    Modulation modulation_;
    Potential potential_;
    double beta_;
    double period_;
    int dim_;
};

Vec eval_force(const ForceField& field, double t, const Vec& q);

// Parses tags like "nm", "cosine-mode(3)", "sr", "constant-dir", "gradient(cos-x)", "zero".
ForceSpec parse_force_tag(const std::string& tag);

// Checks dimension and cell compatibility of a potential/field pair. The
// trigonometric catalog is 2 pi periodic, so every cell length must be a
// positive integer multiple of 2 pi unless both potential and field are zero.
void validate_model(const SystemParams& params, const Potential& pot, const ForceField& field);

}  // namespace langesim
