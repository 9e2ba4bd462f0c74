#include "langesim/force_field.hpp"

#include <cmath>
#include <regex>

namespace langesim {

namespace {

Modulation default_modulation(ForceShape shape) {
    return (shape == ForceShape::sr || shape == ForceShape::constant_dir) ? Modulation::cosine
                                                                         : Modulation::none;
}

std::string source_name(GradientSource s) {
    switch (s) {
    case GradientSource::zero: return "zero";
    case GradientSource::cos_x: return "cos-x";
    case GradientSource::cos_x_plus_cos_y: return "cos-x+cos-y";
    }
    return "?";
}

}  // namespace

ForceField::ForceField(const ForceSpec& spec, const Potential& pot, const SystemParams& params)
    : spec_(spec),
      modulation_(spec.modulation.value_or(default_modulation(spec.shape))),
      potential_(pot),
      beta_(params.beta()),
      period_(params.period()),
      dim_(params.dim()) {
    if (spec_.shape == ForceShape::cosine_mode && spec_.mode < 0)
        throw ConfigError("force.n: cosine mode index must be non-negative");
    if (spec_.shape == ForceShape::gradient && spec_.source == GradientSource::cos_x_plus_cos_y && dim_ < 2)
        throw ConfigError("force.source: cos-x+cos-y needs dim >= 2");
}

ForceField::ForceField(const SystemParams& params) : ForceField(ForceSpec{}, Potential(), params) {}

bool ForceField::is_zero() const {
    return spec_.shape == ForceShape::zero ||
           (spec_.shape == ForceShape::gradient && spec_.source == GradientSource::zero);
}

bool ForceField::uses_potential() const {
    return spec_.shape == ForceShape::cosine_mode || spec_.shape == ForceShape::nm ||
           spec_.shape == ForceShape::sr;
}

std::string ForceField::descriptor() const {
    std::string base;
    switch (spec_.shape) {
    case ForceShape::zero: base = "zero"; break;
    case ForceShape::cosine_mode: base = "cosine-mode(" + std::to_string(spec_.mode) + ")"; break;
    case ForceShape::nm: base = "nm"; break;
    case ForceShape::sr: base = "sr"; break;
    case ForceShape::constant_dir: base = "constant-dir"; break;
    case ForceShape::gradient: base = "gradient(" + source_name(spec_.source) + ")"; break;
    }
    return base + (modulation_ == Modulation::cosine ? " * cos(omega t)" : "");
}

double ForceField::temporal(double t) const {
    if (modulation_ == Modulation::none) return 1.0;
    double r = std::fmod(t, period_);
    if (r < 0.0) r += period_;
    return std::cos(kTwoPi * (r / period_));
}

double ForceField::temporal_at_phase(std::int64_t phase_index, std::int64_t steps_per_period) const {
    if (modulation_ == Modulation::none) return 1.0;
    const std::int64_t i = phase_index % steps_per_period;
    return std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(steps_per_period));
}

void ForceField::spatial(const AxisTrig& t, double potential_value, double* out) const {
    for (int k = 0; k < dim_; ++k) out[k] = 0.0;
    switch (spec_.shape) {
    case ForceShape::zero: return;
    case ForceShape::cosine_mode: {
        // cos(n x) by the Chebyshev recurrence on cos(x).
        const double c1 = t.cos[0];
        double prev = 1.0, cur = c1;
        if (spec_.mode == 0) cur = 1.0;
        for (int k = 2; k <= spec_.mode; ++k) {
            const double next = 2.0 * c1 * cur - prev;
            prev = cur;
            cur = next;
        }
        out[0] = std::exp(beta_ * potential_value) * cur;
        return;
    }
    case ForceShape::nm: {
        const double cos2x = 2.0 * t.cos[0] * t.cos[0] - 1.0;
        out[0] = std::exp(beta_ * potential_value) * (-1.0 + 3.0 * cos2x);
        return;
    }
    case ForceShape::sr: {
        const double cos2x = 2.0 * t.cos[0] * t.cos[0] - 1.0;
        out[0] = std::exp(beta_ * potential_value) * cos2x;
        return;
    }
    case ForceShape::constant_dir: out[0] = 1.0; return;
    case ForceShape::gradient:
        switch (spec_.source) {
        case GradientSource::zero: return;
        case GradientSource::cos_x: out[0] = t.sin[0]; return;
        case GradientSource::cos_x_plus_cos_y:
            out[0] = t.sin[0];
            out[1] = t.sin[1];
            return;
        }
    }
}

Vec ForceField::spatial(const Vec& q) const {
    const AxisTrig t = axis_trig(q);
    const double v = uses_potential() ? potential_.value(t) : 0.0;
    Vec out(dim_);
    spatial(t, v, out.data());
    return out;
}

Vec ForceField::eval(double t, const Vec& q) const { return temporal(t) * spatial(q); }

Vec eval_force(const ForceField& field, double t, const Vec& q) { return field.eval(t, q); }

ForceSpec parse_force_tag(const std::string& tag) {
    static const std::regex with_arg(R"(^([a-z-]+)\(([^)]*)\)$)");
    std::smatch m;
    std::string name = tag, arg;
    if (std::regex_match(tag, m, with_arg)) {
        name = m[1];
        arg = m[2];
    }
    ForceSpec spec;
    if (name == "zero") {
        spec.shape = ForceShape::zero;
    } else if (name == "cosine-mode") {
        spec.shape = ForceShape::cosine_mode;
        if (!arg.empty()) spec.mode = std::stoi(arg);
    } else if (name == "nm") {
        spec.shape = ForceShape::nm;
    } else if (name == "sr") {
        spec.shape = ForceShape::sr;
    } else if (name == "constant-dir") {
        spec.shape = ForceShape::constant_dir;
        if (arg == "0") spec.modulation = Modulation::none;
    } else if (name == "gradient") {
        spec.shape = ForceShape::gradient;
        if (arg == "cos-x") spec.source = GradientSource::cos_x;
        else if (arg == "cos-x+cos-y") spec.source = GradientSource::cos_x_plus_cos_y;
        else if (arg == "zero" || arg.empty()) spec.source = GradientSource::zero;
        else throw ConfigError("force.source: unknown gradient source '" + arg + "'");
    } else {
        throw ConfigError("force.kind: unknown force '" + tag + "'");
    }
    return spec;
}

void validate_model(const SystemParams& params, const Potential& pot, const ForceField& field) {
    if (pot.required_dim() != 0 && pot.required_dim() != params.dim())
        throw ConfigError("potential.kind: '" + pot.descriptor() + "' requires dim = " +
                          std::to_string(pot.required_dim()));
    if (pot.is_zero() && field.is_zero()) return;
    for (int k = 0; k < params.dim(); ++k) {
        const double turns = params.cell()(k) / kTwoPi;
        if (std::abs(turns - std::round(turns)) > 1e-12 * turns || std::round(turns) < 1.0)
            throw ConfigError("system.cell: lengths must be integer multiples of 2*pi for the built-in catalog");
    }
}

}  // namespace langesim
