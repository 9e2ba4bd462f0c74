#include "langesim/potential.hpp"

#include <cmath>

namespace langesim {

Potential Potential::from_descriptor(const std::string& tag) {
    if (tag == "zero") return Potential(PotentialKind::zero);
    if (tag == "cos2d") return Potential(PotentialKind::cos2d);
    if (tag == "separable") return Potential(PotentialKind::separable);
    throw ConfigError("potential.kind: unknown potential '" + tag + "'");
}

std::string Potential::descriptor() const {
    switch (kind_) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::cos2d: return "cos2d";
    case PotentialKind::separable: return "separable";
    }
    return "?";
}

double Potential::value(const AxisTrig& t) const {
    switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::cos2d: {
        const double cx = t.cos[0], sx = t.sin[0], cy = t.cos[1], sy = t.sin[1];
        const double cos2x = 2.0 * cx * cx - 1.0;
        const double cos_xy = cx * cy + sx * sy;
        return 2.0 * cos2x + cy + cos_xy;
    }
    case PotentialKind::separable: {
        double v = 0.0;
        for (int k = 0; k < t.dim; ++k) v += t.cos[k];
        return v;
    }
    }
    return 0.0;
}

void Potential::gradient(const AxisTrig& t, double* out) const {
    switch (kind_) {
    case PotentialKind::zero:
        for (int k = 0; k < t.dim; ++k) out[k] = 0.0;
        return;
    case PotentialKind::cos2d: {
        const double cx = t.cos[0], sx = t.sin[0], cy = t.cos[1], sy = t.sin[1];
        const double sin2x = 2.0 * sx * cx;
        const double sin_xy = sx * cy - cx * sy;
        out[0] = -4.0 * sin2x - sin_xy;
        out[1] = -sy + sin_xy;
        return;
    }
    case PotentialKind::separable:
        for (int k = 0; k < t.dim; ++k) out[k] = -t.sin[k];
        return;
    }
}

double Potential::value(const Vec& q) const { return value(axis_trig(q)); }

Vec Potential::gradient(const Vec& q) const {
    Vec g(q.size());
    gradient(axis_trig(q), g.data());
    return g;
}

double eval_potential(const Potential& pot, const Vec& q) { return pot.value(q); }
Vec grad_potential(const Potential& pot, const Vec& q) { return pot.gradient(q); }

}  // namespace langesim
