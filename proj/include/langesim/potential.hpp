#pragma once

#include <string>

#include "langesim/trig.hpp"
#include "langesim/types.hpp"

namespace langesim {

// Sines and cosines of every coordinate. The built-in potentials and forces
// are trigonometric polynomials in these, so one evaluation of this struct
// serves both the gradient and the forcing at a given position.
struct AxisTrig {
    int dim = 0;
    double sin[kMaxDim] = {};
    double cos[kMaxDim] = {};
};

inline AxisTrig axis_trig(const double* q, int dim) {
    AxisTrig t;
    t.dim = dim;
    for (int k = 0; k < dim; ++k) sincos_reduced(q[k], t.sin[k], t.cos[k]);
    return t;
}

inline AxisTrig axis_trig(const Vec& q) { return axis_trig(q.data(), static_cast<int>(q.size())); }

enum class PotentialKind {
    zero,
    cos2d,      // 2 cos(2x) + cos(y) + cos(x - y)
    separable,  // sum_k cos(q_k); reduces to cos(x) in one dimension
};

class Potential {
public:
    explicit Potential(PotentialKind kind = PotentialKind::zero) : kind_(kind) {}

    static Potential from_descriptor(const std::string& tag);

    PotentialKind kind() const { return kind_; }
    std::string descriptor() const;
    // Dimension the formula is written for, 0 when any dimension works.
    int required_dim() const { return kind_ == PotentialKind::cos2d ? 2 : 0; }
    bool is_zero() const { return kind_ == PotentialKind::zero; }

    double value(const AxisTrig& t) const;
    // Writes grad V into out[0..t.dim).
    void gradient(const AxisTrig& t, double* out) const;

    double value(const Vec& q) const;
    Vec gradient(const Vec& q) const;

private:
    PotentialKind kind_;
};

double eval_potential(const Potential& pot, const Vec& q);
Vec grad_potential(const Potential& pot, const Vec& q);

}  // namespace langesim
