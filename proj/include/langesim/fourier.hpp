#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "langesim/force_field.hpp"

namespace langesim {

// Trapezoid rule on n_quad equispaced nodes over one period. For periodic
// integrands this is exact on trigonometric polynomials of degree < n_quad.
template <class Field>
Vec time_average(const Field& field, double period, const Vec& q, int n_quad) {
    if (n_quad < 2) throw std::invalid_argument("time_average: n_quad must be >= 2");
    Vec acc = Vec::Zero(q.size());
    for (int j = 0; j < n_quad; ++j) acc += field(period * j / n_quad, q);
    return acc / static_cast<double>(n_quad);
}

// F_n(q) = (1/T) int_0^T F(t, q) e^{-i n omega t} dt.
template <class Field>
CVec time_mode(const Field& field, double period, const Vec& q, int n, int n_quad) {
    if (n_quad <= 2 * std::abs(n)) throw std::invalid_argument("time_mode: n_quad must exceed 2|n|");
    CVec acc = CVec::Zero(q.size());
    for (int j = 0; j < n_quad; ++j) {
        // Reduce n*j mod n_quad so the phase stays exact for large n.
        const long long k = ((static_cast<long long>(n) * j) % n_quad + n_quad) % n_quad;
        const double angle = -kTwoPi * static_cast<double>(k) / n_quad;
        const std::complex<double> w(std::cos(angle), std::sin(angle));
        const Vec f = field(period * j / n_quad, q);
        for (int c = 0; c < q.size(); ++c) acc(c) += w * f(c);
    }
    return acc / static_cast<double>(n_quad);
}

inline Vec time_average_force(const ForceField& field, const Vec& q, int n_quad) {
    return time_average([&](double t, const Vec& x) { return field.eval(t, x); }, field.period(), q, n_quad);
}

inline CVec time_fourier_mode(const ForceField& field, const Vec& q, int n, int n_quad) {
    return time_mode([&](double t, const Vec& x) { return field.eval(t, x); }, field.period(), q, n, n_quad);
}

}  // namespace langesim
