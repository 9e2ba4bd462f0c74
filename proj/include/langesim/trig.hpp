#pragma once

#include <cmath>

namespace langesim {

// sin and cos of one argument for moderate |x| (positions reduced to a few
// cells). Cody-Waite reduction by pi/2 followed by the fdlibm minimax kernels
// on [-pi/4, pi/4]; within 1 ulp of libm there, and several times cheaper
// than glibc's sincos on the machines this was tuned on. Large arguments
// defer to libm.
inline void sincos_reduced(double x, double& s, double& c) {
    if (!(std::abs(x) < 1.0e5)) {
        s = std::sin(x);
        c = std::cos(x);
        return;
    }
    constexpr double inv_pio2 = 6.36619772367581382433e-01;
    constexpr double pio2_1 = 1.57079632673412561417e+00;
    constexpr double pio2_1t = 6.07710050650619224932e-11;
    const double fn = std::nearbyint(x * inv_pio2);
    const double r = (x - fn * pio2_1) - fn * pio2_1t;
    const long quadrant = static_cast<long>(fn) & 3;

    const double z = r * r;
    const double w = z * z;

    constexpr double S1 = -1.66666666666666324348e-01, S2 = 8.33333333332248946124e-03,
                     S3 = -1.98412698298579493134e-04, S4 = 2.75573137070700676789e-06,
                     S5 = -2.50507602534068634195e-08, S6 = 1.58969099521155010221e-10;
    const double sr = S2 + z * (S3 + z * S4) + z * w * (S5 + z * S6);
    const double sin_r = r + z * r * (S1 + z * sr);

    constexpr double C1 = 4.16666666666666019037e-02, C2 = -1.38888888888741095749e-03,
                     C3 = 2.48015872894767294178e-05, C4 = -2.75573143513906633035e-07,
                     C5 = 2.08757232129817482790e-09, C6 = -1.13596475577881948265e-11;
    const double cr = z * (C1 + z * (C2 + z * C3)) + w * w * (C4 + z * (C5 + z * C6));
    const double hz = 0.5 * z;
    const double one_minus = 1.0 - hz;
    const double cos_r = one_minus + (((1.0 - one_minus) - hz) + z * cr);

    switch (quadrant) {
    case 0: s = sin_r; c = cos_r; break;
    case 1: s = cos_r; c = -sin_r; break;
    case 2: s = -sin_r; c = -cos_r; break;
    default: s = -cos_r; c = sin_r; break;
    }
}

}  // namespace langesim
