#pragma once

// Test-only reference computations. Nothing here calls the closed-form
// solver; roots are located numerically from the closure residual.

#include <cmath>
#include <numbers>
#include <vector>

#include "mechsynth/kinematics.hpp"

namespace oracle {

/// |k + r2 e(theta2)|^2 - r3^2: zero exactly where the loop closes.
inline double closure_gap(const mechsynth::BarLengths& b, double theta1, double theta2)
{
    const double vx = b.r1 * std::cos(theta1) + b.r2 * std::cos(theta2) - b.r4;
    const double vy = b.r1 * std::sin(theta1) + b.r2 * std::sin(theta2);
    return vx * vx + vy * vy - b.r3 * b.r3;
}

/// Coupler angles closing the loop, by a uniform grid scan over [0, 2*pi)
/// followed by bisection on every sign change. A tangent double root has no
/// sign change and is not reported.
inline std::vector<double> coupler_roots(const mechsynth::BarLengths& b, double theta1, int samples = 3600)
{
    const double two_pi = 2.0 * std::numbers::pi;
    const double h = two_pi / samples;
    std::vector<double> roots;
    for (int i = 0; i < samples; ++i) {
        double lo = i * h;
        double hi = (i + 1) * h;
        double glo = closure_gap(b, theta1, lo);
        double ghi = closure_gap(b, theta1, hi);
        if (glo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if ((glo < 0.0) == (ghi < 0.0)) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = closure_gap(b, theta1, mid);
            if ((gm < 0.0) == (glo < 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

/// Shortest distance between two angles on the circle.
inline double angle_distance(double a, double b)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

} // namespace oracle
