#include "mechsynth/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace mechsynth {

namespace {

double signed_excess(const BarLengths& bars)
{
    auto v = bars.as_array();
    std::sort(v.begin(), v.end());
    return (v[0] + v[3]) - (v[1] + v[2]);
}

double summed_steps(std::span<const double> angles, bool clockwise)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        const double step = clockwise ? angles[i] - angles[i + 1] : angles[i + 1] - angles[i];
        total += normalize_angle(step);
    }
    return total;
}

} // namespace

bool grashof_satisfied(const BarLengths& bars)
{
    if (!(bars.r1 > 0.0 && bars.r2 > 0.0 && bars.r3 > 0.0 && bars.r4 > 0.0)) return false;
    return signed_excess(bars) < 0.0;
}

double grashof_violation(const BarLengths& bars)
{
    return std::max(0.0, signed_excess(bars));
}

bool sequence_satisfied(std::span<const double> theta1_list)
{
    if (theta1_list.size() < 2) return true;
    return summed_steps(theta1_list, false) < kTwoPi || summed_steps(theta1_list, true) < kTwoPi;
}

} // namespace mechsynth
