#pragma once

#include <span>

#include "mechsynth/kinematics.hpp"

namespace mechsynth {

struct ConstraintReport {
    bool grashof_ok = false;
    bool sequence_ok = false;
    double grashof_violation = 0.0;

    bool feasible() const { return grashof_ok && sequence_ok; }
};

/// Label-free Grashof test: shortest + longest < sum of the other two
/// (strict). Non-positive lengths never satisfy it.
bool grashof_satisfied(const BarLengths& bars);

/// max(0, s + l - p - q) over the sorted lengths.
double grashof_violation(const BarLengths& bars);

/// True when the crank angles visit the targets in one rotational direction
/// within a single revolution: the summed forward steps (mod 2*pi) are
/// below 2*pi either counter-clockwise or clockwise. Lists shorter than two
/// are trivially ordered.
bool sequence_satisfied(std::span<const double> theta1_list);

} // namespace mechsynth
