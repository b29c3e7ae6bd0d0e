#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "mechsynth/expected.hpp"

namespace mechsynth {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Link lengths in loop-closure roles: r1 crank (input), r2 coupler,
/// r3 rocker (output), r4 fixed ground. Values are held raw; non-positive
/// lengths are rejected when the linkage is evaluated.
struct BarLengths {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;

    double longest() const;
    std::array<double, 4> as_array() const { return {r1, r2, r3, r4}; }
    static BarLengths from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

    friend bool operator==(const BarLengths&, const BarLengths&) = default;
};

/// Pose of the ground frame: rotation theta0 and the crank pivot (x0, y0).
struct FramePose {
    double theta0 = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    friend bool operator==(const FramePose&, const FramePose&) = default;
};

struct MechanismParams {
    BarLengths bars;
    double r_ex = 0.0; ///< coupler-point offset along the coupler
    double r_ey = 0.0; ///< coupler-point offset normal to the coupler
    FramePose pose;

    friend bool operator==(const MechanismParams&, const MechanismParams&) = default;
};

/// Crank, coupler and rocker angles in the ground frame, each in [0, 2*pi).
struct JointAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta4 = 0.0;
};

/// The two assembly configurations for a crank angle. Open takes the root
/// with the positive arccosine offset, Crossed the negative one.
enum class Branch { Open, Crossed };

inline constexpr std::array<Branch, 2> kBranches{Branch::Open, Branch::Crossed};

std::string_view to_string(Branch branch);

enum class AssemblyError {
    NonPositiveBar, ///< some link length is <= 0
    Degenerate,     ///< coupler or crank-tip-to-pivot distance below epsilon
    NoRealRoot,     ///< links cannot span the gap at this crank angle
};

std::string_view to_string(AssemblyError error);

/// Wraps any finite angle into [0, 2*pi).
double normalize_angle(double angle);

/// Solves the closed-quadrangle equations for the coupler and rocker angles.
Expected<JointAngles, AssemblyError> solve_loop_closure(const BarLengths& bars, double theta1,
                                                        Branch branch);

/// Residual of the two loop-closure equations for the given joint angles.
std::array<double, 2> closure_residual(const BarLengths& bars, const JointAngles& angles);

Expected<Point2, AssemblyError> coupler_point(const MechanismParams& params, double theta1,
                                              Branch branch);

/// Coupler point for every crank angle on one fixed branch. Unassemblable
/// samples are reported in place; the trace never aborts.
std::vector<Expected<Point2, AssemblyError>> trace_path(const MechanismParams& params,
                                                        std::span<const double> theta1_list,
                                                        Branch branch);

/// Joint positions in the global frame; used to emit mechanism sketches.
struct LinkagePose {
    Point2 crank_pivot;
    Point2 crank_tip;
    Point2 rocker_tip;
    Point2 rocker_pivot;
    Point2 coupler_point;
};

Expected<LinkagePose, AssemblyError> linkage_pose(const MechanismParams& params, double theta1,
                                                  Branch branch);

} // namespace mechsynth
