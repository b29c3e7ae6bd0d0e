#include "mechsynth/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace mechsynth {

namespace {

constexpr double kEpsilonScale = 1e-12;

Point2 to_global(const FramePose& pose, double x, double y)
{
    const double c = std::cos(pose.theta0);
    const double s = std::sin(pose.theta0);
    return {c * x - s * y + pose.x0, s * x + c * y + pose.y0};
}

} // namespace

double BarLengths::longest() const
{
    return std::max({r1, r2, r3, r4});
}

std::string_view to_string(Branch branch)
{
    return branch == Branch::Open ? "open" : "crossed";
}

std::string_view to_string(AssemblyError error)
{
    switch (error) {
    case AssemblyError::NonPositiveBar: return "non-positive bar length";
    case AssemblyError::Degenerate: return "degenerate geometry";
    case AssemblyError::NoRealRoot: return "cannot assemble at this crank angle";
    }
    return "unknown";
}

double normalize_angle(double angle)
{
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2*pi
    if (a >= kTwoPi) a = 0.0;
    return a;
}

Expected<JointAngles, AssemblyError> solve_loop_closure(const BarLengths& bars, double theta1,
                                                        Branch branch)
{
    if (!(bars.r1 > 0.0 && bars.r2 > 0.0 && bars.r3 > 0.0 && bars.r4 > 0.0))
        return AssemblyError::NonPositiveBar;

    const double eps = kEpsilonScale * bars.longest();
    if (bars.r2 <= eps) return AssemblyError::Degenerate;

    // k runs from the rocker pivot to the crank tip.
    const double kx = bars.r1 * std::cos(theta1) - bars.r4;
    const double ky = bars.r1 * std::sin(theta1);
    const double k = std::hypot(kx, ky);
    if (k <= eps) return AssemblyError::Degenerate;

    // kx cos(t2) + ky sin(t2) = rhs  <=>  cos(t2 - phi) = rhs / |k|
    const double rhs = (bars.r3 * bars.r3 - bars.r2 * bars.r2 - k * k) / (2.0 * bars.r2);
    const double c = rhs / k;
    if (!(std::abs(c) <= 1.0)) return AssemblyError::NoRealRoot;

    const double phi = std::atan2(ky, kx);
    const double offset = std::acos(c);
    const double theta2 = branch == Branch::Open ? phi + offset : phi - offset;

    const double vx = kx + bars.r2 * std::cos(theta2);
    const double vy = ky + bars.r2 * std::sin(theta2);
    const double theta4 = std::atan2(vy, vx);

    return JointAngles{normalize_angle(theta1), normalize_angle(theta2), normalize_angle(theta4)};
}

std::array<double, 2> closure_residual(const BarLengths& bars, const JointAngles& a)
{
    return {
        bars.r1 * std::cos(a.theta1) + bars.r2 * std::cos(a.theta2) - bars.r3 * std::cos(a.theta4) - bars.r4,
        bars.r1 * std::sin(a.theta1) + bars.r2 * std::sin(a.theta2) - bars.r3 * std::sin(a.theta4),
    };
}

Expected<Point2, AssemblyError> coupler_point(const MechanismParams& params, double theta1,
                                              Branch branch)
{
    const auto angles = solve_loop_closure(params.bars, theta1, branch);
    if (!angles) return angles.error();

    const double t2 = angles->theta2;
    const double x = params.bars.r1 * std::cos(theta1) + params.r_ex * std::cos(t2) - params.r_ey * std::sin(t2);
    const double y = params.bars.r1 * std::sin(theta1) + params.r_ex * std::sin(t2) + params.r_ey * std::cos(t2);
    return to_global(params.pose, x, y);
}

std::vector<Expected<Point2, AssemblyError>> trace_path(const MechanismParams& params,
                                                        std::span<const double> theta1_list,
                                                        Branch branch)
{
    std::vector<Expected<Point2, AssemblyError>> out;
    out.reserve(theta1_list.size());
    for (double theta1 : theta1_list)
        out.push_back(coupler_point(params, theta1, branch));
    return out;
}

Expected<LinkagePose, AssemblyError> linkage_pose(const MechanismParams& params, double theta1,
                                                  Branch branch)
{
    const auto angles = solve_loop_closure(params.bars, theta1, branch);
    if (!angles) return angles.error();
    const auto& b = params.bars;
    const auto point = coupler_point(params, theta1, branch);

    LinkagePose pose;
    pose.crank_pivot = to_global(params.pose, 0.0, 0.0);
    pose.crank_tip = to_global(params.pose, b.r1 * std::cos(theta1), b.r1 * std::sin(theta1));
    pose.rocker_pivot = to_global(params.pose, b.r4, 0.0);
    pose.rocker_tip = to_global(params.pose, b.r4 + b.r3 * std::cos(angles->theta4),
                                b.r3 * std::sin(angles->theta4));
    pose.coupler_point = *point;
    return pose;
}

} // namespace mechsynth
