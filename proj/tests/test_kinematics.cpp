#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mechsynth/kinematics.hpp"
#include "mechsynth/problem.hpp"
#include "oracles.hpp"

using namespace mechsynth;
using std::numbers::pi;

namespace {

double residual_norm(const BarLengths& b, const JointAngles& a)
{
    const auto r = closure_residual(b, a);
    return std::hypot(r[0], r[1]);
}

} // namespace

TEST_CASE("parallelogram at a right crank angle")
{
    const BarLengths bars{1, 2, 1, 2};
    const auto crossed = solve_loop_closure(bars, pi / 2, Branch::Crossed);
    REQUIRE(crossed);
    CHECK(oracle::angle_distance(crossed->theta2, 0.0) < 1e-12);
    CHECK(crossed->theta4 == doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK(residual_norm(bars, *crossed) < 1e-12);
}

TEST_CASE("both roots of a generic linkage match the numerical oracle")
{
    // Frozen from the grid-scan + bisection oracle: 0.857072, 3.998665.
    const BarLengths bars{2, 3, 4, 3};
    const double theta1 = pi / 3;
    const auto roots = oracle::coupler_roots(bars, theta1);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(0.8570719478501312).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(3.9986646014399243).epsilon(1e-9));

    const auto open = solve_loop_closure(bars, theta1, Branch::Open);
    const auto crossed = solve_loop_closure(bars, theta1, Branch::Crossed);
    REQUIRE(open);
    REQUIRE(crossed);
    CHECK(open->theta2 == doctest::Approx(roots[1]).epsilon(1e-9));
    CHECK(crossed->theta2 == doctest::Approx(roots[0]).epsilon(1e-9));
    CHECK(crossed->theta4 == doctest::Approx(1.580).epsilon(1e-3));
    CHECK(residual_norm(bars, *open) < 1e-6);
    CHECK(residual_norm(bars, *crossed) < 1e-6);
}

TEST_CASE("assembly errors")
{
    const auto far = solve_loop_closure({10, 1, 1, 10}, pi, Branch::Open);
    REQUIRE_FALSE(far);
    CHECK(far.error() == AssemblyError::NoRealRoot);

    CHECK(solve_loop_closure({1, 0, 1, 1}, 0.3, Branch::Open).error() == AssemblyError::NonPositiveBar);
    CHECK(solve_loop_closure({1, -2, 1, 1}, 0.3, Branch::Open).error() == AssemblyError::NonPositiveBar);
    // crank tip lands on the rocker pivot
    CHECK(solve_loop_closure({2, 1, 1, 2}, 0.0, Branch::Open).error() == AssemblyError::Degenerate);
    // coupler far below the epsilon guard
    CHECK(solve_loop_closure({1, 1e-14, 1, 1}, 1.0, Branch::Open).error() == AssemblyError::Degenerate);
}

TEST_CASE("angles are normalized into [0, 2pi)")
{
    CHECK(normalize_angle(-1e-18) == 0.0);
    CHECK(normalize_angle(2 * pi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normalize_angle(-pi / 2) == doctest::Approx(1.5 * pi));
    const auto a = solve_loop_closure({2, 3, 4, 3}, -5.0 * pi / 3.0, Branch::Open);
    REQUIRE(a);
    for (double t : {a->theta1, a->theta2, a->theta4}) {
        CHECK(t >= 0.0);
        CHECK(t < kTwoPi);
    }
}

TEST_CASE("coupler point")
{
    SUBCASE("offset-free point is the crank tip")
    {
        const MechanismParams p{{3, 4, 4, 5}, 0, 0, {0, 1.5, -2.5}};
        for (double t : {0.1, 1.0, 2.0, 4.0}) {
            const auto e = coupler_point(p, t, Branch::Open);
            REQUIRE(e);
            CHECK(e->x == doctest::Approx(3 * std::cos(t) + 1.5));
            CHECK(e->y == doctest::Approx(3 * std::sin(t) - 2.5));
        }
    }
    SUBCASE("unit offset along a horizontal coupler")
    {
        const MechanismParams p{{1, 2, 1, 2}, 1, 0, {}};
        const auto e = coupler_point(p, pi / 2, Branch::Crossed);
        REQUIRE(e);
        CHECK(e->x == doctest::Approx(1.0));
        CHECK(e->y == doctest::Approx(1.0));
    }
    SUBCASE("assembly failures propagate")
    {
        const MechanismParams p{{10, 1, 1, 10}, 1, 1, {}};
        const auto e = coupler_point(p, pi, Branch::Open);
        REQUIRE_FALSE(e);
        CHECK(e.error() == AssemblyError::NoRealRoot);
    }
}

TEST_CASE("trace path keeps failures in place")
{
    const MechanismParams parallelogram{{1, 2, 1, 2}, 0.5, 0.25, {}};
    const std::vector<double> angles{0.0, pi / 2, pi};
    const auto pts = trace_path(parallelogram, angles, Branch::Crossed);
    REQUIRE(pts.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(pts[i]);
        const auto single = coupler_point(parallelogram, angles[i], Branch::Crossed);
        CHECK(pts[i]->x == single->x);
        CHECK(pts[i]->y == single->y);
    }

    const MechanismParams stuck{{10, 1, 1, 10}, 0, 0, {}};
    const auto mixed = trace_path(stuck, std::vector<double>{0.05, pi}, Branch::Open);
    CHECK(mixed[0]);
    CHECK_FALSE(mixed[1]);
}

TEST_CASE("case 1 best mechanism rotates fully")
{
    const CaseSpec spec = builtin_case("1");
    const DesignVector v{{40.061, 10.785, 24.47, 43.887, 32.236, 10.064, 3.7921, -2.4468, 56.545, 1.9659, 2.5047,
                          2.9448, 3.3791, 3.8469, 4.3841}};
    const auto params = decode(v, spec).params;
    std::vector<double> sweep(360);
    for (int i = 0; i < 360; ++i)
        sweep[i] = 2 * pi * i / 360;
    for (Branch b : kBranches)
        for (const auto& p : trace_path(params, sweep, b))
            CHECK(p);
}

TEST_CASE("case 2 best vector passes near every target")
{
    const CaseSpec spec = builtin_case("2");
    const DesignVector v{{9.3684, 2.0356, 45.497, 43.807, 2.317, -0.27917}};
    const Decoded d = decode(v, spec);
    const auto pts = trace_path(d.params, d.theta1, branch_errors(d, spec).best_branch());
    double total = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i]);
        const double dist = std::hypot(pts[i]->x - spec.targets[i].x, pts[i]->y - spec.targets[i].y);
        CHECK(dist < std::sqrt(1.354e-4) * 1.1);
        total += dist * dist;
    }
    CHECK(total == doctest::Approx(1.354e-4).epsilon(0.1));
}

TEST_CASE("properties over random linkages")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> len(0.05, 10.0);
    std::uniform_real_distribution<double> ang(-10.0, 10.0);
    int assembled = 0;
    for (int i = 0; i < 2000; ++i) {
        const BarLengths b{len(gen), len(gen), len(gen), len(gen)};
        const double t1 = ang(gen);
        const auto open = solve_loop_closure(b, t1, Branch::Open);
        const auto crossed = solve_loop_closure(b, t1, Branch::Crossed);
        REQUIRE(bool(open) == bool(crossed));
        const auto roots = oracle::coupler_roots(b, t1);
        if (!open) {
            CHECK(roots.empty());
            continue;
        }
        ++assembled;
        CHECK(residual_norm(b, *open) < 1e-9 * b.longest());
        CHECK(residual_norm(b, *crossed) < 1e-9 * b.longest());
        // every oracle root is one of the two closed-form roots
        for (double r : roots) {
            const double d = std::min(oracle::angle_distance(r, open->theta2), oracle::angle_distance(r, crossed->theta2));
            CHECK(d < 1e-6);
        }

        // scale equivariance of the coupler point
        const double lambda = 3.7;
        const MechanismParams p{b, 0.7, -1.3, {0.4, 2.0, -1.0}};
        const MechanismParams q{{b.r1 * lambda, b.r2 * lambda, b.r3 * lambda, b.r4 * lambda},
                                0.7 * lambda, -1.3 * lambda, {0.4, 2.0 * lambda, -1.0 * lambda}};
        const auto e1 = coupler_point(p, t1, Branch::Open);
        const auto e2 = coupler_point(q, t1, Branch::Open);
        REQUIRE(e2);
        CHECK(e2->x == doctest::Approx(lambda * e1->x).epsilon(1e-9));
        CHECK(e2->y == doctest::Approx(lambda * e1->y).epsilon(1e-9));
    }
    CHECK(assembled > 200);
}
