#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mechsynth/de_config.hpp"
#include "mechsynth/feasibility.hpp"
#include "mechsynth/kinematics.hpp"

namespace mechsynth {

/// One candidate solution; gene order is fixed by the owning case.
struct DesignVector {
    std::vector<double> genes;

    std::size_t size() const { return genes.size(); }
    double& operator[](std::size_t i) { return genes[i]; }
    double operator[](std::size_t i) const { return genes[i]; }

    friend bool operator==(const DesignVector&, const DesignVector&) = default;
};

/// Every crank angle is its own gene.
struct GeneAngles {
    std::size_t count = 0;
};

/// Crank angles are fixed by the case.
struct PrescribedAngles {
    std::vector<double> values;
};

/// One base-angle gene; sample i sits at base + i * increment.
struct BaseWithIncrements {
    double increment = 0.0;
    std::size_t count = 0;
};

using InputAngleMode = std::variant<GeneAngles, PrescribedAngles, BaseWithIncrements>;

struct GeneBounds {
    double low = 0.0;
    double high = 0.0;

    bool contains(double x) const { return x >= low && x <= high; }
    friend bool operator==(const GeneBounds&, const GeneBounds&) = default;
};

struct CaseSpec {
    std::string name;
    std::vector<Point2> targets;
    InputAngleMode angle_mode;
    std::vector<GeneBounds> gene_bounds;
    bool has_frame = true;
    DEConfig default_de;

    /// Throws std::invalid_argument when the layout is inconsistent.
    void validate() const;
};

struct PenaltyWeights {
    double w1 = 1000.0; ///< Grashof indicator weight
    double w2 = 1000.0; ///< sequence indicator weight
};

/// Returned as a branch sum when any target angle cannot be assembled.
inline constexpr double kAssemblyFailure = 1e6;

// Layout of the bar block. The four bar genes are stored in the order
// ground, crank, coupler, rocker; the reported best vectors of all three
// benchmark cases are written in this order.
inline constexpr std::size_t kGroundGene = 0;
inline constexpr std::size_t kCrankGene = 1;
inline constexpr std::size_t kCouplerGene = 2;
inline constexpr std::size_t kRockerGene = 3;
inline constexpr std::size_t kBarGeneCount = 4;
inline constexpr std::size_t kOffsetGene = 4;  // r_ex, r_ey
inline constexpr std::size_t kFrameGene = 6;   // theta0, x0, y0 when has_frame

/// Built-in benchmark cases: "1", "2", "2r" (Case 2 with every bound in
/// [0, 5]) and "3". Throws std::invalid_argument for anything else.
CaseSpec builtin_case(std::string_view id);

std::size_t gene_count(const CaseSpec& spec);
std::size_t angle_gene_offset(const CaseSpec& spec);
std::size_t angle_gene_count(const CaseSpec& spec);
/// Upper bound shared by the bar genes (the largest of their highs).
double bar_upper_bound(const CaseSpec& spec);

BarLengths bars_from_genes(const DesignVector& v);
void store_bars(DesignVector& v, const BarLengths& bars);

struct Decoded {
    MechanismParams params;
    std::vector<double> theta1;
};

/// Throws std::invalid_argument on a length mismatch.
Decoded decode(const DesignVector& v, const CaseSpec& spec);

/// Inverse of decode. Angles must follow the case's mode: one per gene for
/// GeneAngles, the base first for BaseWithIncrements, ignored for
/// Prescribed.
DesignVector encode(const MechanismParams& params, std::span<const double> theta1,
                    const CaseSpec& spec);

struct BranchErrors {
    double open = kAssemblyFailure;
    double crossed = kAssemblyFailure;

    double best() const { return open < crossed ? open : crossed; }
    Branch best_branch() const { return open <= crossed ? Branch::Open : Branch::Crossed; }
};

/// Summed squared distance to the targets on each fixed branch.
BranchErrors branch_errors(const DesignVector& v, const CaseSpec& spec);
BranchErrors branch_errors(const Decoded& d, const CaseSpec& spec);

/// Smaller of the two branch sums.
double tracking_error(const DesignVector& v, const CaseSpec& spec);

/// Constraint status of a vector; the sequence check only applies to cases
/// whose crank angles are genes.
ConstraintReport constraint_report(const DesignVector& v, const CaseSpec& spec);
ConstraintReport constraint_report(const Decoded& d, const CaseSpec& spec);

/// tracking_error + w1 [Grashof violated] + w2 [sequence violated].
double penalized_error(const DesignVector& v, const CaseSpec& spec, const PenaltyWeights& w = {});

/// Both objective values from a single decode.
struct Evaluation {
    double raw = 0.0;
    double penalty = 0.0; ///< 0, w1, w2 or w1 + w2
    double penalized = 0.0;
};

Evaluation evaluate(const DesignVector& v, const CaseSpec& spec, const PenaltyWeights& w = {});

} // namespace mechsynth
