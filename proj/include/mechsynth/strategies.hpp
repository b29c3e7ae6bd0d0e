#pragma once

#include <array>
#include <limits>
#include <string>
#include <string_view>

#include "mechsynth/expected.hpp"
#include "mechsynth/problem.hpp"
#include "mechsynth/rng.hpp"

namespace mechsynth {

// Constraint-handling strategies. Each one is a pair of hooks into the DE
// loop: R1 builds initial members, R2 post-processes every trial vector
// before it is evaluated.
//
//   NSI     static penalty only; both hooks pass through
//   ASI_IG  resample infeasible members at initialization
//   ASI_AG  as ASI_IG, and resample infeasible trials up to max_retries times
//   LSI     bars come from a generator that only emits Grashof linkages
//   SSI     infeasible bars are repaired in place (rule G4)
enum class StrategyKind { NSI, ASI_IG, ASI_AG, LSI, SSI };

inline constexpr std::array<StrategyKind, 5> kAllStrategies{
    StrategyKind::NSI, StrategyKind::ASI_IG, StrategyKind::ASI_AG, StrategyKind::LSI, StrategyKind::SSI};

std::string_view to_string(StrategyKind kind);
/// Accepts nsi, asi-ig, asi-ag, lsi, ssi (case-insensitive, '_' allowed).
StrategyKind parse_strategy(std::string_view name);

struct StrategySpec {
    StrategyKind kind = StrategyKind::NSI;
    PenaltyWeights weights;
    int max_retries = 6;        ///< ASI_AG resamples per trial
    bool ssi_literal_s = false; ///< evaluate G4 with S exactly as printed (r1 - r4 - r2 + r3)

    void validate() const;
};

struct HookOutcome {
    DesignVector vector;
    bool feasible = false;
    int attempts = 0;
};

/// Objective used by every strategy: the penalized tracking error. The
/// structural strategies keep their members feasible, so their penalty
/// terms are zero and all five share one scale.
class Objective {
public:
    explicit Objective(PenaltyWeights weights) : weights_(weights) {}
    Evaluation operator()(const DesignVector& v, const CaseSpec& spec) const { return evaluate(v, spec, weights_); }
    const PenaltyWeights& weights() const { return weights_; }

private:
    PenaltyWeights weights_;
};

Objective objective_for(const StrategySpec& strategy);

DesignVector uniform_sample(const CaseSpec& spec, Rng& rng);

DesignVector hook_r1(const StrategySpec& strategy, const CaseSpec& spec, Rng& rng);
HookOutcome hook_r2(const StrategySpec& strategy, DesignVector trial, const CaseSpec& spec, Rng& rng);

/// Deterministic core of the Grashof generator: the four-step recurrence
/// on the uniform draws u, followed by placing value i at slot perm[i].
BarLengths lsi_bars_from_stream(const std::array<double, 4>& u, const std::array<std::size_t, 4>& perm);

/// Random Grashof quadruple with every length in (0, 1).
BarLengths lsi_generate_bars(Rng& rng);

struct RepairFailure {
    BarLengths last;
};

struct RepairOptions {
    bool literal_s = false;
    double upper_bound = std::numeric_limits<double>::infinity();
    double lower_bound = 0.0;
    int max_passes = 3;
};

/// Rule G4: grow the two middle-length links by S/2 and S/2 + 0.01, where S
/// is the Grashof violation. Identity on feasible input. Lengths pushed over
/// upper_bound are rescaled together, which keeps the Grashof margin.
Expected<BarLengths, RepairFailure> ssi_repair_g4(const BarLengths& bars, const RepairOptions& options = {});

/// Sorts the crank-angle genes ascending when the case has them and they
/// violate the ordering constraint. Returns true if anything changed.
bool sort_angle_genes(DesignVector& v, const CaseSpec& spec);

} // namespace mechsynth
