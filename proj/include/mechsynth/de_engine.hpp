#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mechsynth/de_config.hpp"
#include "mechsynth/problem.hpp"
#include "mechsynth/rng.hpp"
#include "mechsynth/strategies.hpp"

namespace mechsynth {

struct Population {
    std::vector<DesignVector> members;
    std::vector<double> values;     ///< objective (penalized) values
    std::vector<double> raw_values; ///< tracking errors of the same members
    std::size_t best_index = 0;

    std::size_t size() const { return members.size(); }
    const DesignVector& best() const { return members[best_index]; }
    double best_value() const { return values[best_index]; }
};

struct RunRecord {
    std::string case_name;
    std::string strategy;
    std::uint64_t seed = 0;
    std::string rng_id{Rng::kAlgorithm};
    DesignVector best_vector;
    double best_error = 0.0;          ///< raw tracking error of the final best
    double best_penalized = 0.0;
    std::vector<double> history;      ///< best penalized value after each generation
    std::vector<double> raw_history;  ///< raw error of that best member
    int stop_generation = 0;
    double wall_time = 0.0;           ///< seconds

    /// Field-wise equality excluding wall_time.
    bool same_result(const RunRecord& other) const;
};

/// Called after initialization (generation 0) and after every generation.
using GenerationObserver = std::function<void(int generation, const Population&)>;

Population initialize(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg, Rng& rng);

/// best + f * (xa - xb), gene by gene.
DesignVector best1_mutant(const DesignVector& best, const DesignVector& xa, const DesignVector& xb, double f);

/// Either-or mutant: r0 + f (r1 - r2) when `differential`, otherwise the
/// recombination r0 + (f + 1)/2 (r1 + r2 - 2 r0).
DesignVector either_or_mutant(const DesignVector& r0, const DesignVector& r1, const DesignVector& r2, double f,
                              bool differential);

/// Trial for member target_index: mutant per cfg.mutation from members
/// distinct from each other and from the target, binomial crossover with
/// one forced gene, then the per-gene uniform reset with probability cfg.mp
/// and a uniform re-draw of any gene that left its bounds.
DesignVector make_trial(const Population& pop, std::size_t target_index, const DEConfig& cfg, const CaseSpec& spec,
                        Rng& rng);

/// One generation: trials are built from the population as it stood at the
/// start of the generation, passed through hook R2, evaluated, and accepted
/// when no worse than their target.
void step_generation(Population& pop, const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg,
                     Rng& rng);

RunRecord run(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg,
              const GenerationObserver& observer = {});

/// Relative decrease of the best value from the first recorded generation
/// to `generation` (1-based), in percent. Empty when history[0] is zero or
/// the generation is out of range.
std::optional<double> convergence_percent(std::span<const double> history, int generation);

} // namespace mechsynth
