#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mechsynth/de_engine.hpp"

namespace mechsynth {

/// Final errors at or above this value are reported as "= cap".
inline constexpr double kErrorCap = 1000.0;

struct Thresholds {
    std::vector<double> values; ///< strictly ascending, positive

    /// {0.1 .. 1000} for cases with a frame, {1e-5 .. 10} otherwise.
    static Thresholds for_case(const CaseSpec& spec);
    void validate() const;
};

struct Histogram {
    std::vector<int> cumulative; ///< errors strictly below each threshold
    std::vector<int> per_bin;    ///< [0, t0), [t0, t1), ...
    int above_last = 0;          ///< [t_last, cap)
    int capped = 0;              ///< errors equal to the cap
};

/// Errors are capped at `cap` before counting.
Histogram histogram(std::span<const double> errors, const Thresholds& thresholds, double cap = kErrorCap);

struct BatchStats {
    int runs = 0;
    std::vector<RunRecord> records; ///< ordered by seed
    std::vector<double> errors;     ///< capped final raw errors, same order
    Thresholds thresholds;
    Histogram buckets;
    std::size_t best_run = 0;       ///< index into records
    double mean_wall_time = 0.0;

    /// Equality of everything except timings.
    bool same_result(const BatchStats& other) const;
};

/// Builds statistics from finished runs in any order.
BatchStats aggregate(std::vector<RunRecord> records, const Thresholds& thresholds);

/// Runs seeds seed_base .. seed_base + runs - 1. `workers` = 0 picks the
/// hardware concurrency; each run owns its generator, so the result does not
/// depend on scheduling.
BatchStats batch_run(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg, int runs,
                     std::uint64_t seed_base, unsigned workers = 0);

} // namespace mechsynth
