#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace mechsynth {

/// Mutation schemes.
///
/// EitherOr is strategy 6 of the DeMat code ("DE/rand/1 either-or"): each
/// trial is, with even odds, either r0 + F (r1 - r2) or the three-point
/// recombination r0 + K (r1 + r2 - 2 r0) with K = (F + 1) / 2.
/// BestOneBin is best + F (r1 - r2), strategy 6 in the older devec3 code.
/// Both are followed by binomial crossover.
enum class Mutation { EitherOr, BestOneBin };

std::string_view to_string(Mutation mutation);
/// Accepts either-or and best1bin.
Mutation parse_mutation(std::string_view name);

struct DEConfig {
    int np = 100;
    int itermax = 1000;
    double f = 0.3;
    double cr = 0.8;
    double mp = 0.1; ///< per-gene probability of a uniform reset after crossover
    int strategy_id = 6; ///< only 6 is accepted
    Mutation mutation = Mutation::EitherOr;
    std::uint64_t seed = 0;
    std::optional<double> stop_error;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    friend bool operator==(const DEConfig&, const DEConfig&) = default;
};

} // namespace mechsynth
