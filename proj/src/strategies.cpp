#include "mechsynth/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mechsynth {

namespace {

// Safety net for resampling loops on user-supplied cases whose feasible
// region may be empty. The built-in cases need a few hundred draws at most.
constexpr long kMaxResamples = 10'000'000;

bool feasible(const DesignVector& v, const CaseSpec& spec)
{
    return constraint_report(v, spec).feasible();
}

bool bars_in_bounds(const BarLengths& bars, const CaseSpec& spec)
{
    DesignVector probe{std::vector<double>(kBarGeneCount)};
    store_bars(probe, bars);
    for (std::size_t i = 0; i < kBarGeneCount; ++i)
        if (!spec.gene_bounds[i].contains(probe[i])) return false;
    return true;
}

BarLengths scaled(const BarLengths& unit, double factor)
{
    return {unit.r1 * factor, unit.r2 * factor, unit.r3 * factor, unit.r4 * factor};
}

/// Generator draw scaled to the case's bar bound.
BarLengths lsi_case_bars(const CaseSpec& spec, Rng& rng)
{
    const double upper = bar_upper_bound(spec);
    for (long i = 0; i < kMaxResamples; ++i) {
        const BarLengths bars = scaled(lsi_generate_bars(rng), upper);
        if (grashof_satisfied(bars) && bars_in_bounds(bars, spec)) return bars;
    }
    throw std::runtime_error("LSI generator cannot satisfy the bar bounds of case '" + spec.name + "'");
}

/// G4 repair scaled to the case; falls back to a generator draw when the
/// repair reports failure.
BarLengths ssi_case_bars(const BarLengths& bars, const StrategySpec& strategy, const CaseSpec& spec, Rng& rng)
{
    RepairOptions options;
    options.literal_s = strategy.ssi_literal_s;
    options.upper_bound = bar_upper_bound(spec);
    auto repaired = ssi_repair_g4(bars, options);
    if (repaired && bars_in_bounds(*repaired, spec)) return *repaired;
    return lsi_case_bars(spec, rng);
}

DesignVector resample_until_feasible(const CaseSpec& spec, Rng& rng)
{
    for (long i = 0; i < kMaxResamples; ++i) {
        DesignVector v = uniform_sample(spec, rng);
        if (feasible(v, spec)) return v;
    }
    throw std::runtime_error("no feasible vector found for case '" + spec.name + "'");
}

} // namespace

std::string_view to_string(StrategyKind kind)
{
    switch (kind) {
    case StrategyKind::NSI: return "nsi";
    case StrategyKind::ASI_IG: return "asi-ig";
    case StrategyKind::ASI_AG: return "asi-ag";
    case StrategyKind::LSI: return "lsi";
    case StrategyKind::SSI: return "ssi";
    }
    return "unknown";
}

StrategyKind parse_strategy(std::string_view name)
{
    std::string key;
    for (char c : name)
        key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (StrategyKind kind : kAllStrategies)
        if (key == to_string(kind)) return kind;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "' (expected nsi, asi-ig, asi-ag, lsi or ssi)");
}

void StrategySpec::validate() const
{
    if (kind == StrategyKind::ASI_AG && max_retries < 1) throw std::invalid_argument("max_retries must be at least 1");
    if (!(weights.w1 >= 0.0) || !(weights.w2 >= 0.0)) throw std::invalid_argument("penalty weights must be non-negative");
}

Objective objective_for(const StrategySpec& strategy)
{
    return Objective(strategy.weights);
}

DesignVector uniform_sample(const CaseSpec& spec, Rng& rng)
{
    DesignVector v{std::vector<double>(spec.gene_bounds.size())};
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = rng.uniform(spec.gene_bounds[i].low, spec.gene_bounds[i].high);
    return v;
}

bool sort_angle_genes(DesignVector& v, const CaseSpec& spec)
{
    if (!std::holds_alternative<GeneAngles>(spec.angle_mode)) return false;
    const auto first = v.genes.begin() + static_cast<std::ptrdiff_t>(angle_gene_offset(spec));
    const auto last = first + static_cast<std::ptrdiff_t>(angle_gene_count(spec));
    if (sequence_satisfied(std::span<const double>(&*first, static_cast<std::size_t>(last - first)))) return false;
    std::sort(first, last);
    return true;
}

DesignVector hook_r1(const StrategySpec& strategy, const CaseSpec& spec, Rng& rng)
{
    switch (strategy.kind) {
    case StrategyKind::NSI:
        return uniform_sample(spec, rng);
    case StrategyKind::ASI_IG:
    case StrategyKind::ASI_AG:
        return resample_until_feasible(spec, rng);
    case StrategyKind::LSI: {
        DesignVector v = uniform_sample(spec, rng);
        store_bars(v, lsi_case_bars(spec, rng));
        sort_angle_genes(v, spec);
        return v;
    }
    case StrategyKind::SSI: {
        DesignVector v = uniform_sample(spec, rng);
        store_bars(v, ssi_case_bars(bars_from_genes(v), strategy, spec, rng));
        sort_angle_genes(v, spec);
        return v;
    }
    }
    throw std::logic_error("unhandled strategy");
}

HookOutcome hook_r2(const StrategySpec& strategy, DesignVector trial, const CaseSpec& spec, Rng& rng)
{
    switch (strategy.kind) {
    case StrategyKind::NSI:
    case StrategyKind::ASI_IG: {
        const bool ok = feasible(trial, spec);
        return {std::move(trial), ok, 0};
    }
    case StrategyKind::ASI_AG: {
        if (feasible(trial, spec)) return {std::move(trial), true, 0};
        for (int attempt = 1; attempt <= strategy.max_retries; ++attempt) {
            trial = uniform_sample(spec, rng);
            if (feasible(trial, spec)) return {std::move(trial), true, attempt};
        }
        return {std::move(trial), false, strategy.max_retries};
    }
    case StrategyKind::LSI:
    case StrategyKind::SSI: {
        int changes = 0;
        const BarLengths bars = bars_from_genes(trial);
        if (!grashof_satisfied(bars)) {
            store_bars(trial, strategy.kind == StrategyKind::LSI ? lsi_case_bars(spec, rng)
                                                                 : ssi_case_bars(bars, strategy, spec, rng));
            ++changes;
        }
        if (sort_angle_genes(trial, spec)) ++changes;
        return {std::move(trial), true, changes > 0 ? 1 : 0};
    }
    }
    throw std::logic_error("unhandled strategy");
}

BarLengths lsi_bars_from_stream(const std::array<double, 4>& u, const std::array<std::size_t, 4>& perm)
{
    const double r_max = u[0];
    const double r_b = u[1] * r_max;
    const double r_c = r_max + (u[2] - 1.0) * r_b;
    const double r_min = u[3] * (r_b + r_c - r_max);

    const std::array<double, 4> values{r_max, r_b, r_c, r_min};
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        out[perm[i]] = values[i];
    return BarLengths::from_array(out);
}

BarLengths lsi_generate_bars(Rng& rng)
{
    for (;;) {
        const std::array<double, 4> u{rng.uniform_open(), rng.uniform_open(), rng.uniform_open(), rng.uniform_open()};
        std::array<std::size_t, 4> perm{0, 1, 2, 3};
        rng.shuffle(std::span<std::size_t>(perm));
        const BarLengths bars = lsi_bars_from_stream(u, perm);
        // The recurrence is strictly Grashof in exact arithmetic; redraw on
        // the rare rounding tie when u[3] is within an ulp of 1.
        if (grashof_satisfied(bars)) return bars;
    }
}

Expected<BarLengths, RepairFailure> ssi_repair_g4(const BarLengths& bars, const RepairOptions& options)
{
    if (grashof_satisfied(bars)) return bars;

    std::array<double, 4> v = bars.as_array();
    for (int pass = 0; pass < options.max_passes; ++pass) {
        // Rank longest-first; ties keep positional order. Ranks play the
        // roles r1 > r2 > r3 > r4 of the printed rule.
        std::array<std::size_t, 4> rank{0, 1, 2, 3};
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
        const double longest = v[rank[0]];
        const double upper_mid = v[rank[1]];
        const double lower_mid = v[rank[2]];
        const double shortest = v[rank[3]];

        const double s = options.literal_s ? longest - shortest - upper_mid + lower_mid
                                           : std::max(0.0, shortest + longest - upper_mid - lower_mid);
        v[rank[1]] = upper_mid + s / 2.0;
        v[rank[2]] = lower_mid + s / 2.0 + 0.01;
        if (grashof_satisfied(BarLengths::from_array(v))) break;
    }

    BarLengths out = BarLengths::from_array(v);
    if (!grashof_satisfied(out)) return RepairFailure{out};

    const double longest = out.longest();
    if (longest > options.upper_bound) {
        out = scaled(out, options.upper_bound / longest);
        // rounding in the scale factor may leave the maximum a hair above
        for (double* r : {&out.r1, &out.r2, &out.r3, &out.r4})
            *r = std::min(*r, options.upper_bound);
        if (!grashof_satisfied(out)) return RepairFailure{out};
    }
    for (double r : out.as_array())
        if (r < options.lower_bound) return RepairFailure{out};
    return out;
}

} // namespace mechsynth
