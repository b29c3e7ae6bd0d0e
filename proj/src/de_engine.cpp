#include "mechsynth/de_engine.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mechsynth {

namespace {

void update_best(Population& pop)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.values.size(); ++i)
        if (pop.values[i] < pop.values[best]) best = i;
    pop.best_index = best;
}

std::size_t pick_other(std::size_t n, std::initializer_list<std::size_t> excluded, Rng& rng)
{
    for (;;) {
        const std::size_t i = rng.index(n);
        bool clash = false;
        for (std::size_t e : excluded)
            clash = clash || (i == e);
        if (!clash) return i;
    }
}

} // namespace

bool RunRecord::same_result(const RunRecord& o) const
{
    return case_name == o.case_name && strategy == o.strategy && seed == o.seed && rng_id == o.rng_id &&
           best_vector == o.best_vector && best_error == o.best_error && best_penalized == o.best_penalized &&
           history == o.history && raw_history == o.raw_history && stop_generation == o.stop_generation;
}

Population initialize(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg, Rng& rng)
{
    const Objective objective = objective_for(strategy);
    Population pop;
    pop.members.reserve(static_cast<std::size_t>(cfg.np));
    for (int i = 0; i < cfg.np; ++i) {
        pop.members.push_back(hook_r1(strategy, spec, rng));
        const Evaluation e = objective(pop.members.back(), spec);
        pop.values.push_back(e.penalized);
        pop.raw_values.push_back(e.raw);
    }
    update_best(pop);
    return pop;
}

DesignVector best1_mutant(const DesignVector& best, const DesignVector& xa, const DesignVector& xb, double f)
{
    DesignVector out = best;
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = best[j] + f * (xa[j] - xb[j]);
    return out;
}

DesignVector either_or_mutant(const DesignVector& r0, const DesignVector& r1, const DesignVector& r2, double f,
                              bool differential)
{
    DesignVector out = r0;
    const double k = 0.5 * (f + 1.0);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = differential ? r0[j] + f * (r1[j] - r2[j]) : r0[j] + k * (r1[j] + r2[j] - 2.0 * r0[j]);
    return out;
}

DesignVector make_trial(const Population& pop, std::size_t target_index, const DEConfig& cfg, const CaseSpec& spec,
                        Rng& rng)
{
    const std::size_t n = pop.size();
    if (n < 4) throw std::invalid_argument("trial generation needs a population of at least 4");

    const std::size_t a = pick_other(n, {target_index}, rng);
    const std::size_t b = pick_other(n, {target_index, a}, rng);
    DesignVector mutant;
    if (cfg.mutation == Mutation::EitherOr) {
        const std::size_t base = pick_other(n, {target_index, a, b}, rng);
        const bool differential = rng.uniform() < 0.5;
        mutant = either_or_mutant(pop.members[base], pop.members[a], pop.members[b], cfg.f, differential);
    } else {
        mutant = best1_mutant(pop.best(), pop.members[a], pop.members[b], cfg.f);
    }
    const DesignVector& target = pop.members[target_index];

    const std::size_t dim = target.size();
    const std::size_t forced = rng.index(dim);
    DesignVector trial = target;
    for (std::size_t j = 0; j < dim; ++j) {
        const bool take_mutant = rng.uniform() < cfg.cr || j == forced;
        if (take_mutant) trial[j] = mutant[j];
    }
    for (std::size_t j = 0; j < dim; ++j) {
        const GeneBounds& bounds = spec.gene_bounds[j];
        if (rng.uniform() < cfg.mp || !bounds.contains(trial[j])) trial[j] = rng.uniform(bounds.low, bounds.high);
    }
    return trial;
}

void step_generation(Population& pop, const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg,
                     Rng& rng)
{
    const Objective objective = objective_for(strategy);
    const std::size_t n = pop.size();

    std::vector<DesignVector> trials;
    trials.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        HookOutcome outcome = hook_r2(strategy, make_trial(pop, i, cfg, spec, rng), spec, rng);
        trials.push_back(std::move(outcome.vector));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Evaluation e = objective(trials[i], spec);
        if (e.penalized <= pop.values[i]) {
            pop.members[i] = std::move(trials[i]);
            pop.values[i] = e.penalized;
            pop.raw_values[i] = e.raw;
        }
    }
    update_best(pop);
}

RunRecord run(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg, const GenerationObserver& observer)
{
    cfg.validate();
    strategy.validate();
    const auto started = std::chrono::steady_clock::now();

    Rng rng(cfg.seed);
    Population pop = initialize(spec, strategy, cfg, rng);
    if (observer) observer(0, pop);

    RunRecord record;
    record.case_name = spec.name;
    record.strategy = std::string(to_string(strategy.kind));
    record.seed = cfg.seed;
    record.history.reserve(static_cast<std::size_t>(cfg.itermax));
    record.raw_history.reserve(static_cast<std::size_t>(cfg.itermax));

    for (int generation = 1; generation <= cfg.itermax; ++generation) {
        step_generation(pop, spec, strategy, cfg, rng);
        record.history.push_back(pop.best_value());
        record.raw_history.push_back(pop.raw_values[pop.best_index]);
        record.stop_generation = generation;
        if (observer) observer(generation, pop);
        if (cfg.stop_error && pop.best_value() <= *cfg.stop_error) break;
    }

    record.best_vector = pop.best();
    record.best_penalized = pop.best_value();
    record.best_error = pop.raw_values[pop.best_index];
    record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

std::optional<double> convergence_percent(std::span<const double> history, int generation)
{
    if (generation < 1 || static_cast<std::size_t>(generation) > history.size()) return std::nullopt;
    const double initial = history.front();
    if (initial == 0.0 || !std::isfinite(initial)) return std::nullopt;
    return 100.0 * (initial - history[static_cast<std::size_t>(generation) - 1]) / initial;
}

} // namespace mechsynth
