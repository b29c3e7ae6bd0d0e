#include "mechsynth/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace mechsynth {

Thresholds Thresholds::for_case(const CaseSpec& spec)
{
    if (spec.has_frame) return {{0.1, 1, 10, 100, 200, 500, 1000}};
    return {{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1, 10}};
}

void Thresholds::validate() const
{
    if (values.empty()) throw std::invalid_argument("thresholds must not be empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::invalid_argument("thresholds must be positive");
        if (i > 0 && !(values[i] > values[i - 1])) throw std::invalid_argument("thresholds must be strictly ascending");
    }
}

Histogram histogram(std::span<const double> errors, const Thresholds& thresholds, double cap)
{
    thresholds.validate();
    const auto& t = thresholds.values;
    Histogram h;
    h.cumulative.assign(t.size(), 0);
    h.per_bin.assign(t.size(), 0);
    for (double raw : errors) {
        const double e = std::isnan(raw) ? cap : std::min(raw, cap);
        if (e >= cap) {
            ++h.capped;
            continue;
        }
        const auto bin = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), e) - t.begin());
        if (bin == t.size())
            ++h.above_last;
        else
            ++h.per_bin[bin];
        for (std::size_t i = bin; i < t.size(); ++i)
            ++h.cumulative[i];
    }
    return h;
}

bool BatchStats::same_result(const BatchStats& o) const
{
    if (runs != o.runs || errors != o.errors || thresholds.values != o.thresholds.values ||
        buckets.cumulative != o.buckets.cumulative || buckets.per_bin != o.buckets.per_bin ||
        buckets.above_last != o.buckets.above_last || buckets.capped != o.buckets.capped || best_run != o.best_run ||
        records.size() != o.records.size())
        return false;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (!records[i].same_result(o.records[i])) return false;
    return true;
}

BatchStats aggregate(std::vector<RunRecord> records, const Thresholds& thresholds)
{
    if (records.empty()) throw std::invalid_argument("cannot aggregate an empty batch");
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });

    BatchStats stats;
    stats.runs = static_cast<int>(records.size());
    stats.thresholds = thresholds;
    double total_time = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double e = records[i].best_error;
        stats.errors.push_back(std::isnan(e) ? kErrorCap : std::min(e, kErrorCap));
        total_time += records[i].wall_time;
        if (records[i].best_error < records[stats.best_run].best_error) stats.best_run = i;
    }
    stats.buckets = histogram(stats.errors, thresholds);
    stats.mean_wall_time = total_time / static_cast<double>(records.size());
    stats.records = std::move(records);
    return stats;
}

BatchStats batch_run(const CaseSpec& spec, const StrategySpec& strategy, const DEConfig& cfg, int runs,
                     std::uint64_t seed_base, unsigned workers)
{
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    cfg.validate();
    strategy.validate();

    std::vector<RunRecord> records(static_cast<std::size_t>(runs));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (int i = next++; i < runs && !failed; i = next++) {
            try {
                DEConfig local = cfg;
                local.seed = seed_base + static_cast<std::uint64_t>(i);
                records[static_cast<std::size_t>(i)] = run(spec, strategy, local);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(runs));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate(std::move(records), Thresholds::for_case(spec));
}

} // namespace mechsynth
