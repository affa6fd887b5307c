#include "hoplink/mapreduce.hpp"

#include <exception>
#include <mutex>
#include <string>

#include "hoplink/errors.hpp"
#include "hoplink/kernels.hpp"
#include "hoplink/parallel.hpp"

namespace hoplink {

namespace {

// First exception thrown inside an OpenMP loop, rethrown after the loop.
class ExceptionSlot {
public:
    template <typename F>
    void run(F&& body) noexcept {
        try {
            body();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

void merge_into(ShardContribution& acc, const ShardContribution& next) {
    if (next.size == 0 && next.pattern_count == 0) return;
    if (acc.size == 0 && acc.pattern_count == 0) {
        acc.size = next.size;
        acc.partial_accum = next.partial_accum;
        acc.pattern_count = next.pattern_count;
        return;
    }
    if (acc.size != next.size) {
        throw DimensionError("cannot merge contributions of " + std::to_string(acc.size) + " and " +
                             std::to_string(next.size) + " neurons");
    }
    kernels::parallel::add_into(acc.partial_accum, next.partial_accum);
    acc.pattern_count += next.pattern_count;
}

void require_hebbian(const JobSpec& spec) {
    if (spec.rule != LearningRule::hebbian) {
        throw SpecError("only Hebbian accumulators can be reduced; oja jobs train sequentially");
    }
}

WeightState finish(const ShardContribution& merged) {
    if (merged.pattern_count == 0) throw DegenerateInputError("no patterns to train");
    return WeightState::from_accum(merged.size, merged.partial_accum, merged.pattern_count);
}

}  // namespace

std::size_t record_k(const ShardRecord& record) {
    return std::visit(
        [](const auto& r) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(r)>, UsageMatrix>) {
                return r.k();
            } else {
                return r.k;
            }
        },
        record);
}

BipolarPattern record_pattern(const ShardRecord& record, const ThresholdSpec& threshold) {
    if (const auto* m = std::get_if<UsageMatrix>(&record)) return usage_to_pattern(*m, threshold);
    const auto& p = std::get<PatternRecord>(record);
    if (p.bits.size() != link_count(p.k)) {
        throw DimensionError("pattern record with k=" + std::to_string(p.k) + " has " +
                             std::to_string(p.bits.size()) + " bits");
    }
    return p.bits;
}

void JobSpec::validate() const {
    if (shard_count < 1) throw SpecError("shard_count must be >= 1");
    if (rule == LearningRule::oja && shard_count > 1) {
        throw SpecError("oja training is order-dependent and cannot be merged across shards; use shard_count 1");
    }
    threshold.validate();
    recall.validate();
}

ShardContribution map_shard(std::span<const ShardRecord> shard, const JobSpec& spec, std::size_t shard_id) {
    require_hebbian(spec);
    ShardContribution out;
    out.shard_id = shard_id;
    if (shard.empty()) return out;

    const std::size_t k = record_k(shard.front());
    for (const auto& r : shard) {
        if (record_k(r) != k) {
            throw DimensionError("shard " + std::to_string(shard_id) + " mixes k=" + std::to_string(k) +
                                 " and k=" + std::to_string(record_k(r)));
        }
    }
    out.size = link_count(k);
    out.partial_accum.assign(out.size * out.size, 0);
    for (const auto& r : shard) {
        const BipolarPattern bits = record_pattern(r, spec.threshold);
        kernels::parallel::hebbian_accumulate(out.partial_accum, bits.bits());
        ++out.pattern_count;
    }
    return out;
}

std::vector<ShardContribution> map_all(std::span<const std::vector<ShardRecord>> shards, const JobSpec& spec) {
    std::vector<ShardContribution> out(shards.size());
    ExceptionSlot errors;
    const auto count = static_cast<std::ptrdiff_t>(shards.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::ptrdiff_t s = 0; s < count; ++s) {
        const auto id = static_cast<std::size_t>(s);
        errors.run([&] { out[id] = map_shard(shards[id], spec, id); });
    }
    errors.rethrow();
    return out;
}

WeightState reduce(std::span<const ShardContribution> contribs, const JobSpec& spec) {
    require_hebbian(spec);
    ShardContribution merged;
    for (const auto& c : contribs) merge_into(merged, c);
    return finish(merged);
}

WeightState reduce_tree(std::span<const ShardContribution> contribs, const JobSpec& spec) {
    require_hebbian(spec);
    if (contribs.empty()) throw DegenerateInputError("no patterns to train");
    std::vector<ShardContribution> level(contribs.begin(), contribs.end());
    while (level.size() > 1) {
        std::vector<ShardContribution> next((level.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = std::move(level[2 * i]);
            if (2 * i + 1 < level.size()) merge_into(next[i], level[2 * i + 1]);
        }
        level = std::move(next);
    }
    ShardContribution merged;
    merge_into(merged, level.front());
    return finish(merged);
}

std::vector<std::vector<ShardRecord>> partition(std::span<const ShardRecord> records, std::size_t shard_count) {
    if (shard_count < 1) throw SpecError("shard_count must be >= 1");
    std::vector<std::vector<ShardRecord>> shards(shard_count);
    const std::size_t base = records.size() / shard_count;
    const std::size_t extra = records.size() % shard_count;
    std::size_t pos = 0;
    for (std::size_t s = 0; s < shard_count; ++s) {
        const std::size_t take = base + (s < extra ? 1 : 0);
        shards[s].assign(records.begin() + static_cast<std::ptrdiff_t>(pos),
                         records.begin() + static_cast<std::ptrdiff_t>(pos + take));
        pos += take;
    }
    return shards;
}

WeightState train_job(std::span<const ShardRecord> records, const JobSpec& spec) {
    spec.validate();
    if (records.empty()) throw DegenerateInputError("no patterns to train");

    if (spec.rule == LearningRule::oja) {
        const std::size_t k = record_k(records.front());
        WeightState state = WeightState::oja(link_count(k), spec.oja_rate);
        for (const auto& r : records) {
            if (record_k(r) != k) throw DimensionError("training input mixes k values");
            train_oja(state, record_pattern(r, spec.threshold));
        }
        return state;
    }

    const auto shards = partition(records, spec.shard_count);
    const auto contribs = map_all(shards, spec);
    return reduce(contribs, spec);
}

std::vector<RecallResult> predict(const WeightState& state, std::span<const BipolarPattern> tests,
                                  const RecallConfig& config) {
    config.validate();
    std::vector<RecallResult> out(tests.size());
    ExceptionSlot errors;
    const auto count = static_cast<std::ptrdiff_t>(tests.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        errors.run([&] {
            RecallConfig local = config;
            local.seed = derive_seed(config.seed, idx);
            out[idx] = recall(state, tests[idx], local);
        });
    }
    errors.rethrow();
    return out;
}

}  // namespace hoplink
