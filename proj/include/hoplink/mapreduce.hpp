#pragma once

// Training as a two-phase map/reduce job.
//
// Map: every shard is turned into bipolar patterns (usage matrices go
// through normalise + threshold first) and folded into a private integer
// accumulator. Reduce: the partial accumulators are summed. Integer
// addition is commutative and associative, so the merged state is
// bit-identical for any shard count, shard order or reduction tree.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hoplink/hopfield.hpp"
#include "hoplink/pattern.hpp"
#include "hoplink/pipeline.hpp"
#include "hoplink/weight_state.hpp"

namespace hoplink {

/// An already-bipolar link pattern over k datasets.
struct PatternRecord {
    std::size_t k = 0;
    BipolarPattern bits;

    friend bool operator==(const PatternRecord&, const PatternRecord&) = default;
};

/// One line of a shard file.
using ShardRecord = std::variant<UsageMatrix, PatternRecord>;

std::size_t record_k(const ShardRecord& record);

/// Bipolar form of a record (usage matrices via usage_to_pattern).
BipolarPattern record_pattern(const ShardRecord& record, const ThresholdSpec& threshold);

struct ShardContribution {
    std::size_t shard_id = 0;
    std::size_t size = 0;  // neurons; 0 for an empty shard
    std::vector<std::int64_t> partial_accum;
    std::uint64_t pattern_count = 0;

    friend bool operator==(const ShardContribution&, const ShardContribution&) = default;
};

inline constexpr int kJobSpecVersion = 1;

struct JobSpec {
    std::vector<std::string> shard_paths;
    std::size_t shard_count = 1;
    LearningRule rule = LearningRule::hebbian;
    double oja_rate = kDefaultOjaRate;
    ThresholdSpec threshold;
    RecallConfig recall;
    std::vector<std::string> test_pattern_paths;

    /// Throws SpecError: shard_count >= 1, Oja only with one shard, valid
    /// threshold and recall config.
    void validate() const;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Map phase for one shard (Hebbian only). Throws DimensionError when the
/// shard mixes k values, SpecError for an Oja job.
ShardContribution map_shard(std::span<const ShardRecord> shard, const JobSpec& spec, std::size_t shard_id = 0);

/// map_shard over every shard, shards processed concurrently.
std::vector<ShardContribution> map_all(std::span<const std::vector<ShardRecord>> shards, const JobSpec& spec);

/// Left fold of the partial accumulators. Empty contributions are skipped.
/// Throws DimensionError on mismatched sizes, DegenerateInputError when no
/// contribution holds any pattern.
WeightState reduce(std::span<const ShardContribution> contribs, const JobSpec& spec);

/// Pairwise tree reduction; same result as reduce().
WeightState reduce_tree(std::span<const ShardContribution> contribs, const JobSpec& spec);

/// Contiguous split of `records` into `shard_count` shards (the first
/// records.size() % shard_count shards get one extra record).
std::vector<std::vector<ShardRecord>> partition(std::span<const ShardRecord> records, std::size_t shard_count);

/// Full training job: Hebbian runs map_all + reduce over
/// partition(records, spec.shard_count); Oja trains sequentially on the
/// single shard. Throws DegenerateInputError for no records.
WeightState train_job(std::span<const ShardRecord> records, const JobSpec& spec);

/// Recall for every test pattern, concurrently. Pattern n uses the seed
/// derive_seed(config.seed, n).
std::vector<RecallResult> predict(const WeightState& state, std::span<const BipolarPattern> tests,
                                  const RecallConfig& config);

}  // namespace hoplink
