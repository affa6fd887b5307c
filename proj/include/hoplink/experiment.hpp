#pragma once

// Staged forgetting experiment.
//
// Stage 0 stores one pattern P and recalls it from a noisy probe of the
// test pattern (the test pattern is P itself). Every later stage stores
// `patterns_per_stage` further patterns, each at normalised hamming distance
// >= `dissimilarity` from P, and recalls the same probe again. Each stage is
// scored with evaluate_stage(stage, P, P, recall result).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hoplink/hopfield.hpp"
#include "hoplink/metrics.hpp"
#include "hoplink/pipeline.hpp"

namespace hoplink {

enum class StoredSource {
    random,  // uniform random bipolar pattern
    usage,   // one synthetic usage matrix over `cliques`, binarised
};

std::string_view to_string(StoredSource source) noexcept;
StoredSource parse_stored_source(std::string_view text);

struct ExperimentConfig {
    // L = 21 neurons: the load crosses the ~0.14 L Hebbian capacity around
    // stage 2 and reaches ~0.29 at stage 5, so forgetting sets in gradually.
    std::size_t k = 7;
    std::size_t stages = 6;
    std::size_t patterns_per_stage = 1;
    double dissimilarity = 0.5;
    double noise_flip_prob = 0.1;
    std::size_t repeats = 20;
    RecallConfig recall;
    ThresholdSpec threshold;
    StoredSource stored_source = StoredSource::random;
    std::vector<std::vector<std::size_t>> cliques;
    std::uint64_t seed = 0;

    /// Throws SpecError.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct RepeatRun {
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    std::vector<StageReport> stages;
};

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for fewer than two values
};

struct StageSummary {
    std::size_t stage = 0;
    MeanSd beta_size;
    MeanSd gamma_size;
    MeanSd cosine_result_vs_stored;
    MeanSd recovery_accuracy;
};

struct ExperimentSummary {
    std::vector<StageSummary> stages;
    /// Spearman rank correlation between stage index and mean recovery
    /// accuracy; NaN when undefined (one stage, or a constant series).
    double spearman_stage_vs_recovery = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RepeatRun> runs;
    ExperimentSummary summary;
};

/// One repeat; deterministic given (config, repeat).
RepeatRun run_forgetting_repeat(const ExperimentConfig& config, std::size_t repeat);

/// All repeats, run concurrently, plus the summary.
ExperimentResult run_forgetting(const ExperimentConfig& config);

ExperimentSummary summarize(std::span<const RepeatRun> runs);

MeanSd mean_sd(std::span<const double> values);

/// Average ranks, ties sharing the mean of their positions (1-based).
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks. NaN when either side is
/// constant or the inputs have fewer than two points.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace hoplink
