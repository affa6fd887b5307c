#pragma once

// File formats. Every JSON document carries "version": 1.
//
//   weights      {"version","size","rule","pattern_count","oja_rate","bias":[..],
//                 "accum":[row-major ints (hebbian) | reals (oja)]}
//   pattern      {"version","k","bits":[±1..]}  (+ "sweeps_used","converged" for recall output)
//   shard line   {"k":int,"bits":[±1..]}  or  {"k":int,"counts":[[..],..]}
//   job spec     {"version","shards":[..],"shard_count","rule","oja_rate",
//                 "threshold":{"kind","value"},"recall":{..},"test_patterns":[..]}
//   stage report {"version","stage","beta":[[i,j]..],"beta_count","gamma":[[i,j]..],
//                 "gamma_count","cosine_test_vs_stored","cosine_result_vs_stored",
//                 "recovery_accuracy"}
//   usage CSV    header row of k labels, then k rows of k counts
//   links file   one "labelA,labelB" pair per line

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hoplink/experiment.hpp"
#include "hoplink/hopfield.hpp"
#include "hoplink/mapreduce.hpp"
#include "hoplink/metrics.hpp"
#include "hoplink/pipeline.hpp"
#include "hoplink/synthgen.hpp"
#include "hoplink/weight_state.hpp"

namespace hoplink::io {

using Json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kSchemaVersion = 1;

// Warnings raised while reading lenient inputs (healed usage matrices).
using Warnings = std::vector<std::string>;

// --- whole-file helpers -----------------------------------------------------

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);
Json read_json(const fs::path& path);
/// Two-space indented, trailing newline; byte-stable for equal documents.
void write_json(const fs::path& path, const Json& doc);

// --- weights ----------------------------------------------------------------

Json to_json(const WeightState& state);
WeightState weight_state_from_json(const Json& doc);

// --- patterns ---------------------------------------------------------------

Json pattern_to_json(std::size_t k, const BipolarPattern& p);
Json recall_result_to_json(std::size_t k, const RecallResult& r);
/// Accepts pattern documents and recall outputs (extra fields ignored).
PatternRecord pattern_from_json(const Json& doc);

// --- shards -----------------------------------------------------------------

Json shard_record_to_json(const ShardRecord& record);
ShardRecord shard_record_from_json(const Json& line, Warnings* warnings = nullptr);

std::string format_shard(std::span<const ShardRecord> records);
std::vector<ShardRecord> read_shard_file(const fs::path& path, Warnings* warnings = nullptr);
void write_shard_file(const fs::path& path, std::span<const ShardRecord> records);

/// "shard-<id>.jsonl" files in `dir`, ordered by numeric id.
std::vector<fs::path> list_shard_files(const fs::path& dir);
std::string shard_file_name(std::size_t id);

/// Records of a shard directory (in shard-id order) or of a single file.
std::vector<ShardRecord> read_training_input(const fs::path& path, Warnings* warnings = nullptr);

// --- configs ----------------------------------------------------------------

Json to_json(const ThresholdSpec& spec);
ThresholdSpec threshold_from_json(const Json& doc);
/// "quantile:0.5", "absolute:0.3" or a bare number (absolute).
ThresholdSpec parse_threshold(std::string_view text);

Json to_json(const RecallConfig& config);
RecallConfig recall_config_from_json(const Json& doc);

Json to_json(const JobSpec& spec);
JobSpec job_spec_from_json(const Json& doc);

Json to_json(const GenSpec& spec);
GenSpec gen_spec_from_json(const Json& doc);

Json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const Json& doc);

// --- reports ----------------------------------------------------------------

Json to_json(const AssociationSet& set);
Json to_json(const StageReport& report);
StageReport stage_report_from_json(const Json& doc, std::size_t k);

Json to_json(const ExperimentSummary& summary);
Json to_json(const ExperimentResult& result);

/// One row per stage report: repeat,stage,beta_count,gamma_count,cosines,recovery.
std::string stage_reports_csv(std::span<const RepeatRun> runs);
std::string stage_report_csv(const StageReport& report);
std::string summary_csv(const ExperimentSummary& summary);

// --- tabular inputs ---------------------------------------------------------

struct LabeledUsage {
    std::vector<std::string> labels;
    UsageMatrix matrix;
    std::size_t healed_pairs = 0;
    std::size_t cleared_diagonal = 0;
};

LabeledUsage parse_usage_csv(std::string_view text);
LabeledUsage read_usage_csv(const fs::path& path);
std::string format_usage_csv(std::span<const std::string> labels, const UsageMatrix& m);

/// Pairs given by label; labels map to indices in `labels` order.
AssociationSet parse_links(std::string_view text, std::span<const std::string> labels);
std::string format_links(const AssociationSet& set, std::span<const std::string> labels);

// --- manifests --------------------------------------------------------------

/// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const fs::path& path);

}  // namespace hoplink::io
