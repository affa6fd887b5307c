#include "hoplink/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "hoplink/errors.hpp"

namespace hoplink::io {

namespace {

// nlohmann throws its own exception types; surface them as FormatError so
// callers see one error family for bad files.
template <typename F>
auto guarded(std::string_view what, F&& body) {
    try {
        return body();
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

void check_version(const Json& doc, std::string_view what) {
    if (!doc.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
    if (!doc.contains("version")) throw FormatError(std::string(what) + ": missing \"version\"");
    if (doc.at("version").get<int>() != kSchemaVersion) {
        throw FormatError(std::string(what) + ": unsupported version " + doc.at("version").dump());
    }
}

template <typename T>
void read_optional(const Json& doc, const char* key, T& target) {
    if (doc.contains(key)) target = doc.at(key).get<T>();
}

BipolarPattern bits_from_json(const Json& arr) {
    const auto values = arr.get<std::vector<int>>();
    return BipolarPattern::from_ints(values);
}

Json bits_to_json(const BipolarPattern& p) {
    Json arr = Json::array();
    for (Bit b : p.bits()) arr.push_back(static_cast<int>(b));
    return arr;
}

Json cliques_to_json(const std::vector<std::vector<std::size_t>>& cliques) {
    Json arr = Json::array();
    for (const auto& clique : cliques) {
        Json members = Json::array();
        for (std::size_t m : clique) members.push_back(dataset_label(m));
        arr.push_back(std::move(members));
    }
    return arr;
}

std::vector<std::vector<std::size_t>> cliques_from_json(const Json& arr) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& members : arr) {
        if (members.is_string()) {
            out.push_back(parse_clique(members.get<std::string>()));
            continue;
        }
        std::string joined;
        for (const auto& m : members) {
            if (!joined.empty()) joined += ',';
            joined += m.get<std::string>();
        }
        out.push_back(parse_clique(joined));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.emplace_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

std::vector<std::string_view> nonblank_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        if (!trim(line).empty() && trim(line).front() != '#') lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

double parse_number(const std::string& cell) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw FormatError("not a number: '" + cell + "'");
    }
    return v;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

// --- whole-file helpers -----------------------------------------------------

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Json read_json(const fs::path& path) {
    const std::string text = read_text(path);
    return guarded(path.string(), [&] { return Json::parse(text); });
}

void write_json(const fs::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

// --- weights ----------------------------------------------------------------

Json to_json(const WeightState& state) {
    Json doc;
    doc["version"] = kSchemaVersion;
    doc["size"] = state.size();
    doc["rule"] = std::string(to_string(state.rule()));
    doc["pattern_count"] = state.pattern_count();
    doc["oja_rate"] = state.oja_rate();
    doc["bias"] = std::vector<double>(state.bias().begin(), state.bias().end());
    if (state.rule() == LearningRule::hebbian) {
        doc["accum"] = std::vector<std::int64_t>(state.accum().begin(), state.accum().end());
    } else {
        doc["accum"] = std::vector<double>(state.oja_weights().begin(), state.oja_weights().end());
    }
    return doc;
}

WeightState weight_state_from_json(const Json& doc) {
    return guarded("weights", [&] {
        check_version(doc, "weights");
        const auto size = doc.at("size").get<std::size_t>();
        const auto rule = parse_learning_rule(doc.at("rule").get<std::string>());
        const auto count = doc.at("pattern_count").get<std::uint64_t>();
        const auto rate = doc.value("oja_rate", kDefaultOjaRate);
        auto bias = doc.value("bias", std::vector<double>{});
        if (rule == LearningRule::hebbian) {
            return WeightState::from_accum(size, doc.at("accum").get<std::vector<std::int64_t>>(), count,
                                           std::move(bias));
        }
        return WeightState::from_oja_weights(size, doc.at("accum").get<std::vector<double>>(), count, rate,
                                             std::move(bias));
    });
}

// --- patterns ---------------------------------------------------------------

Json pattern_to_json(std::size_t k, const BipolarPattern& p) {
    if (p.size() != link_count(k)) throw DimensionError("pattern length does not match k");
    Json doc;
    doc["version"] = kSchemaVersion;
    doc["k"] = k;
    doc["bits"] = bits_to_json(p);
    return doc;
}

Json recall_result_to_json(std::size_t k, const RecallResult& r) {
    Json doc = pattern_to_json(k, r.state);
    doc["sweeps_used"] = r.sweeps_used;
    doc["converged"] = r.converged;
    return doc;
}

PatternRecord pattern_from_json(const Json& doc) {
    return guarded("pattern", [&] {
        check_version(doc, "pattern");
        PatternRecord rec{doc.at("k").get<std::size_t>(), bits_from_json(doc.at("bits"))};
        if (rec.bits.size() != link_count(rec.k)) {
            throw DimensionError("pattern with k=" + std::to_string(rec.k) + " has " +
                                 std::to_string(rec.bits.size()) + " bits, expected " +
                                 std::to_string(link_count(rec.k)));
        }
        return rec;
    });
}

// --- shards -----------------------------------------------------------------

Json shard_record_to_json(const ShardRecord& record) {
    Json line;
    if (const auto* m = std::get_if<UsageMatrix>(&record)) {
        line["k"] = m->k();
        Json rows = Json::array();
        for (std::size_t i = 0; i < m->k(); ++i) {
            std::vector<double> row(m->counts().begin() + static_cast<std::ptrdiff_t>(i * m->k()),
                                    m->counts().begin() + static_cast<std::ptrdiff_t>((i + 1) * m->k()));
            rows.push_back(std::move(row));
        }
        line["counts"] = std::move(rows);
    } else {
        const auto& p = std::get<PatternRecord>(record);
        line["k"] = p.k;
        line["bits"] = bits_to_json(p.bits);
    }
    return line;
}

ShardRecord shard_record_from_json(const Json& line, Warnings* warnings) {
    return guarded("shard record", [&]() -> ShardRecord {
        if (!line.is_object()) throw FormatError("shard record must be a JSON object");
        const auto k = line.at("k").get<std::size_t>();
        if (line.contains("bits")) {
            PatternRecord rec{k, bits_from_json(line.at("bits"))};
            if (rec.bits.size() != link_count(k)) {
                throw DimensionError("shard pattern with k=" + std::to_string(k) + " has " +
                                     std::to_string(rec.bits.size()) + " bits");
            }
            return rec;
        }
        const auto rows = line.at("counts").get<std::vector<std::vector<double>>>();
        if (rows.size() != k) throw DimensionError("shard counts: expected " + std::to_string(k) + " rows");
        std::vector<double> flat;
        flat.reserve(k * k);
        for (const auto& row : rows) {
            if (row.size() != k) throw DimensionError("shard counts: ragged row");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        auto ingested = UsageMatrix::ingest(k, std::move(flat));
        if (warnings && (ingested.healed_pairs > 0 || ingested.cleared_diagonal > 0)) {
            warnings->push_back("usage matrix healed: " + std::to_string(ingested.healed_pairs) +
                                " asymmetric pair(s) set to max, " + std::to_string(ingested.cleared_diagonal) +
                                " diagonal entr(ies) cleared");
        }
        return std::move(ingested.matrix);
    });
}

std::string format_shard(std::span<const ShardRecord> records) {
    std::string out;
    for (const auto& r : records) out += shard_record_to_json(r).dump() + "\n";
    return out;
}

std::vector<ShardRecord> read_shard_file(const fs::path& path, Warnings* warnings) {
    const std::string text = read_text(path);
    std::vector<ShardRecord> out;
    std::size_t line_no = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const Json doc = guarded(path.string(), [&] { return Json::parse(line); });
            out.push_back(shard_record_from_json(doc, warnings));
        } catch (const Error& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_shard_file(const fs::path& path, std::span<const ShardRecord> records) {
    write_text(path, format_shard(records));
}

std::string shard_file_name(std::size_t id) {
    std::ostringstream os;
    os << "shard-" << std::setw(4) << std::setfill('0') << id << ".jsonl";
    return os.str();
}

std::vector<fs::path> list_shard_files(const fs::path& dir) {
    std::map<std::size_t, fs::path> by_id;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        constexpr std::string_view prefix = "shard-";
        constexpr std::string_view suffix = ".jsonl";
        if (name.size() <= prefix.size() + suffix.size() || !name.starts_with(prefix) || !name.ends_with(suffix)) {
            continue;
        }
        const std::string_view id_text =
            std::string_view(name).substr(prefix.size(), name.size() - prefix.size() - suffix.size());
        std::size_t id = 0;
        const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec != std::errc{} || ptr != id_text.data() + id_text.size()) continue;
        if (!by_id.emplace(id, entry.path()).second) {
            throw FormatError("duplicate shard id " + std::to_string(id) + " in " + dir.string());
        }
    }
    std::vector<fs::path> out;
    for (auto& [id, path] : by_id) out.push_back(std::move(path));
    return out;
}

std::vector<ShardRecord> read_training_input(const fs::path& path, Warnings* warnings) {
    if (!fs::exists(path)) throw FormatError("input " + path.string() + " does not exist");
    if (!fs::is_directory(path)) return read_shard_file(path, warnings);
    std::vector<ShardRecord> out;
    for (const auto& file : list_shard_files(path)) {
        auto records = read_shard_file(file, warnings);
        std::ranges::move(records, std::back_inserter(out));
    }
    return out;
}

// --- configs ----------------------------------------------------------------

Json to_json(const ThresholdSpec& spec) {
    return Json{{"kind", spec.kind == ThresholdSpec::Kind::absolute ? "absolute" : "quantile"},
                {"value", spec.value}};
}

ThresholdSpec threshold_from_json(const Json& doc) {
    return guarded("threshold", [&] {
        ThresholdSpec spec;
        const auto kind = doc.value("kind", std::string("quantile"));
        if (kind == "absolute") {
            spec.kind = ThresholdSpec::Kind::absolute;
        } else if (kind == "quantile") {
            spec.kind = ThresholdSpec::Kind::quantile;
        } else {
            throw SpecError("unknown threshold kind '" + kind + "'");
        }
        spec.value = doc.value("value", 0.5);
        spec.validate();
        return spec;
    });
}

ThresholdSpec parse_threshold(std::string_view text) {
    ThresholdSpec spec;
    std::string_view number = text;
    if (text.starts_with("quantile:")) {
        spec.kind = ThresholdSpec::Kind::quantile;
        number.remove_prefix(9);
    } else if (text.starts_with("absolute:")) {
        spec.kind = ThresholdSpec::Kind::absolute;
        number.remove_prefix(9);
    } else {
        spec.kind = ThresholdSpec::Kind::absolute;
    }
    try {
        spec.value = parse_number(std::string(number));
    } catch (const FormatError&) {
        throw SpecError("bad threshold '" + std::string(text) + "' (expected quantile:Q, absolute:V or V)");
    }
    spec.validate();
    return spec;
}

Json to_json(const RecallConfig& config) {
    return Json{{"mode", std::string(to_string(config.mode))},
                {"theta", config.theta},
                {"max_sweeps", config.max_sweeps},
                {"seed", config.seed}};
}

RecallConfig recall_config_from_json(const Json& doc) {
    return guarded("recall config", [&] {
        RecallConfig config;
        if (doc.contains("mode")) config.mode = parse_update_mode(doc.at("mode").get<std::string>());
        read_optional(doc, "theta", config.theta);
        read_optional(doc, "max_sweeps", config.max_sweeps);
        read_optional(doc, "seed", config.seed);
        config.validate();
        return config;
    });
}

Json to_json(const JobSpec& spec) {
    return Json{{"version", kSchemaVersion},
                {"shards", spec.shard_paths},
                {"shard_count", spec.shard_count},
                {"rule", std::string(to_string(spec.rule))},
                {"oja_rate", spec.oja_rate},
                {"threshold", to_json(spec.threshold)},
                {"recall", to_json(spec.recall)},
                {"test_patterns", spec.test_pattern_paths}};
}

JobSpec job_spec_from_json(const Json& doc) {
    return guarded("job spec", [&] {
        check_version(doc, "job spec");
        JobSpec spec;
        read_optional(doc, "shards", spec.shard_paths);
        read_optional(doc, "shard_count", spec.shard_count);
        if (doc.contains("rule")) spec.rule = parse_learning_rule(doc.at("rule").get<std::string>());
        read_optional(doc, "oja_rate", spec.oja_rate);
        if (doc.contains("threshold")) spec.threshold = threshold_from_json(doc.at("threshold"));
        if (doc.contains("recall")) spec.recall = recall_config_from_json(doc.at("recall"));
        read_optional(doc, "test_patterns", spec.test_pattern_paths);
        spec.validate();
        return spec;
    });
}

Json to_json(const GenSpec& spec) {
    return Json{{"version", kSchemaVersion},
                {"k", spec.k},
                {"p", spec.p},
                {"cliques", cliques_to_json(spec.cliques)},
                {"clique_prob", spec.clique_prob},
                {"count_min", spec.count_min},
                {"count_max", spec.count_max},
                {"background_rate", spec.background_rate},
                {"background_max", spec.background_max},
                {"noise_flip_prob", spec.noise_flip_prob},
                {"seed", spec.seed}};
}

GenSpec gen_spec_from_json(const Json& doc) {
    return guarded("generator spec", [&] {
        check_version(doc, "generator spec");
        GenSpec spec;
        read_optional(doc, "k", spec.k);
        read_optional(doc, "p", spec.p);
        if (doc.contains("cliques")) spec.cliques = cliques_from_json(doc.at("cliques"));
        read_optional(doc, "clique_prob", spec.clique_prob);
        read_optional(doc, "count_min", spec.count_min);
        read_optional(doc, "count_max", spec.count_max);
        read_optional(doc, "background_rate", spec.background_rate);
        read_optional(doc, "background_max", spec.background_max);
        read_optional(doc, "noise_flip_prob", spec.noise_flip_prob);
        read_optional(doc, "seed", spec.seed);
        return spec;
    });
}

Json to_json(const ExperimentConfig& config) {
    return Json{{"version", kSchemaVersion},
                {"k", config.k},
                {"stages", config.stages},
                {"patterns_per_stage", config.patterns_per_stage},
                {"dissimilarity", config.dissimilarity},
                {"noise_flip_prob", config.noise_flip_prob},
                {"repeats", config.repeats},
                {"recall", to_json(config.recall)},
                {"threshold", to_json(config.threshold)},
                {"stored_source", std::string(to_string(config.stored_source))},
                {"cliques", cliques_to_json(config.cliques)},
                {"seed", config.seed}};
}

ExperimentConfig experiment_config_from_json(const Json& doc) {
    return guarded("experiment config", [&] {
        check_version(doc, "experiment config");
        ExperimentConfig config;
        read_optional(doc, "k", config.k);
        read_optional(doc, "stages", config.stages);
        read_optional(doc, "patterns_per_stage", config.patterns_per_stage);
        read_optional(doc, "dissimilarity", config.dissimilarity);
        read_optional(doc, "noise_flip_prob", config.noise_flip_prob);
        read_optional(doc, "repeats", config.repeats);
        if (doc.contains("recall")) config.recall = recall_config_from_json(doc.at("recall"));
        if (doc.contains("threshold")) config.threshold = threshold_from_json(doc.at("threshold"));
        if (doc.contains("stored_source")) {
            config.stored_source = parse_stored_source(doc.at("stored_source").get<std::string>());
        }
        if (doc.contains("cliques")) config.cliques = cliques_from_json(doc.at("cliques"));
        read_optional(doc, "seed", config.seed);
        return config;
    });
}

// --- reports ----------------------------------------------------------------

Json to_json(const AssociationSet& set) {
    Json arr = Json::array();
    for (const auto& l : set.links()) arr.push_back(Json::array({l.i, l.j}));
    return arr;
}

Json to_json(const StageReport& report) {
    return Json{{"version", kSchemaVersion},
                {"stage", report.stage},
                {"beta", to_json(report.beta)},
                {"beta_count", report.beta.size()},
                {"gamma", to_json(report.gamma)},
                {"gamma_count", report.gamma.size()},
                {"cosine_test_vs_stored", report.cosine_test_vs_stored},
                {"cosine_result_vs_stored", report.cosine_result_vs_stored},
                {"recovery_accuracy", report.recovery_accuracy}};
}

StageReport stage_report_from_json(const Json& doc, std::size_t k) {
    return guarded("stage report", [&] {
        check_version(doc, "stage report");
        auto links = [&](const char* key) {
            AssociationSet set(k);
            for (const auto& pair : doc.at(key)) set.insert(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
            return set;
        };
        StageReport r;
        r.stage = doc.at("stage").get<std::size_t>();
        r.beta = links("beta");
        r.gamma = links("gamma");
        r.cosine_test_vs_stored = doc.at("cosine_test_vs_stored").get<double>();
        r.cosine_result_vs_stored = doc.at("cosine_result_vs_stored").get<double>();
        r.recovery_accuracy = doc.at("recovery_accuracy").get<double>();
        return r;
    });
}

Json to_json(const ExperimentSummary& summary) {
    auto ms = [](const MeanSd& v) { return Json{{"mean", v.mean}, {"sd", v.sd}}; };
    Json stages = Json::array();
    for (const auto& s : summary.stages) {
        stages.push_back(Json{{"stage", s.stage},
                              {"beta_count", ms(s.beta_size)},
                              {"gamma_count", ms(s.gamma_size)},
                              {"cosine_result_vs_stored", ms(s.cosine_result_vs_stored)},
                              {"recovery_accuracy", ms(s.recovery_accuracy)}});
    }
    return Json{{"version", kSchemaVersion},
                {"stages", std::move(stages)},
                {"spearman_stage_vs_recovery", number_or_null(summary.spearman_stage_vs_recovery)}};
}

Json to_json(const ExperimentResult& result) {
    Json runs = Json::array();
    for (const auto& run : result.runs) {
        Json stages = Json::array();
        for (const auto& s : run.stages) stages.push_back(to_json(s));
        runs.push_back(Json{{"repeat", run.repeat}, {"seed", run.seed}, {"stages", std::move(stages)}});
    }
    return Json{{"version", kSchemaVersion},
                {"config", to_json(result.config)},
                {"runs", std::move(runs)},
                {"summary", to_json(result.summary)}};
}

std::string stage_report_csv(const StageReport& r) {
    std::ostringstream os;
    os << "stage,beta_count,gamma_count,cosine_test_vs_stored,cosine_result_vs_stored,recovery_accuracy\n"
       << r.stage << ',' << r.beta.size() << ',' << r.gamma.size() << ',' << format_double(r.cosine_test_vs_stored)
       << ',' << format_double(r.cosine_result_vs_stored) << ',' << format_double(r.recovery_accuracy) << '\n';
    return os.str();
}

std::string stage_reports_csv(std::span<const RepeatRun> runs) {
    std::ostringstream os;
    os << "repeat,stage,beta_count,gamma_count,cosine_test_vs_stored,cosine_result_vs_stored,recovery_accuracy\n";
    for (const auto& run : runs) {
        for (const auto& r : run.stages) {
            os << run.repeat << ',' << r.stage << ',' << r.beta.size() << ',' << r.gamma.size() << ','
               << format_double(r.cosine_test_vs_stored) << ',' << format_double(r.cosine_result_vs_stored) << ','
               << format_double(r.recovery_accuracy) << '\n';
        }
    }
    return os.str();
}

std::string summary_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "stage,beta_mean,beta_sd,gamma_mean,gamma_sd,cosine_result_mean,cosine_result_sd,recovery_mean,"
          "recovery_sd\n";
    for (const auto& s : summary.stages) {
        os << s.stage << ',' << format_double(s.beta_size.mean) << ',' << format_double(s.beta_size.sd) << ','
           << format_double(s.gamma_size.mean) << ',' << format_double(s.gamma_size.sd) << ','
           << format_double(s.cosine_result_vs_stored.mean) << ',' << format_double(s.cosine_result_vs_stored.sd)
           << ',' << format_double(s.recovery_accuracy.mean) << ',' << format_double(s.recovery_accuracy.sd) << '\n';
    }
    return os.str();
}

// --- tabular inputs ---------------------------------------------------------

LabeledUsage parse_usage_csv(std::string_view text) {
    const auto lines = nonblank_lines(text);
    if (lines.empty()) throw FormatError("usage CSV is empty");
    auto header = split_csv_line(lines.front());
    // Optional row labels: an empty top-left cell means every row starts
    // with its dataset label.
    const bool row_labels = !header.empty() && header.front().empty();
    if (row_labels) header.erase(header.begin());
    const std::size_t k = header.size();
    if (k < 2) throw FormatError("usage CSV needs at least two dataset labels");
    if (lines.size() - 1 != k) {
        throw DimensionError("usage CSV has " + std::to_string(k) + " labels but " +
                             std::to_string(lines.size() - 1) + " rows");
    }
    std::vector<double> values;
    values.reserve(k * k);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto cells = split_csv_line(lines[r]);
        if (row_labels) {
            if (cells.empty() || cells.front() != header[r - 1]) {
                throw FormatError("usage CSV row " + std::to_string(r) + " label does not match header");
            }
            cells.erase(cells.begin());
        }
        if (cells.size() != k) {
            throw DimensionError("usage CSV row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                                 " values, expected " + std::to_string(k));
        }
        for (const auto& c : cells) values.push_back(parse_number(c));
    }
    auto ingested = UsageMatrix::ingest(k, std::move(values));
    return LabeledUsage{std::move(header), std::move(ingested.matrix), ingested.healed_pairs,
                        ingested.cleared_diagonal};
}

LabeledUsage read_usage_csv(const fs::path& path) { return parse_usage_csv(read_text(path)); }

std::string format_usage_csv(std::span<const std::string> labels, const UsageMatrix& m) {
    if (labels.size() != m.k()) throw DimensionError("label count does not match k");
    std::ostringstream os;
    for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
    os << '\n';
    for (std::size_t i = 0; i < m.k(); ++i) {
        for (std::size_t j = 0; j < m.k(); ++j) os << (j ? "," : "") << format_double(m.at(i, j));
        os << '\n';
    }
    return os.str();
}

AssociationSet parse_links(std::string_view text, std::span<const std::string> labels) {
    AssociationSet set(labels.size());
    auto index_of = [&](const std::string& label) {
        const auto it = std::ranges::find(labels, label);
        if (it == labels.end()) throw FormatError("unknown dataset label '" + label + "'");
        return static_cast<std::size_t>(it - labels.begin());
    };
    for (const auto line : nonblank_lines(text)) {
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) throw FormatError("link line must be 'labelA,labelB': '" + std::string(line) + "'");
        set.insert(index_of(cells[0]), index_of(cells[1]));
    }
    return set;
}

std::string format_links(const AssociationSet& set, std::span<const std::string> labels) {
    if (labels.size() != set.k()) throw DimensionError("label count does not match k");
    std::string out;
    for (const auto& l : set.links()) out += labels[l.i] + "," + labels[l.j] + "\n";
    return out;
}

// --- manifests --------------------------------------------------------------

std::string sha256_file(const fs::path& path) {
    const std::string data = read_text(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw std::runtime_error("sha256 failed for " + path.string());
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < length; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return os.str();
}

}  // namespace hoplink::io
