// hoplink: generate usage workloads, train the associative memory with a
// sharded map/reduce job, recall links, score recall stages and run the
// staged forgetting experiment.
//
// Exit codes: 0 success (non-convergence of recall included), 2 usage or
// validation error, 1 internal error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hoplink/errors.hpp"
#include "hoplink/experiment.hpp"
#include "hoplink/io.hpp"
#include "hoplink/mapreduce.hpp"
#include "hoplink/metrics.hpp"
#include "hoplink/parallel.hpp"
#include "hoplink/synthgen.hpp"

namespace fs = std::filesystem;
using hoplink::io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    CLI::Option* seed_opt = nullptr;
};

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

void print_warnings(const hoplink::io::Warnings& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::vector<std::size_t>> parse_cliques(const std::vector<std::string>& texts) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& text : texts) {
        std::string_view rest = text;
        // Several cliques may share one flag value separated by ';'.
        while (!rest.empty()) {
            const auto semi = rest.find(';');
            const auto part = rest.substr(0, semi);
            if (!part.empty()) out.push_back(hoplink::parse_clique(part));
            if (semi == std::string_view::npos) break;
            rest.remove_prefix(semi + 1);
        }
    }
    return out;
}

Json file_entry(const fs::path& path, const fs::path& base) {
    return Json{{"path", fs::relative(path, base).generic_string()}, {"sha256", hoplink::io::sha256_file(path)}};
}

// --- generate ---------------------------------------------------------------

struct GenerateOptions {
    hoplink::GenSpec spec;
    std::vector<std::string> cliques;
    std::string spec_file;
    std::size_t files = 1;
    CLI::Option* k = nullptr;
    CLI::Option* p = nullptr;
    CLI::Option* cliques_opt = nullptr;
    CLI::Option* clique_prob = nullptr;
    CLI::Option* count_min = nullptr;
    CLI::Option* count_max = nullptr;
    CLI::Option* background_rate = nullptr;
    CLI::Option* background_max = nullptr;
    CLI::Option* noise = nullptr;
};

int run_generate(const GenerateOptions& opts, const GlobalOptions& global) {
    hoplink::GenSpec spec;
    if (!opts.spec_file.empty()) spec = hoplink::io::gen_spec_from_json(hoplink::io::read_json(opts.spec_file));
    const auto& f = opts.spec;
    if (given(opts.k)) spec.k = f.k;
    if (given(opts.p)) spec.p = f.p;
    if (given(opts.cliques_opt)) spec.cliques = parse_cliques(opts.cliques);
    if (given(opts.clique_prob)) spec.clique_prob = f.clique_prob;
    if (given(opts.count_min)) spec.count_min = f.count_min;
    if (given(opts.count_max)) spec.count_max = f.count_max;
    if (given(opts.background_rate)) spec.background_rate = f.background_rate;
    if (given(opts.background_max)) spec.background_max = f.background_max;
    if (given(opts.noise)) spec.noise_flip_prob = f.noise_flip_prob;
    if (given(global.seed_opt)) spec.seed = global.seed;
    spec.validate();
    if (opts.files < 1) throw hoplink::SpecError("--files must be >= 1");

    const fs::path out_dir = global.out.empty() ? fs::path("shards") : fs::path(global.out);
    fs::create_directories(out_dir);

    const auto matrices = hoplink::generate_patterns(spec);
    std::vector<hoplink::ShardRecord> records(matrices.begin(), matrices.end());
    const auto shards = hoplink::partition(records, opts.files);

    Json files = Json::array();
    for (std::size_t s = 0; s < shards.size(); ++s) {
        const fs::path path = out_dir / hoplink::io::shard_file_name(s);
        hoplink::io::write_shard_file(path, shards[s]);
        Json entry = file_entry(path, out_dir);
        entry["records"] = shards[s].size();
        files.push_back(std::move(entry));
    }
    const Json manifest{{"version", hoplink::io::kSchemaVersion},
                        {"command", "generate"},
                        {"spec", hoplink::io::to_json(spec)},
                        {"files", std::move(files)}};
    hoplink::io::write_json(out_dir / "manifest.json", manifest);
    std::cout << "generated " << spec.p << " usage matrices (k=" << spec.k << ") into " << shards.size()
              << " shard file(s) in " << out_dir.string() << '\n';
    return kExitOk;
}

// --- train ------------------------------------------------------------------

struct TrainOptions {
    std::vector<std::string> inputs;
    std::string job_file;
    std::size_t shards = 1;
    std::string rule = "hebbian";
    double oja_rate = hoplink::kDefaultOjaRate;
    std::string threshold;
    CLI::Option* shards_opt = nullptr;
    CLI::Option* rule_opt = nullptr;
    CLI::Option* oja_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
};

int run_train(const TrainOptions& opts, const GlobalOptions& global) {
    hoplink::JobSpec job;
    if (!opts.job_file.empty()) job = hoplink::io::job_spec_from_json(hoplink::io::read_json(opts.job_file));
    if (!opts.inputs.empty()) job.shard_paths = opts.inputs;
    if (given(opts.shards_opt)) job.shard_count = opts.shards;
    if (given(opts.rule_opt)) job.rule = hoplink::parse_learning_rule(opts.rule);
    if (given(opts.oja_opt)) job.oja_rate = opts.oja_rate;
    if (given(opts.threshold_opt)) job.threshold = hoplink::io::parse_threshold(opts.threshold);
    job.validate();
    if (job.shard_paths.empty()) throw hoplink::SpecError("train needs --in (shard directory or file) or --job");

    hoplink::io::Warnings warnings;
    std::vector<hoplink::ShardRecord> records;
    Json inputs = Json::array();
    for (const auto& in : job.shard_paths) {
        auto part = hoplink::io::read_training_input(in, &warnings);
        std::ranges::move(part, std::back_inserter(records));
        const std::vector<fs::path> files =
            fs::is_directory(in) ? hoplink::io::list_shard_files(in) : std::vector<fs::path>{in};
        for (const auto& file : files) {
            inputs.push_back(Json{{"path", file.generic_string()}, {"sha256", hoplink::io::sha256_file(file)}});
        }
    }
    print_warnings(warnings);

    const hoplink::WeightState state = hoplink::train_job(records, job);
    const fs::path out = global.out.empty() ? fs::path("weights.json") : fs::path(global.out);
    hoplink::io::write_json(out, hoplink::io::to_json(state));

    fs::path manifest_path = out;
    manifest_path += ".manifest.json";
    hoplink::io::write_json(manifest_path, Json{{"version", hoplink::io::kSchemaVersion},
                                                {"command", "train"},
                                                {"job", hoplink::io::to_json(job)},
                                                {"inputs", std::move(inputs)},
                                                {"output", file_entry(out, out.parent_path())}});
    std::cout << "pattern_count=" << state.pattern_count() << " L=" << state.size() << " rule="
              << hoplink::to_string(state.rule()) << " -> " << out.string() << '\n';
    return kExitOk;
}

// --- recall -----------------------------------------------------------------

struct RecallOptions {
    std::string weights;
    std::string probe;
    std::string mode = "async";
    double theta = 0.0;
    std::size_t max_sweeps = hoplink::kDefaultMaxSweeps;
};

int run_recall(const RecallOptions& opts, const GlobalOptions& global) {
    const auto state = hoplink::io::weight_state_from_json(hoplink::io::read_json(opts.weights));
    const auto probe = hoplink::io::pattern_from_json(hoplink::io::read_json(opts.probe));
    hoplink::RecallConfig config;
    config.mode = hoplink::parse_update_mode(opts.mode);
    config.theta = opts.theta;
    config.max_sweeps = opts.max_sweeps;
    config.seed = global.seed;
    const auto result = hoplink::recall(state, probe.bits, config);
    const Json doc = hoplink::io::recall_result_to_json(probe.k, result);
    if (global.out.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        hoplink::io::write_json(global.out, doc);
        std::cout << "sweeps_used=" << result.sweeps_used << " converged=" << std::boolalpha << result.converged
                  << " -> " << global.out << '\n';
    }
    return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateOptions {
    std::string stored;
    std::string test;
    std::string result;
    std::size_t stage = 0;
};

int run_evaluate(const EvaluateOptions& opts, const GlobalOptions& global) {
    const auto stored = hoplink::io::pattern_from_json(hoplink::io::read_json(opts.stored));
    const auto test = hoplink::io::pattern_from_json(hoplink::io::read_json(opts.test));
    const auto result = hoplink::io::pattern_from_json(hoplink::io::read_json(opts.result));
    if (stored.k != test.k || stored.k != result.k) {
        throw hoplink::DimensionError("stored, test and result patterns must share k");
    }
    const auto report = hoplink::evaluate_stage(opts.stage, stored.bits, test.bits, result.bits, stored.k);
    const std::string text = global.format == "csv" ? hoplink::io::stage_report_csv(report)
                                                    : hoplink::io::to_json(report).dump(2) + "\n";
    if (global.out.empty()) {
        std::cout << text;
    } else {
        hoplink::io::write_text(global.out, text);
    }
    return kExitOk;
}

// --- experiment forgetting ------------------------------------------------------

struct ExperimentOptions {
    std::string config_file;
    hoplink::ExperimentConfig flags;
    std::string mode = "async";
    std::string threshold;
    std::string stored_source = "random";
    std::vector<std::string> cliques;
    CLI::Option* k = nullptr;
    CLI::Option* stages = nullptr;
    CLI::Option* per_stage = nullptr;
    CLI::Option* dissimilarity = nullptr;
    CLI::Option* noise = nullptr;
    CLI::Option* repeats = nullptr;
    CLI::Option* mode_opt = nullptr;
    CLI::Option* theta = nullptr;
    CLI::Option* max_sweeps = nullptr;
    CLI::Option* threshold_opt = nullptr;
    CLI::Option* source_opt = nullptr;
    CLI::Option* cliques_opt = nullptr;
};

std::string format_stat(double v) {
    if (std::isnan(v)) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

int run_experiment(const ExperimentOptions& opts, const GlobalOptions& global) {
    hoplink::ExperimentConfig config;
    if (!opts.config_file.empty()) {
        config = hoplink::io::experiment_config_from_json(hoplink::io::read_json(opts.config_file));
    }
    const auto& f = opts.flags;
    if (given(opts.k)) config.k = f.k;
    if (given(opts.stages)) config.stages = f.stages;
    if (given(opts.per_stage)) config.patterns_per_stage = f.patterns_per_stage;
    if (given(opts.dissimilarity)) config.dissimilarity = f.dissimilarity;
    if (given(opts.noise)) config.noise_flip_prob = f.noise_flip_prob;
    if (given(opts.repeats)) config.repeats = f.repeats;
    if (given(opts.mode_opt)) config.recall.mode = hoplink::parse_update_mode(opts.mode);
    if (given(opts.theta)) config.recall.theta = f.recall.theta;
    if (given(opts.max_sweeps)) config.recall.max_sweeps = f.recall.max_sweeps;
    if (given(opts.threshold_opt)) config.threshold = hoplink::io::parse_threshold(opts.threshold);
    if (given(opts.source_opt)) config.stored_source = hoplink::parse_stored_source(opts.stored_source);
    if (given(opts.cliques_opt)) config.cliques = parse_cliques(opts.cliques);
    if (given(global.seed_opt)) config.seed = global.seed;
    config.validate();

    const auto result = hoplink::run_forgetting(config);

    if (!global.out.empty()) {
        const fs::path dir = global.out;
        fs::create_directories(dir);
        if (global.format == "csv") {
            hoplink::io::write_text(dir / "stages.csv", hoplink::io::stage_reports_csv(result.runs));
            hoplink::io::write_text(dir / "summary.csv", hoplink::io::summary_csv(result.summary));
        } else {
            hoplink::io::write_json(dir / "reports.json", hoplink::io::to_json(result));
            hoplink::io::write_json(dir / "summary.json", hoplink::io::to_json(result.summary));
        }
        hoplink::io::write_json(dir / "config.json", hoplink::io::to_json(config));
    }

    std::ostringstream os;
    os << "stage  |beta| mean±sd      |gamma| mean±sd     cos(result,stored)  recovery mean±sd\n";
    for (const auto& s : result.summary.stages) {
        os << std::setw(5) << s.stage << "  " << std::setw(7) << format_stat(s.beta_size.mean) << " ± "
           << std::setw(6) << format_stat(s.beta_size.sd) << "  " << std::setw(7) << format_stat(s.gamma_size.mean)
           << " ± " << std::setw(6) << format_stat(s.gamma_size.sd) << "  " << std::setw(18)
           << format_stat(s.cosine_result_vs_stored.mean) << "  " << std::setw(7)
           << format_stat(s.recovery_accuracy.mean) << " ± " << format_stat(s.recovery_accuracy.sd) << '\n';
    }
    os << "spearman(stage, mean recovery) = " << format_stat(result.summary.spearman_stage_vs_recovery) << '\n';
    std::cout << os.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hoplink: Hopfield associative memory for dataset co-usage links"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    global.seed_opt = app.add_option("--seed", global.seed, "RNG seed");
    app.add_option("--out", global.out, "Output file or directory");
    app.add_option("--format", global.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

    // generate
    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate synthetic usage matrices as shard files");
    generate->add_option("--spec", gen.spec_file, "Generator spec JSON (flags override it)");
    gen.k = generate->add_option("--k", gen.spec.k, "Dataset count");
    gen.p = generate->add_option("--p", gen.spec.p, "Usage matrices to generate");
    gen.cliques_opt = generate->add_option("--cliques", gen.cliques, "Clique of co-used datasets, e.g. k1,k2,k5");
    gen.clique_prob = generate->add_option("--clique-prob", gen.spec.clique_prob, "Chance a clique is active");
    gen.count_min = generate->add_option("--count-min", gen.spec.count_min, "Minimum clique co-usage count");
    gen.count_max = generate->add_option("--count-max", gen.spec.count_max, "Maximum clique co-usage count");
    gen.background_rate =
        generate->add_option("--background-rate", gen.spec.background_rate, "Chance of a background link");
    gen.background_max =
        generate->add_option("--background-max", gen.spec.background_max, "Maximum background count");
    gen.noise = generate->add_option("--noise", gen.spec.noise_flip_prob, "Flip probability for test probes");
    generate->add_option("--files", gen.files, "Number of shard files to write");

    // train
    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train weights with a sharded map/reduce job");
    train_cmd->add_option("--in", train.inputs, "Shard directory or shard file (repeatable)");
    train_cmd->add_option("--job", train.job_file, "Job spec JSON (flags override it)");
    train.shards_opt = train_cmd->add_option("--shards", train.shards, "Map workers / shards");
    train.rule_opt = train_cmd->add_option("--rule", train.rule, "hebbian or oja");
    train.oja_opt = train_cmd->add_option("--oja-rate", train.oja_rate, "Oja learning rate");
    train.threshold_opt =
        train_cmd->add_option("--threshold", train.threshold, "quantile:Q or absolute:V (default quantile:0.5)");

    // recall
    RecallOptions rec;
    auto* recall_cmd = app.add_subcommand("recall", "Recall a pattern from trained weights");
    recall_cmd->add_option("--weights", rec.weights, "Weights JSON")->required();
    recall_cmd->add_option("--probe", rec.probe, "Probe pattern JSON")->required();
    recall_cmd->add_option("--mode", rec.mode, "sync or async")->check(CLI::IsMember({"sync", "async"}));
    recall_cmd->add_option("--theta", rec.theta, "Activation threshold");
    recall_cmd->add_option("--max-sweeps", rec.max_sweeps, "Sweep limit");

    // evaluate
    EvaluateOptions eval;
    auto* evaluate = app.add_subcommand("evaluate", "Score a recall result (beta, gamma, cosine, recovery)");
    evaluate->add_option("--stored", eval.stored, "Stored pattern JSON")->required();
    evaluate->add_option("--test", eval.test, "Test pattern JSON")->required();
    evaluate->add_option("--result", eval.result, "Recall result JSON")->required();
    evaluate->add_option("--stage", eval.stage, "Stage index");

    // experiment forgetting
    ExperimentOptions exp;
    auto* experiment = app.add_subcommand("experiment", "Experiments");
    experiment->require_subcommand(1);
    auto* forgetting = experiment->add_subcommand("forgetting", "Staged forgetting experiment");
    forgetting->add_option("--config", exp.config_file, "Experiment config JSON (flags override it)");
    exp.k = forgetting->add_option("--k", exp.flags.k, "Dataset count");
    exp.stages = forgetting->add_option("--stages", exp.flags.stages, "Number of stages");
    exp.per_stage =
        forgetting->add_option("--patterns-per-stage", exp.flags.patterns_per_stage, "Dissimilar patterns per stage");
    exp.dissimilarity =
        forgetting->add_option("--dissimilarity", exp.flags.dissimilarity, "Minimum normalised hamming distance");
    exp.noise = forgetting->add_option("--noise", exp.flags.noise_flip_prob, "Probe flip probability");
    exp.repeats = forgetting->add_option("--repeats", exp.flags.repeats, "Seeded repeats");
    exp.mode_opt =
        forgetting->add_option("--mode", exp.mode, "sync or async")->check(CLI::IsMember({"sync", "async"}));
    exp.theta = forgetting->add_option("--theta", exp.flags.recall.theta, "Activation threshold");
    exp.max_sweeps = forgetting->add_option("--max-sweeps", exp.flags.recall.max_sweeps, "Sweep limit");
    exp.threshold_opt = forgetting->add_option("--threshold", exp.threshold, "Binarisation threshold");
    exp.source_opt = forgetting->add_option("--stored-source", exp.stored_source, "random or usage");
    exp.cliques_opt = forgetting->add_option("--cliques", exp.cliques, "Cliques for --stored-source usage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    hoplink::configure_workers();
    try {
        if (generate->parsed()) return run_generate(gen, global);
        if (train_cmd->parsed()) return run_train(train, global);
        if (recall_cmd->parsed()) return run_recall(rec, global);
        if (evaluate->parsed()) return run_evaluate(eval, global);
        if (forgetting->parsed()) return run_experiment(exp, global);
    } catch (const hoplink::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
