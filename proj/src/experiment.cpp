#include "hoplink/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hoplink/errors.hpp"
#include "hoplink/parallel.hpp"
#include "hoplink/synthgen.hpp"

namespace hoplink {

namespace {

// Sub-stream tags under a repeat seed.
constexpr std::uint64_t kStoredTag = 0;
constexpr std::uint64_t kProbeTag = 1;
constexpr std::uint64_t kRecallTag = 100;
constexpr std::uint64_t kDissimilarTag = 1'000'000;

BipolarPattern stored_pattern(const ExperimentConfig& config, std::uint64_t seed) {
    const std::size_t length = link_count(config.k);
    if (config.stored_source == StoredSource::random) return random_pattern(length, seed);
    GenSpec gen;
    gen.k = config.k;
    gen.p = 1;
    gen.cliques = config.cliques;
    gen.seed = seed;
    return usage_to_pattern(generate_pattern(gen, 0), config.threshold);
}

}  // namespace

std::string_view to_string(StoredSource source) noexcept {
    return source == StoredSource::random ? "random" : "usage";
}

StoredSource parse_stored_source(std::string_view text) {
    if (text == "random") return StoredSource::random;
    if (text == "usage") return StoredSource::usage;
    throw SpecError("unknown stored-pattern source '" + std::string(text) + "' (expected random or usage)");
}

void ExperimentConfig::validate() const {
    if (k < 2) throw SpecError("experiment needs k >= 2");
    if (stages < 1) throw SpecError("experiment needs stages >= 1");
    if (repeats < 1) throw SpecError("experiment needs repeats >= 1");
    if (!std::isfinite(dissimilarity) || dissimilarity <= 0.0 || dissimilarity > 1.0) {
        throw SpecError("dissimilarity must lie in (0, 1]");
    }
    if (!std::isfinite(noise_flip_prob) || noise_flip_prob < 0.0 || noise_flip_prob > 1.0) {
        throw SpecError("noise_flip_prob must lie in [0, 1]");
    }
    recall.validate();
    threshold.validate();
    if (stored_source == StoredSource::usage) {
        if (cliques.empty()) throw SpecError("stored source 'usage' needs at least one clique");
        GenSpec gen;
        gen.k = k;
        gen.p = 1;
        gen.cliques = cliques;
        gen.validate();
    }
}

RepeatRun run_forgetting_repeat(const ExperimentConfig& config, std::size_t repeat) {
    config.validate();
    RepeatRun run;
    run.repeat = repeat;
    run.seed = derive_seed(config.seed, repeat);

    const BipolarPattern stored = stored_pattern(config, derive_seed(run.seed, kStoredTag));
    const BipolarPattern& test = stored;
    const BipolarPattern probe = perturb(test, config.noise_flip_prob, derive_seed(run.seed, kProbeTag));

    WeightState state = WeightState::hebbian(stored.size());
    train_hebbian(state, stored);

    std::size_t added = 0;
    for (std::size_t stage = 0; stage < config.stages; ++stage) {
        if (stage > 0) {
            for (std::size_t n = 0; n < config.patterns_per_stage; ++n, ++added) {
                train_hebbian(state, generate_dissimilar(stored, config.dissimilarity,
                                                         derive_seed(run.seed, kDissimilarTag + added)));
            }
        }
        RecallConfig rc = config.recall;
        rc.seed = derive_seed(derive_seed(run.seed, kRecallTag), config.recall.seed + stage);
        const RecallResult result = recall(state, probe, rc);
        run.stages.push_back(evaluate_stage(stage, stored, test, result.state, config.k));
    }
    return run;
}

ExperimentResult run_forgetting(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult out;
    out.config = config;
    out.runs.resize(config.repeats);
    const auto count = static_cast<std::ptrdiff_t>(config.repeats);
    // Everything a repeat touches is local to it; validate() above already
    // rejected the only throwing inputs.
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::ptrdiff_t r = 0; r < count; ++r) {
        out.runs[static_cast<std::size_t>(r)] = run_forgetting_repeat(config, static_cast<std::size_t>(r));
    }
    out.summary = summarize(out.runs);
    return out;
}

ExperimentSummary summarize(std::span<const RepeatRun> runs) {
    ExperimentSummary summary;
    if (runs.empty()) return summary;
    const std::size_t stages = runs.front().stages.size();
    std::vector<double> stage_index;
    std::vector<double> mean_recovery;
    for (std::size_t s = 0; s < stages; ++s) {
        std::vector<double> beta_n, gamma_n, cos_r, rec;
        for (const auto& run : runs) {
            const auto& rep = run.stages.at(s);
            beta_n.push_back(static_cast<double>(rep.beta.size()));
            gamma_n.push_back(static_cast<double>(rep.gamma.size()));
            cos_r.push_back(rep.cosine_result_vs_stored);
            rec.push_back(rep.recovery_accuracy);
        }
        StageSummary st{s, mean_sd(beta_n), mean_sd(gamma_n), mean_sd(cos_r), mean_sd(rec)};
        stage_index.push_back(static_cast<double>(s));
        mean_recovery.push_back(st.recovery_accuracy.mean);
        summary.stages.push_back(st);
    }
    summary.spearman_stage_vs_recovery = spearman(stage_index, mean_recovery);
    return summary;
}

MeanSd mean_sd(std::span<const double> values) {
    MeanSd out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("spearman: series lengths differ");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (x.size() < 2) return nan;
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const auto mx = mean_sd(rx).mean;
    const auto my = mean_sd(ry).mean;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return nan;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace hoplink
