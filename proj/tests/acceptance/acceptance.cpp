// Acceptance checks. Prints one PASS/FAIL line per criterion with the
// measured value next to its bound; exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hoplink/experiment.hpp"
#include "hoplink/io.hpp"
#include "hoplink/mapreduce.hpp"
#include "hoplink/parallel.hpp"
#include "hoplink/metrics.hpp"
#include "hoplink/synthgen.hpp"
#include "support/oracles.hpp"

using namespace hoplink;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = time_limit_s <= 0 || secs < time_limit_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("[%s] %d %s: %s; %.3f s", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    if (time_limit_s > 0) std::printf(" (limit %.0f s)", time_limit_s);
    std::printf("\n");
    std::fflush(stdout);
}

// 1. One stored pattern at k = 10 is recovered from a 10% noisy probe.
Outcome stage_zero_recovery() {
    const std::size_t k = 10, L = link_count(k);
    int perfect = 0;
    for (std::uint64_t run = 0; run < 100; ++run) {
        const auto stored = random_pattern(L, derive_seed(1, run));
        const auto probe = perturb(stored, 0.1, derive_seed(2, run));
        auto w = WeightState::hebbian(L);
        train(w, stored);
        RecallConfig cfg;
        cfg.seed = derive_seed(3, run);
        const auto r = recall(w, probe, cfg);
        const auto rep = evaluate_stage(0, stored, stored, r.state, k);
        perfect += rep.beta.empty() && rep.gamma.empty() && rep.recovery_accuracy == 1.0;
    }
    return {perfect >= 95, fmt("perfect recovery in %d/100 runs (need >= 95)", perfect)};
}

// 2. Recovery falls as dissimilar patterns accumulate.
Outcome forgetting_trend() {
    ExperimentConfig cfg;  // 6 stages, 1 pattern per stage, distance >= 0.5, 20 repeats
    const auto res = run_forgetting(cfg);
    const auto& s = res.summary;
    const double rho = s.spearman_stage_vs_recovery;
    const double beta0 = s.stages.front().beta_size.mean, beta_last = s.stages.back().beta_size.mean;
    std::string curve;
    for (const auto& st : s.stages) curve += fmt("%s%.3f", curve.empty() ? "" : " ", st.recovery_accuracy.mean);
    const bool pass = rho <= -0.8 && beta_last > beta0;
    return {pass, fmt("k=%zu spearman=%.3f (need <= -0.8), mean|beta| %.3f -> %.3f (need increase), recovery [%s]",
                      cfg.k, rho, beta0, beta_last, curve.c_str())};
}

// 3. Fixed-point fraction brackets the Hebbian capacity.
Outcome capacity_bracket() {
    const std::size_t L = 100;
    auto fraction = [&](std::size_t m) {
        std::size_t fixed = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto w = WeightState::hebbian(L);
            std::vector<BipolarPattern> pats;
            for (std::size_t p = 0; p < m; ++p) pats.push_back(random_pattern(L, derive_seed(seed, p)));
            for (const auto& p : pats) train(w, p);
            for (const auto& p : pats) fixed += is_fixed_point(w, p);
        }
        return static_cast<double>(fixed) / static_cast<double>(20 * m);
    };
    const double low = fraction(10), high = fraction(25);
    return {low >= 0.95 && high <= 0.60,
            fmt("fixed-point fraction %.3f at m=10 (need >= 0.95), %.3f at m=25 (need <= 0.60)", low, high)};
}

// 4. Shard count does not change the trained weights file.
Outcome mapreduce_equivalence() {
    std::vector<ShardRecord> records;
    for (std::size_t n = 0; n < 64; ++n) records.emplace_back(PatternRecord{10, random_pattern(45, derive_seed(4, n))});
    std::vector<std::string> files;
    for (std::size_t shards : {1u, 2u, 8u}) {
        JobSpec spec;
        spec.shard_count = shards;
        files.push_back(io::to_json(train_job(records, spec)).dump(2));
    }
    const bool same = files[0] == files[1] && files[0] == files[2];
    return {same, fmt("serialized weights for 1/2/8 shards %s (%zu bytes)", same ? "identical" : "differ",
                      files[0].size())};
}

// 5. Metrics agree with a bitmask set algebra on every small association set.
Outcome metric_oracle() {
    const std::size_t k = 5, L = link_count(k);
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << L); ++m)
        if (__builtin_popcount(m) <= 4) masks.push_back(m);
    auto to_set = [&](unsigned m) {
        AssociationSet s(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (m >> pair_index(i, j, k) & 1u) s.insert(i, j);
        return s;
    };
    auto to_mask = [&](const AssociationSet& s) {
        unsigned m = 0;
        for (const auto& l : s.links()) m |= 1u << pair_index(l.i, l.j, k);
        return m;
    };
    std::vector<AssociationSet> sets;
    for (unsigned m : masks) sets.push_back(to_set(m));

    std::size_t checked = 0, mismatches = 0;
    for (std::size_t a = 0; a < masks.size(); ++a) {
        for (std::size_t b = 0; b < masks.size(); ++b) {
            const unsigned p = masks[a], r = masks[b];
            const unsigned uni = p | r;
            const double jac = uni == 0 ? 1.0
                                        : static_cast<double>(__builtin_popcount(p & r)) /
                                              static_cast<double>(__builtin_popcount(uni));
            const bool ok = to_mask(beta(sets[a], sets[b])) == (p & ~r) &&
                            to_mask(gamma(sets[b], sets[a])) == (r & ~p) &&
                            recovery_accuracy(sets[a], sets[b]) == jac;
            mismatches += !ok;
            ++checked;
        }
    }
    return {mismatches == 0 && masks.size() == 386,
            fmt("%zu sets, %zu ordered pairs, %zu mismatches", masks.size(), checked, mismatches)};
}

// 6. Async recall never raises the energy; converged states are fixed points.
Outcome energy_monotonicity() {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::size_t> size_dist(2, 50);
    std::size_t updates = 0, rises = 0, converged = 0, not_fixed = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const std::size_t n = size_dist(rng);
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, n / 2))(rng);
        auto w = WeightState::hebbian(n);
        std::vector<std::vector<int>> pats;
        for (std::size_t p = 0; p < m; ++p) pats.push_back(oracle::random_bits(n, rng));
        for (const auto& p : pats) train(w, oracle::pattern(p));
        const auto sums = oracle::hebbian_sums(pats, n);
        std::vector<double> dense(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = static_cast<double>(sums[i][j]) / static_cast<double>(n);

        const auto probe = oracle::random_bits(n, rng);
        double last = oracle::energy(dense, probe);
        RecallConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(inst);
        const auto r = recall(w, oracle::pattern(probe), cfg, [&](std::size_t, bool, const BipolarPattern& s) {
            const double e = oracle::energy(dense, oracle::to_ints(s));
            ++updates;
            if (e > last + 1e-9) ++rises;
            last = e;
        });
        if (r.converged) {
            ++converged;
            // One extra synchronous sweep through the independent oracle.
            not_fixed += !oracle::is_fixed_point(sums, oracle::to_ints(r.state));
        }
    }
    return {rises == 0 && not_fixed == 0,
            fmt("%zu updates, %zu energy rises; %zu/1000 converged, %zu not fixed points", updates, rises, converged,
                not_fixed)};
}

// 7. Encoding round trips, normalisation idempotence and threshold monotonicity.
Outcome pipeline_identities() {
    std::mt19937_64 rng(7);
    std::size_t round_trip_fail = 0, idem_fail = 0, mono_fail = 0;
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
        std::bernoulli_distribution pick(std::uniform_real_distribution<double>(0, 1)(rng));
        oracle::PairSet expect;
        AssociationSet s(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (pick(rng)) s.insert(j, i), expect.insert({i, j});
        const auto back = devectorize(vectorize(s), k);
        const auto p = oracle::pattern(oracle::random_bits(link_count(k), rng));
        round_trip_fail += !(back == s && oracle::to_pairs(back) == expect && vectorize(devectorize(p, k)) == p);

        UsageMatrix m(k);
        std::uniform_real_distribution<double> count(0.0, 1000.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) m.set_pair(i, j, pick(rng) ? count(rng) : 0.0);
        if (!m.has_usage()) m.set_pair(0, 1, 1.0);
        const auto once = normalize(m), twice = normalize(once);
        for (std::size_t i = 0; i < once.counts().size(); ++i)
            worst = std::max(worst, std::abs(once.counts()[i] - twice.counts()[i]));
        idem_fail += worst > 1e-12;

        std::vector<double> thetas;
        for (int i = 0; i < 8; ++i) thetas.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
        std::sort(thetas.begin(), thetas.end());
        auto prev = binarize(once, ThresholdSpec::absolute(thetas[0]));
        for (std::size_t i = 1; i < thetas.size(); ++i) {
            const auto cur = binarize(once, ThresholdSpec::absolute(thetas[i]));
            for (std::size_t b = 0; b < cur.size(); ++b) mono_fail += prev[b] == -1 && cur[b] == 1;
            prev = cur;
        }
    }
    return {round_trip_fail == 0 && idem_fail == 0 && mono_fail == 0,
            fmt("round-trip failures %zu/1000, max idempotence error %.2e (tol 1e-12), monotonicity violations %zu",
                round_trip_fail, worst, mono_fail)};
}

}  // namespace

int main() {
    criterion(1, "stage-zero perfect recovery", 5, stage_zero_recovery);
    criterion(2, "forgetting trend", 30, forgetting_trend);
    criterion(3, "capacity bracket", 60, capacity_bracket);
    criterion(4, "map/reduce equivalence", 0, mapreduce_equivalence);
    criterion(5, "metric oracle equivalence", 0, metric_oracle);
    criterion(6, "energy monotonicity", 0, energy_monotonicity);
    criterion(7, "pipeline identities", 0, pipeline_identities);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
