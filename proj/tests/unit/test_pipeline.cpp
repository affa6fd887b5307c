#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hoplink/errors.hpp"
#include "hoplink/pipeline.hpp"
#include "support/oracles.hpp"

using namespace hoplink;

namespace {

UsageMatrix symmetric(std::size_t k, std::initializer_list<std::tuple<std::size_t, std::size_t, double>> entries) {
    UsageMatrix m(k);
    for (auto [i, j, v] : entries) m.set_pair(i, j, v);
    return m;
}

UsageMatrix random_usage(std::size_t k, std::mt19937_64& rng, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 50.0);
    std::bernoulli_distribution zero(zero_prob);
    UsageMatrix m(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) m.set_pair(i, j, zero(rng) ? 0.0 : u(rng));
    if (!m.has_usage()) m.set_pair(0, 1, 1.0);
    return m;
}

}  // namespace

TEST_CASE("normalize divides by the Frobenius norm") {
    const auto n = normalize(symmetric(2, {{0, 1, 3.0}}));
    CHECK(n.at(0, 1) == doctest::Approx(3.0 / std::sqrt(18.0)));
    CHECK(n.at(1, 0) == doctest::Approx(0.7071067811865475));
    CHECK(frobenius_norm(n) == doctest::Approx(1.0));
    CHECK_THROWS_AS(normalize(UsageMatrix(3)), DegenerateInputError);
}

TEST_CASE("normalize ignores positive scaling and is idempotent") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const auto m = random_usage(3 + static_cast<std::size_t>(t % 9), rng);
        const auto once = normalize(m);
        const auto twice = normalize(once);
        std::vector<double> scaled(m.counts().begin(), m.counts().end());
        for (auto& v : scaled) v *= 7.25;
        const auto s = normalize(UsageMatrix::from_counts(m.k(), scaled));
        for (std::size_t i = 0; i < m.counts().size(); ++i) {
            CHECK(std::abs(once.counts()[i] - twice.counts()[i]) <= 1e-12);
            CHECK(std::abs(once.counts()[i] - s.counts()[i]) <= 1e-12);
            CHECK(once.counts()[i] >= 0.0);
            CHECK(once.counts()[i] <= 1.0);
        }
    }
}

TEST_CASE("binarize against an absolute threshold") {
    const auto m = symmetric(3, {{0, 1, 0.8}, {0, 2, 0.1}, {1, 2, 0.6}});
    CHECK(binarize(m, ThresholdSpec::absolute(0.5)) == BipolarPattern::from_ints(std::vector{1, -1, 1}));
    CHECK(binarize(m, ThresholdSpec::absolute(0.0)) == BipolarPattern(3, 1));
    // Equality is active.
    CHECK(binarize(m, ThresholdSpec::absolute(0.6)) == BipolarPattern::from_ints(std::vector{1, -1, 1}));
}

TEST_CASE("quantile thresholds use the nonzero upper triangle") {
    const auto m = symmetric(4, {{0, 1, 0.8}, {0, 2, 0.1}, {1, 2, 0.6}, {2, 3, 0.3}});
    // Nonzero entries 0.1, 0.3, 0.6, 0.8: median 0.45, quartiles by linear
    // interpolation at positions 0.75 and 2.25.
    CHECK(resolve_threshold(m, {}) == doctest::Approx(0.45));
    CHECK(resolve_threshold(m, ThresholdSpec::quantile(0.25)) == doctest::Approx(0.25));
    CHECK(resolve_threshold(m, ThresholdSpec::quantile(0.75)) == doctest::Approx(0.65));
    CHECK(resolve_threshold(m, ThresholdSpec::quantile(0.0)) == doctest::Approx(0.1));
    CHECK(resolve_threshold(m, ThresholdSpec::quantile(1.0)) == doctest::Approx(0.8));
    CHECK(resolve_threshold(m, ThresholdSpec::absolute(0.2)) == 0.2);
    CHECK_THROWS_AS(resolve_threshold(UsageMatrix(3), {}), DegenerateInputError);
    CHECK_THROWS_AS(ThresholdSpec::quantile(1.5).validate(), DomainError);
}

TEST_CASE("binarize is monotone in the threshold") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const auto m = normalize(random_usage(6, rng));
        BipolarPattern prev = binarize(m, ThresholdSpec::absolute(0.0));
        for (double th = 0.05; th <= 1.0001; th += 0.05) {
            const auto cur = binarize(m, ThresholdSpec::absolute(th));
            REQUIRE(cur.size() == 15);
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (prev[i] == -1) CHECK(cur[i] == -1);
            prev = cur;
        }
    }
}

TEST_CASE("usage_to_pattern maps an unused matrix to no links") {
    CHECK(usage_to_pattern(UsageMatrix(4)) == BipolarPattern(6, -1));
    // Median of the nonzero entries sits between 10 and 1.
    const auto p = usage_to_pattern(symmetric(3, {{0, 1, 10.0}, {1, 2, 1.0}}));
    CHECK(p == BipolarPattern::from_ints(std::vector{1, -1, -1}));
}

TEST_CASE("pair index enumerates the upper triangle row by row") {
    CHECK(pair_index(0, 1, 4) == 0);
    CHECK(pair_index(0, 2, 4) == 1);
    CHECK(pair_index(0, 3, 4) == 2);
    CHECK(pair_index(1, 2, 4) == 3);
    CHECK(pair_index(1, 3, 4) == 4);
    CHECK(pair_index(2, 3, 4) == 5);
    for (std::size_t k = 2; k < 15; ++k)
        for (const auto& [pair, idx] : oracle::index_map(k)) CHECK(pair_index(pair.first, pair.second, k) == idx);
}

TEST_CASE("vectorize and devectorize") {
    CHECK(vectorize(AssociationSet(3)) == BipolarPattern(3, -1));

    // Datasets k1, k2, k5 used together, out of five.
    const AssociationSet clique(5, {{0, 1}, {0, 4}, {1, 4}});
    const auto v = vectorize(clique);
    CHECK(v.count_active() == 3);
    CHECK(v[pair_index(0, 1, 5)] == 1);
    CHECK(v[pair_index(0, 4, 5)] == 1);
    CHECK(v[pair_index(1, 4, 5)] == 1);
    CHECK(devectorize(v, 5) == clique);

    CHECK_THROWS_AS(devectorize(BipolarPattern(7, 1), 5), DimensionError);
}

TEST_CASE("round trips over random sets and patterns") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
        const std::size_t k = 2 + static_cast<std::size_t>(t % 12);
        const auto idx = oracle::index_map(k);
        std::bernoulli_distribution pick(0.3);
        std::vector<Link> links;
        oracle::PairSet expect;
        for (const auto& [pair, _] : idx)
            if (pick(rng)) links.push_back({pair.second, pair.first}), expect.insert(pair);
        const AssociationSet s(k, links);
        CHECK(oracle::to_pairs(s) == expect);

        const auto v = vectorize(s);
        for (const auto& [pair, i] : idx) CHECK((v[i] == 1) == (expect.count(pair) == 1));
        CHECK(devectorize(v, k) == s);

        const auto p = oracle::pattern(oracle::random_bits(link_count(k), rng));
        CHECK(vectorize(devectorize(p, k)) == p);
    }
}

TEST_CASE("association set normalises and validates") {
    const AssociationSet s(4, {{2, 1}, {1, 2}, {0, 3}});
    CHECK(s.size() == 2);
    CHECK(s.contains(1, 2));
    CHECK(s.contains(3, 0));
    CHECK_THROWS_AS(AssociationSet(4, {{1, 1}}), DomainError);
    CHECK_THROWS_AS(AssociationSet(4, {{1, 4}}), DomainError);
}

TEST_CASE("usage matrix construction") {
    CHECK_THROWS_AS(UsageMatrix::from_counts(2, {0, 1, 2, 0}), FormatError);
    CHECK_THROWS_AS(UsageMatrix::from_counts(2, {1, 1, 1, 0}), FormatError);
    CHECK_THROWS_AS(UsageMatrix::from_counts(2, {0, -1, -1, 0}), DomainError);
    CHECK_THROWS_AS(UsageMatrix::from_counts(2, {0, 1, 1}), DimensionError);

    const auto in = UsageMatrix::ingest(3, {4, 1, 0, 3, 0, 2, 0, 2, 0});
    CHECK(in.healed_pairs == 1);
    CHECK(in.cleared_diagonal == 1);
    CHECK(in.matrix.at(0, 1) == 3.0);
    CHECK(in.matrix.at(1, 0) == 3.0);
    CHECK(in.matrix.at(0, 0) == 0.0);
    CHECK_THROWS_AS(UsageMatrix::ingest(2, {0, -1, 0, 0}), DomainError);
}
