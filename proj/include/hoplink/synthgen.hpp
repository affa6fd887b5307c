#pragma once

// Synthetic data-usage workloads.
//
// Each generated usage matrix models one observation window: every active
// clique (a group of datasets used together) adds one shared high count to
// all of its pairs, and a few unrelated pairs pick up low background counts.
// The construction guarantees that under the default threshold (median of
// the nonzero normalised entries) every clique link binarises to +1 and
// every background link to -1:
//   * all clique links of a matrix carry the same count c >= count_min,
//   * background counts are <= background_max < count_min,
//   * at most as many background links as clique links are drawn,
// so the median never falls above c nor at or below a background value.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hoplink/pattern.hpp"
#include "hoplink/pipeline.hpp"

namespace hoplink {

struct GenSpec {
    std::size_t k = 10;
    std::size_t p = 50;
    std::vector<std::vector<std::size_t>> cliques;  // dataset indices, 0-based
    double clique_prob = 1.0;                       // chance a clique is active in one matrix
    std::uint64_t count_min = 20;
    std::uint64_t count_max = 100;
    double background_rate = 0.0;
    std::uint64_t background_max = 5;
    double noise_flip_prob = 0.1;
    std::uint64_t seed = 0;

    /// Throws SpecError on any violated constraint.
    void validate() const;

    friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

/// "k1" .. "kK": dataset labels are 1-based.
std::string dataset_label(std::size_t index);
std::vector<std::string> default_labels(std::size_t k);

/// Parses a comma-separated clique such as "k1,k2,k5" (or "1,2,5") into
/// 0-based indices. Throws SpecError on malformed labels or fewer than two
/// distinct members.
std::vector<std::size_t> parse_clique(std::string_view text);

/// p usage matrices; matrix n draws from derive_seed(spec.seed, n), so the
/// output is independent of how the work is split.
std::vector<UsageMatrix> generate_patterns(const GenSpec& spec);

/// The n-th matrix of generate_patterns(spec).
UsageMatrix generate_pattern(const GenSpec& spec, std::size_t n);

/// Uniform random bipolar pattern.
BipolarPattern random_pattern(std::size_t length, std::uint64_t seed);

/// Negates each bit independently with probability flip_prob.
/// Throws DomainError for flip_prob outside [0, 1].
BipolarPattern perturb(const BipolarPattern& p, double flip_prob, std::uint64_t seed);

/// A random pattern whose normalised hamming distance from `reference` is
/// at least min_distance: draw uniformly, then flip randomly chosen agreeing
/// bits until the bound holds. Throws DomainError unless 0 < min_distance <= 1.
BipolarPattern generate_dissimilar(const BipolarPattern& reference, double min_distance, std::uint64_t seed);

}  // namespace hoplink
