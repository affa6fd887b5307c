#pragma once

// From raw co-usage counts to bipolar link patterns:
//   usage counts -> Frobenius normalisation -> threshold -> upper-triangular
//   bipolar vector.

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "hoplink/pattern.hpp"

namespace hoplink {

/// k x k co-usage frequencies: nonnegative, symmetric, zero diagonal.
class UsageMatrix {
public:
    UsageMatrix() = default;

    /// Zero matrix of k datasets.
    explicit UsageMatrix(std::size_t k);

    /// Strict construction from row-major values; every invariant must
    /// already hold. Throws DimensionError, DomainError (negative or
    /// non-finite), FormatError (asymmetric or nonzero diagonal).
    static UsageMatrix from_counts(std::size_t k, std::vector<double> counts);

    struct Ingested;
    /// Lenient construction for raw input: an asymmetric pair is healed to
    /// max(a_ij, a_ji) and a nonzero diagonal is cleared. Negative or
    /// non-finite values are still rejected.
    static Ingested ingest(std::size_t k, std::vector<double> counts);

    std::size_t k() const noexcept { return k_; }
    double at(std::size_t i, std::size_t j) const { return counts_.at(i * k_ + j); }
    std::span<const double> counts() const noexcept { return counts_; }

    /// Sets both (i, j) and (j, i). Throws on i == j or negative values.
    void set_pair(std::size_t i, std::size_t j, double value);

    bool has_usage() const noexcept;

    friend bool operator==(const UsageMatrix&, const UsageMatrix&) = default;

private:
    std::size_t k_ = 0;
    std::vector<double> counts_;
};

struct UsageMatrix::Ingested {
    UsageMatrix matrix;
    std::size_t healed_pairs = 0;      // asymmetric pairs replaced by their max
    std::size_t cleared_diagonal = 0;  // nonzero diagonal entries dropped
};

/// Unordered dataset pair, stored with i < j.
struct Link {
    std::size_t i = 0;
    std::size_t j = 0;
    friend auto operator<=>(const Link&, const Link&) = default;
};

/// Set of links over k datasets, kept sorted and duplicate-free.
class AssociationSet {
public:
    AssociationSet() = default;
    explicit AssociationSet(std::size_t k) : k_(k) {}

    /// Pairs given in either orientation are normalised to i < j; duplicates
    /// collapse. Throws DomainError for i == j or an index >= k.
    AssociationSet(std::size_t k, std::vector<Link> links);

    void insert(std::size_t a, std::size_t b);
    bool contains(std::size_t a, std::size_t b) const;

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return links_.size(); }
    bool empty() const noexcept { return links_.empty(); }
    std::span<const Link> links() const noexcept { return links_; }

    friend bool operator==(const AssociationSet&, const AssociationSet&) = default;

private:
    std::size_t k_ = 0;
    std::vector<Link> links_;
};

/// Threshold for binarisation: either an absolute value on the normalised
/// scale, or a quantile of the nonzero off-diagonal entries.
struct ThresholdSpec {
    enum class Kind { absolute, quantile };
    Kind kind = Kind::quantile;
    double value = 0.5;

    static ThresholdSpec absolute(double v) { return {Kind::absolute, v}; }
    static ThresholdSpec quantile(double q) { return {Kind::quantile, q}; }

    /// Throws DomainError for non-finite values or a quantile outside [0, 1].
    void validate() const;

    friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;
};

/// Divides every entry by the Frobenius norm. Throws DegenerateInputError
/// for the zero matrix.
UsageMatrix normalize(const UsageMatrix& m);

/// Frobenius norm sqrt(sum a_ij^2).
double frobenius_norm(const UsageMatrix& m);

/// Resolves the threshold for `m`. Quantiles use linear interpolation
/// between order statistics of the nonzero upper-triangle entries; the
/// default (0.5) is their median. Throws DegenerateInputError for a
/// quantile over a matrix with no nonzero off-diagonal entry.
double resolve_threshold(const UsageMatrix& m, const ThresholdSpec& spec);

/// +1 where the normalised count is >= the threshold, -1 elsewhere; one bit
/// per pair i < j. `m` is expected to be normalised already.
BipolarPattern binarize(const UsageMatrix& m, const ThresholdSpec& spec = {});

/// normalize + binarize; a matrix without any usage maps to the all -1
/// pattern (no links) instead of raising.
BipolarPattern usage_to_pattern(const UsageMatrix& m, const ThresholdSpec& spec = {});

/// Bits of the pairs in `assoc` set to +1, all others -1.
BipolarPattern vectorize(const AssociationSet& assoc);

/// Pairs whose bit is +1. Throws DimensionError if p.size() != k(k-1)/2.
AssociationSet devectorize(const BipolarPattern& p, std::size_t k);

}  // namespace hoplink
