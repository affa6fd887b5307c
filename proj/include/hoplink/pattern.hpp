#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hoplink {

using Bit = std::int8_t;

/// A vector over {-1, +1}. Construction validates every entry, so any
/// BipolarPattern in hand is strictly bipolar.
class BipolarPattern {
public:
    BipolarPattern() = default;

    /// All entries set to `fill` (must be -1 or +1).
    explicit BipolarPattern(std::size_t size, Bit fill = -1);

    /// Throws DomainError if any entry is not exactly -1 or +1.
    explicit BipolarPattern(std::vector<Bit> bits);
    static BipolarPattern from_ints(std::span<const int> values);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    Bit operator[](std::size_t i) const noexcept { return bits_[i]; }
    void set(std::size_t i, Bit value);
    void flip(std::size_t i) noexcept { bits_[i] = static_cast<Bit>(-bits_[i]); }

    std::span<const Bit> bits() const noexcept { return bits_; }

    BipolarPattern negated() const;
    std::size_t count_active() const noexcept;

    friend bool operator==(const BipolarPattern&, const BipolarPattern&) = default;

private:
    std::vector<Bit> bits_;
};

/// Number of positions where a and b differ. Throws DimensionError on
/// length mismatch.
std::size_t hamming_distance(const BipolarPattern& a, const BipolarPattern& b);

// Upper-triangular encoding of a symmetric, zero-diagonal k x k association
// matrix. Pair (i, j), i < j, lives at i*k - i(i+1)/2 + (j - i - 1).

/// k(k-1)/2.
constexpr std::size_t link_count(std::size_t k) noexcept { return k < 2 ? 0 : k * (k - 1) / 2; }

/// Index of pair (i, j) with i < j < k.
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of link_count: the k with k(k-1)/2 == length. Throws
/// DimensionError if length is not triangular (length 0 is rejected too).
std::size_t datasets_for_length(std::size_t length);

}  // namespace hoplink
