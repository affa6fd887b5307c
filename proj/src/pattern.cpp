#include "hoplink/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hoplink/errors.hpp"

namespace hoplink {

namespace {

void require_bipolar(Bit value) {
    if (value != 1 && value != -1) {
        throw DomainError("bipolar pattern entry must be -1 or +1, got " +
                          std::to_string(static_cast<int>(value)));
    }
}

}  // namespace

BipolarPattern::BipolarPattern(std::size_t size, Bit fill) : bits_(size, fill) {
    require_bipolar(fill);
}

BipolarPattern::BipolarPattern(std::vector<Bit> bits) : bits_(std::move(bits)) {
    std::ranges::for_each(bits_, require_bipolar);
}

BipolarPattern BipolarPattern::from_ints(std::span<const int> values) {
    std::vector<Bit> bits;
    bits.reserve(values.size());
    for (int v : values) {
        if (v != 1 && v != -1) {
            throw DomainError("bipolar pattern entry must be -1 or +1, got " + std::to_string(v));
        }
        bits.push_back(static_cast<Bit>(v));
    }
    return BipolarPattern(std::move(bits));
}

void BipolarPattern::set(std::size_t i, Bit value) {
    require_bipolar(value);
    bits_.at(i) = value;
}

BipolarPattern BipolarPattern::negated() const {
    BipolarPattern out = *this;
    for (auto& b : out.bits_) b = static_cast<Bit>(-b);
    return out;
}

std::size_t BipolarPattern::count_active() const noexcept {
    return static_cast<std::size_t>(std::ranges::count(bits_, Bit{1}));
}

std::size_t hamming_distance(const BipolarPattern& a, const BipolarPattern& b) {
    if (a.size() != b.size()) {
        throw DimensionError("hamming distance: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

std::size_t datasets_for_length(std::size_t length) {
    // k = (1 + sqrt(1 + 8L)) / 2, then confirm exactly.
    const auto approx = static_cast<std::size_t>(
        std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(length))) / 2.0));
    for (std::size_t k = approx > 0 ? approx - 1 : 0; k <= approx + 1; ++k) {
        if (k >= 2 && link_count(k) == length) return k;
    }
    throw DimensionError("length " + std::to_string(length) + " is not k(k-1)/2 for any k >= 2");
}

}  // namespace hoplink
