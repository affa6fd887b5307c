#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hoplink/pattern.hpp"

namespace hoplink {

enum class LearningRule { hebbian, oja };

std::string_view to_string(LearningRule rule) noexcept;
/// Throws SpecError for anything other than "hebbian" or "oja".
LearningRule parse_learning_rule(std::string_view text);

inline constexpr double kDefaultOjaRate = 0.01;

/// Weights of a Hopfield network of `size` neurons.
///
/// Under the Hebbian rule the state keeps the raw integer co-occurrence sums
/// (sum over patterns of x_i * x_j); the effective weight is accum / size.
/// Integer storage makes training exact, order-independent and mergeable
/// across shards. Under Oja the update is nonlinear, so real weights are
/// stored directly.
///
/// Invariants (checked by every factory): square, symmetric, zero diagonal,
/// |accum_ij| <= pattern_count, bias of length `size`.
class WeightState {
public:
    WeightState() = default;

    static WeightState hebbian(std::size_t size);
    static WeightState oja(std::size_t size, double rate = kDefaultOjaRate);

    static WeightState from_accum(std::size_t size, std::vector<std::int64_t> accum,
                                  std::uint64_t pattern_count, std::vector<double> bias = {});
    static WeightState from_oja_weights(std::size_t size, std::vector<double> weights,
                                        std::uint64_t pattern_count, double rate,
                                        std::vector<double> bias = {});

    std::size_t size() const noexcept { return size_; }
    LearningRule rule() const noexcept { return rule_; }
    std::uint64_t pattern_count() const noexcept { return pattern_count_; }
    double oja_rate() const noexcept { return oja_rate_; }
    std::span<const double> bias() const noexcept { return bias_; }
    void set_bias(std::vector<double> bias);

    /// Raw integer sums, row-major. Empty under Oja.
    std::span<const std::int64_t> accum() const noexcept { return accum_; }
    /// Real weights, row-major. Empty under Hebbian.
    std::span<const double> oja_weights() const noexcept { return weights_; }

    /// Effective W_ij.
    double weight(std::size_t i, std::size_t j) const;

    /// Dense effective weight matrix, row-major.
    std::vector<double> effective_weights() const;

    friend bool operator==(const WeightState&, const WeightState&) = default;

private:
    friend void train_hebbian(WeightState&, const BipolarPattern&);
    friend void train_oja(WeightState&, const BipolarPattern&);

    std::size_t size_ = 0;
    LearningRule rule_ = LearningRule::hebbian;
    std::uint64_t pattern_count_ = 0;
    double oja_rate_ = kDefaultOjaRate;
    std::vector<double> bias_;
    std::vector<std::int64_t> accum_;
    std::vector<double> weights_;
};

}  // namespace hoplink
