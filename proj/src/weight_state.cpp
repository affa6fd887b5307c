#include "hoplink/weight_state.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "hoplink/errors.hpp"

namespace hoplink {

std::string_view to_string(LearningRule rule) noexcept {
    return rule == LearningRule::hebbian ? "hebbian" : "oja";
}

LearningRule parse_learning_rule(std::string_view text) {
    if (text == "hebbian") return LearningRule::hebbian;
    if (text == "oja") return LearningRule::oja;
    throw SpecError("unknown learning rule '" + std::string(text) + "' (expected hebbian or oja)");
}

namespace {

std::vector<double> checked_bias(std::size_t size, std::vector<double> bias) {
    if (bias.empty()) return std::vector<double>(size, 0.0);
    if (bias.size() != size) {
        throw DimensionError("bias has " + std::to_string(bias.size()) + " entries, network has " +
                             std::to_string(size) + " neurons");
    }
    for (double b : bias) {
        if (!std::isfinite(b)) throw NumericError("bias entry is not finite");
    }
    return bias;
}

void check_oja_rate(double rate) {
    if (!std::isfinite(rate) || rate < 0.0) {
        throw DomainError("oja learning rate must be finite and >= 0");
    }
}

}  // namespace

WeightState WeightState::hebbian(std::size_t size) {
    WeightState s;
    s.size_ = size;
    s.rule_ = LearningRule::hebbian;
    s.bias_.assign(size, 0.0);
    s.accum_.assign(size * size, 0);
    return s;
}

WeightState WeightState::oja(std::size_t size, double rate) {
    check_oja_rate(rate);
    WeightState s;
    s.size_ = size;
    s.rule_ = LearningRule::oja;
    s.oja_rate_ = rate;
    s.bias_.assign(size, 0.0);
    s.weights_.assign(size * size, 0.0);
    return s;
}

WeightState WeightState::from_accum(std::size_t size, std::vector<std::int64_t> accum,
                                    std::uint64_t pattern_count, std::vector<double> bias) {
    if (accum.size() != size * size) {
        throw DimensionError("accumulator has " + std::to_string(accum.size()) +
                             " entries, expected " + std::to_string(size * size));
    }
    const auto limit = static_cast<std::int64_t>(pattern_count);
    for (std::size_t i = 0; i < size; ++i) {
        if (accum[i * size + i] != 0) throw FormatError("accumulator diagonal must be zero");
        for (std::size_t j = i + 1; j < size; ++j) {
            const auto a = accum[i * size + j];
            if (a != accum[j * size + i]) throw FormatError("accumulator is not symmetric");
            if (std::llabs(a) > limit) throw FormatError("accumulator entry exceeds pattern count");
        }
    }
    WeightState s;
    s.size_ = size;
    s.rule_ = LearningRule::hebbian;
    s.pattern_count_ = pattern_count;
    s.bias_ = checked_bias(size, std::move(bias));
    s.accum_ = std::move(accum);
    return s;
}

WeightState WeightState::from_oja_weights(std::size_t size, std::vector<double> weights,
                                          std::uint64_t pattern_count, double rate,
                                          std::vector<double> bias) {
    check_oja_rate(rate);
    if (weights.size() != size * size) {
        throw DimensionError("weight matrix has " + std::to_string(weights.size()) +
                             " entries, expected " + std::to_string(size * size));
    }
    for (std::size_t i = 0; i < size; ++i) {
        if (weights[i * size + i] != 0.0) throw FormatError("weight diagonal must be zero");
        for (std::size_t j = i + 1; j < size; ++j) {
            const double w = weights[i * size + j];
            if (!std::isfinite(w)) throw NumericError("weight entry is not finite");
            if (std::abs(w - weights[j * size + i]) > 1e-12) {
                throw FormatError("weight matrix is not symmetric");
            }
        }
    }
    WeightState s;
    s.size_ = size;
    s.rule_ = LearningRule::oja;
    s.pattern_count_ = pattern_count;
    s.oja_rate_ = rate;
    s.bias_ = checked_bias(size, std::move(bias));
    s.weights_ = std::move(weights);
    return s;
}

void WeightState::set_bias(std::vector<double> bias) { bias_ = checked_bias(size_, std::move(bias)); }

double WeightState::weight(std::size_t i, std::size_t j) const {
    if (i >= size_ || j >= size_) throw DimensionError("weight index out of range");
    if (rule_ == LearningRule::oja) return weights_[i * size_ + j];
    return static_cast<double>(accum_[i * size_ + j]) / static_cast<double>(size_);
}

std::vector<double> WeightState::effective_weights() const {
    if (rule_ == LearningRule::oja) return weights_;
    std::vector<double> w(accum_.size());
    const auto n = static_cast<double>(size_);
    for (std::size_t i = 0; i < accum_.size(); ++i) w[i] = static_cast<double>(accum_[i]) / n;
    return w;
}

}  // namespace hoplink
