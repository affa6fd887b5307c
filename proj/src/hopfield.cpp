#include "hoplink/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hoplink/errors.hpp"
#include "hoplink/kernels.hpp"

namespace hoplink {

namespace {

void check_length(const WeightState& state, const BipolarPattern& p, const char* what) {
    if (p.size() != state.size()) {
        throw DimensionError(std::string(what) + ": pattern length " + std::to_string(p.size()) +
                             " does not match network size " + std::to_string(state.size()));
    }
}

Bit activate(double field, double theta) noexcept { return field >= theta ? Bit{1} : Bit{-1}; }

// Integer row sum -> effective field. Shared by every recall path so that
// sync, async and the fixed-point check agree to the last bit.
double hebbian_field(std::int64_t raw, double bias, std::size_t n) noexcept {
    return bias + static_cast<double>(raw) / static_cast<double>(n);
}

double row_field(const WeightState& state, std::span<const Bit> s, std::size_t i) {
    const std::size_t n = state.size();
    if (state.rule() == LearningRule::hebbian) {
        const auto row = state.accum().subspan(i * n, n);
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < n; ++j) sum += row[j] * s[j];
        return hebbian_field(sum, state.bias()[i], n);
    }
    const auto row = state.oja_weights().subspan(i * n, n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += row[j] * s[j];
    return state.bias()[i] + sum;
}

// All fields at once through the parallel kernels.
void all_fields(const WeightState& state, std::span<const Bit> s, std::vector<double>& out) {
    const std::size_t n = state.size();
    out.resize(n);
    if (state.rule() == LearningRule::hebbian) {
        std::vector<std::int64_t> raw(n);
        kernels::parallel::integer_fields(state.accum(), s, raw);
        for (std::size_t i = 0; i < n; ++i) out[i] = hebbian_field(raw[i], state.bias()[i], n);
    } else {
        kernels::parallel::real_fields(state.oja_weights(), s, out);
        for (std::size_t i = 0; i < n; ++i) out[i] = state.bias()[i] + out[i];
    }
}

}  // namespace

void train_hebbian(WeightState& state, const BipolarPattern& pattern) {
    if (state.rule() != LearningRule::hebbian) throw SpecError("train_hebbian on a non-Hebbian state");
    check_length(state, pattern, "train_hebbian");
    kernels::parallel::hebbian_accumulate(state.accum_, pattern.bits());
    ++state.pattern_count_;
}

void train_oja(WeightState& state, const BipolarPattern& pattern) {
    if (state.rule() != LearningRule::oja) throw SpecError("train_oja on a non-Oja state");
    check_length(state, pattern, "train_oja");

    const std::size_t n = state.size();
    const double u = state.oja_rate();
    const auto x = pattern.bits();
    std::vector<double> next(n * n, 0.0);

    if (state.pattern_count_ == 0) {
        const double scale = u / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) next[i * n + j] = scale * x[i] * x[j];
            }
        }
    } else {
        const auto& w = state.weights_;
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v += w[i * n + j] * x[j];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double wij = w[i * n + j];
                next[i * n + j] = wij + u * v * (x[j] - v * wij);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double m = 0.5 * (next[i * n + j] + next[j * n + i]);
                next[i * n + j] = m;
                next[j * n + i] = m;
            }
        }
    }

    if (!std::ranges::all_of(next, [](double v) { return std::isfinite(v); })) {
        throw NumericError("oja update produced a non-finite weight");
    }
    state.weights_ = std::move(next);
    ++state.pattern_count_;
}

void train(WeightState& state, const BipolarPattern& pattern) {
    if (state.rule() == LearningRule::hebbian) {
        train_hebbian(state, pattern);
    } else {
        train_oja(state, pattern);
    }
}

std::string_view to_string(UpdateMode mode) noexcept { return mode == UpdateMode::sync ? "sync" : "async"; }

UpdateMode parse_update_mode(std::string_view text) {
    if (text == "sync") return UpdateMode::sync;
    if (text == "async") return UpdateMode::async;
    throw SpecError("unknown recall mode '" + std::string(text) + "' (expected sync or async)");
}

void RecallConfig::validate() const {
    if (max_sweeps == 0) throw SpecError("recall max_sweeps must be >= 1");
    if (!std::isfinite(theta)) throw SpecError("recall theta must be finite");
}

RecallResult recall(const WeightState& state, const BipolarPattern& probe, const RecallConfig& config,
                    const UpdateObserver& observer) {
    config.validate();
    check_length(state, probe, "recall");

    const std::size_t n = state.size();
    RecallResult result{probe, 0, false};
    BipolarPattern& s = result.state;

    if (config.mode == UpdateMode::sync) {
        std::vector<double> fields;
        while (result.sweeps_used < config.max_sweeps) {
            all_fields(state, s.bits(), fields);
            ++result.sweeps_used;
            std::size_t flips = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Bit next = activate(fields[i], config.theta);
                if (next != s[i]) {
                    s.flip(i);
                    ++flips;
                }
            }
            if (flips == 0) {
                result.converged = true;
                break;
            }
        }
        return result;
    }

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    while (result.sweeps_used < config.max_sweeps) {
        std::ranges::shuffle(order, rng);
        ++result.sweeps_used;
        std::size_t flips = 0;
        for (std::size_t i : order) {
            const Bit next = activate(row_field(state, s.bits(), i), config.theta);
            const bool flipped = next != s[i];
            if (flipped) {
                s.flip(i);
                ++flips;
            }
            if (observer) observer(i, flipped, s);
        }
        if (flips == 0) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double local_field(const WeightState& state, const BipolarPattern& s, std::size_t i) {
    check_length(state, s, "local_field");
    if (i >= state.size()) throw DimensionError("local_field: neuron index out of range");
    return row_field(state, s.bits(), i);
}

double energy(const WeightState& state, const BipolarPattern& s) {
    check_length(state, s, "energy");
    const std::size_t n = state.size();
    const auto bits = s.bits();
    double pair_term = 0.0;
    if (state.rule() == LearningRule::hebbian) {
        std::int64_t sum = 0;
        const auto accum = state.accum();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) sum += accum[i * n + j] * bits[i] * bits[j];
        }
        pair_term = static_cast<double>(sum) / static_cast<double>(n);
    } else {
        const auto w = state.oja_weights();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) pair_term += w[i * n + j] * bits[i] * bits[j];
        }
    }
    double bias_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) bias_term += state.bias()[i] * bits[i];
    return -0.5 * pair_term - bias_term;
}

bool is_fixed_point(const WeightState& state, const BipolarPattern& s, double theta) {
    check_length(state, s, "is_fixed_point");
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (activate(row_field(state, s.bits(), i), theta) != s[i]) return false;
    }
    return true;
}

}  // namespace hoplink
