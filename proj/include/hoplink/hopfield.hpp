#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

#include "hoplink/pattern.hpp"
#include "hoplink/weight_state.hpp"

namespace hoplink {

// ---------------------------------------------------------------------------
// Learning
// ---------------------------------------------------------------------------

/// accum_ij += x_i x_j for i != j, pattern_count += 1.
/// Throws DimensionError on length mismatch, SpecError if the state is not
/// Hebbian.
void train_hebbian(WeightState& state, const BipolarPattern& pattern);

/// Row-wise Oja update followed by re-symmetrisation:
///
///   V_i   = sum_j W_ij x_j
///   W'_ij = W_ij + u V_i (x_j - V_i W_ij)       (j != i)
///   W     = (W' + W'^T) / 2, diagonal zeroed
///
/// The update is identically zero from W = 0, so the first pattern absorbed
/// by an empty state seeds the weights with u * x_i x_j / n instead.
/// Throws DimensionError, SpecError (wrong rule), NumericError (non-finite
/// weights after the update; the state is left unchanged).
void train_oja(WeightState& state, const BipolarPattern& pattern);

/// Dispatches on state.rule().
void train(WeightState& state, const BipolarPattern& pattern);

// ---------------------------------------------------------------------------
// Recall
// ---------------------------------------------------------------------------

enum class UpdateMode { sync, async };

std::string_view to_string(UpdateMode mode) noexcept;
UpdateMode parse_update_mode(std::string_view text);

inline constexpr std::size_t kDefaultMaxSweeps = 100;

struct RecallConfig {
    UpdateMode mode = UpdateMode::async;
    double theta = 0.0;
    std::size_t max_sweeps = kDefaultMaxSweeps;
    std::uint64_t seed = 0;

    /// Throws SpecError if max_sweeps == 0 or theta is not finite.
    void validate() const;

    friend bool operator==(const RecallConfig&, const RecallConfig&) = default;
};

struct RecallResult {
    BipolarPattern state;
    std::size_t sweeps_used = 0;
    bool converged = false;
};

/// Called after every single-neuron update in async mode with the neuron
/// index, whether it flipped, and the state after the update. Not called in
/// sync mode.
using UpdateObserver = std::function<void(std::size_t neuron, bool flipped, const BipolarPattern& state)>;

/// Runs the update rule s_i <- (bias_i + sum_j W_ij s_j >= theta) ? +1 : -1.
///
/// sync: every neuron is updated from the previous sweep's state.
/// async: neurons are visited one at a time in a fresh seeded permutation
/// each sweep and see earlier updates of the same sweep.
///
/// Stops at the first sweep with no flips (converged) or after max_sweeps.
/// sweeps_used counts the final, flip-free sweep.
RecallResult recall(const WeightState& state, const BipolarPattern& probe, const RecallConfig& config,
                    const UpdateObserver& observer = {});

/// Local field bias_i + sum_j W_ij s_j of neuron i.
double local_field(const WeightState& state, const BipolarPattern& s, std::size_t i);

/// -1/2 sum_{i != j} W_ij s_i s_j - sum_i bias_i s_i.
double energy(const WeightState& state, const BipolarPattern& s);

/// True when one synchronous application of the update rule leaves s
/// unchanged (for single-neuron updates this is the same condition).
bool is_fixed_point(const WeightState& state, const BipolarPattern& s, double theta = 0.0);

}  // namespace hoplink
