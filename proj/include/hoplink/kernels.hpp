#pragma once

// Dense inner loops of training and recall. Each kernel exists twice:
// `serial` is the plain reference loop kept for testing, `parallel` is the
// OpenMP version the library calls. Both must produce bit-identical results
// (all Hebbian arithmetic is integer; the real-valued field kernel sums each
// row in the same order in both versions).

#include <cstddef>
#include <cstdint>
#include <span>

#include "hoplink/pattern.hpp"

namespace hoplink::kernels {

/// Below this neuron count the parallel kernels run on one thread.
inline constexpr std::size_t kParallelMinRows = 128;

namespace serial {

/// accum[i*n + j] += x_i * x_j for all i != j; the diagonal is untouched.
void hebbian_accumulate(std::span<std::int64_t> accum, std::span<const Bit> x);

/// dst += src element-wise.
void add_into(std::span<std::int64_t> dst, std::span<const std::int64_t> src);

/// out_i = sum_j accum[i*n + j] * s_j (raw integer fields, unscaled).
void integer_fields(std::span<const std::int64_t> accum, std::span<const Bit> s,
                    std::span<std::int64_t> out);

/// out_i = sum_j weights[i*n + j] * s_j.
void real_fields(std::span<const double> weights, std::span<const Bit> s, std::span<double> out);

}  // namespace serial

namespace parallel {

void hebbian_accumulate(std::span<std::int64_t> accum, std::span<const Bit> x);
void add_into(std::span<std::int64_t> dst, std::span<const std::int64_t> src);
void integer_fields(std::span<const std::int64_t> accum, std::span<const Bit> s,
                    std::span<std::int64_t> out);
void real_fields(std::span<const double> weights, std::span<const Bit> s, std::span<double> out);

}  // namespace parallel

}  // namespace hoplink::kernels
