#include "hoplink/kernels.hpp"

#include <string>

#include "hoplink/errors.hpp"

namespace hoplink::kernels {

namespace {

void check_square(std::size_t matrix_size, std::size_t n, const char* what) {
    if (matrix_size != n * n) {
        throw DimensionError(std::string(what) + ": matrix has " + std::to_string(matrix_size) +
                             " entries, expected " + std::to_string(n) + "^2");
    }
}

}  // namespace

namespace serial {

void hebbian_accumulate(std::span<std::int64_t> accum, std::span<const Bit> x) {
    const std::size_t n = x.size();
    check_square(accum.size(), n, "hebbian_accumulate");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) accum[i * n + j] += x[i] * x[j];
        }
    }
}

void add_into(std::span<std::int64_t> dst, std::span<const std::int64_t> src) {
    if (dst.size() != src.size()) throw DimensionError("add_into: size mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void integer_fields(std::span<const std::int64_t> accum, std::span<const Bit> s,
                    std::span<std::int64_t> out) {
    const std::size_t n = s.size();
    check_square(accum.size(), n, "integer_fields");
    if (out.size() != n) throw DimensionError("integer_fields: output size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < n; ++j) sum += accum[i * n + j] * s[j];
        out[i] = sum;
    }
}

void real_fields(std::span<const double> weights, std::span<const Bit> s, std::span<double> out) {
    const std::size_t n = s.size();
    check_square(weights.size(), n, "real_fields");
    if (out.size() != n) throw DimensionError("real_fields: output size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += weights[i * n + j] * s[j];
        out[i] = sum;
    }
}

}  // namespace serial

namespace parallel {

void hebbian_accumulate(std::span<std::int64_t> accum, std::span<const Bit> x) {
    const std::size_t n = x.size();
    check_square(accum.size(), n, "hebbian_accumulate");
    const auto rows = static_cast<std::ptrdiff_t>(n);
    std::int64_t* a = accum.data();
    const Bit* xs = x.data();
#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const std::int64_t xi = xs[i];
        std::int64_t* row = a + i * n;
#pragma omp simd
        for (std::size_t j = 0; j < n; ++j) row[j] += xi * xs[j];
        row[i] -= xi * xi;
    }
}

void add_into(std::span<std::int64_t> dst, std::span<const std::int64_t> src) {
    if (dst.size() != src.size()) throw DimensionError("add_into: size mismatch");
    const auto count = static_cast<std::ptrdiff_t>(dst.size());
    std::int64_t* d = dst.data();
    const std::int64_t* s = src.data();
#pragma omp parallel for simd schedule(static) if (dst.size() >= kParallelMinRows * kParallelMinRows)
    for (std::ptrdiff_t i = 0; i < count; ++i) d[i] += s[i];
}

void integer_fields(std::span<const std::int64_t> accum, std::span<const Bit> s,
                    std::span<std::int64_t> out) {
    const std::size_t n = s.size();
    check_square(accum.size(), n, "integer_fields");
    if (out.size() != n) throw DimensionError("integer_fields: output size mismatch");
    const auto rows = static_cast<std::ptrdiff_t>(n);
    const std::int64_t* a = accum.data();
    const Bit* st = s.data();
    std::int64_t* o = out.data();
#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const std::int64_t* row = a + i * n;
        std::int64_t sum = 0;
#pragma omp simd reduction(+ : sum)
        for (std::size_t j = 0; j < n; ++j) sum += row[j] * st[j];
        o[i] = sum;
    }
}

void real_fields(std::span<const double> weights, std::span<const Bit> s, std::span<double> out) {
    const std::size_t n = s.size();
    check_square(weights.size(), n, "real_fields");
    if (out.size() != n) throw DimensionError("real_fields: output size mismatch");
    const auto rows = static_cast<std::ptrdiff_t>(n);
    const double* w = weights.data();
    const Bit* st = s.data();
    double* o = out.data();
    // No simd reduction here: reassociating the row sum would break
    // bit-equality with the serial kernel.
#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const double* row = w + i * n;
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += row[j] * st[j];
        o[i] = sum;
    }
}

}  // namespace parallel

}  // namespace hoplink::kernels
