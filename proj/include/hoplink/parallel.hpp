#pragma once

#include <cstddef>
#include <cstdint>

namespace hoplink {

/// Worker count for parallel phases: HOPLINK_WORKERS when set to a positive
/// integer, otherwise the OpenMP default (available parallelism).
int worker_count();

/// Applies worker_count() to the OpenMP runtime.
void configure_workers();

/// Independent child seed for item `index` of a job seeded with `base`
/// (splitmix64 finaliser over both inputs). Lets every item draw its own
/// stream regardless of evaluation order or thread assignment.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(base) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace hoplink
