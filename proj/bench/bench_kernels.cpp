// Serial reference kernels against their OpenMP versions, plus the whole
// map phase. Run with HOPLINK_WORKERS=N to pin the thread count.

#include <benchmark/benchmark.h>

#include <vector>

#include "hoplink/kernels.hpp"
#include "hoplink/mapreduce.hpp"
#include "hoplink/parallel.hpp"
#include "hoplink/synthgen.hpp"

using namespace hoplink;

namespace {

std::vector<Bit> bits(std::size_t n, std::uint64_t seed) {
    const auto p = random_pattern(n, seed);
    return {p.bits().begin(), p.bits().end()};
}

template <auto Kernel>
void BM_hebbian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<std::int64_t> accum(n * n, 0);
    const auto x = bits(n, 1);
    for (auto _ : state) {
        Kernel(accum, x);
        benchmark::DoNotOptimize(accum.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Kernel>
void BM_integer_fields(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<std::int64_t> accum(n * n, 0);
    for (std::uint64_t s = 0; s < 10; ++s) kernels::serial::hebbian_accumulate(accum, bits(n, s));
    const auto probe = bits(n, 99);
    std::vector<std::int64_t> out(n);
    for (auto _ : state) {
        Kernel(accum, probe, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Kernel>
void BM_real_fields(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> w(n * n, 0.25);
    const auto probe = bits(n, 99);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(w, probe, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_map_phase(benchmark::State& state) {
    configure_workers();
    std::vector<ShardRecord> records;
    for (std::size_t n = 0; n < 256; ++n) records.emplace_back(PatternRecord{30, random_pattern(435, n)});
    JobSpec spec;
    spec.shard_count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(train_job(records, spec));
}

}  // namespace

BENCHMARK(BM_hebbian<kernels::serial::hebbian_accumulate>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_hebbian<kernels::parallel::hebbian_accumulate>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_integer_fields<kernels::serial::integer_fields>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_integer_fields<kernels::parallel::integer_fields>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_real_fields<kernels::serial::real_fields>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_real_fields<kernels::parallel::real_fields>)->Arg(45)->Arg(435)->Arg(1225);
BENCHMARK(BM_map_phase)->Arg(1)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
