#include <doctest.h>

#include <random>
#include <vector>

#include "hoplink/kernels.hpp"
#include "hoplink/synthgen.hpp"

using namespace hoplink;

namespace {

std::vector<Bit> random_bits(std::size_t n, std::uint64_t seed) {
    auto p = random_pattern(n, seed);
    return {p.bits().begin(), p.bits().end()};
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
    // 17 stays below the parallel cutoff, 300 goes above it.
    for (std::size_t n : {17u, 300u}) {
        CAPTURE(n);
        std::vector<std::int64_t> a(n * n, 0), b(n * n, 0);
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto x = random_bits(n, s);
            kernels::serial::hebbian_accumulate(a, x);
            kernels::parallel::hebbian_accumulate(b, x);
        }
        CHECK(a == b);

        auto probe = random_bits(n, 99);
        std::vector<std::int64_t> fa(n), fb(n);
        kernels::serial::integer_fields(a, probe, fa);
        kernels::parallel::integer_fields(b, probe, fb);
        CHECK(fa == fb);

        std::mt19937_64 rng(n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> w(n * n);
        for (auto& v : w) v = u(rng);
        std::vector<double> ra(n), rb(n);
        kernels::serial::real_fields(w, probe, ra);
        kernels::parallel::real_fields(w, probe, rb);
        CHECK(ra == rb);

        std::vector<std::int64_t> sa = a, sb = a;
        kernels::serial::add_into(sa, b);
        kernels::parallel::add_into(sb, b);
        CHECK(sa == sb);
    }
}

TEST_CASE("hebbian_accumulate leaves the diagonal alone") {
    std::vector<std::int64_t> a(16, 0);
    std::vector<Bit> x{1, -1, 1, 1};
    kernels::serial::hebbian_accumulate(a, x);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a[i * 4 + i] == 0);
    CHECK(a[0 * 4 + 1] == -1);
    CHECK(a[2 * 4 + 3] == 1);
}
