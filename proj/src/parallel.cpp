#include "hoplink/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace hoplink {

int worker_count() {
    if (const char* env = std::getenv("HOPLINK_WORKERS")) {
        int value = 0;
        const char* end = env + std::strlen(env);
        const auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec == std::errc{} && ptr == end && value > 0) return value;
    }
    return omp_get_max_threads();
}

void configure_workers() { omp_set_num_threads(worker_count()); }

}  // namespace hoplink
