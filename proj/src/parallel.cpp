#include "kreiss/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace kreiss {

void apply_thread_cap_from_env() {
    const char* env = std::getenv("KREISS_THREADS");
    if (env == nullptr || *env == '\0') return;
    try {
        const int cap = std::stoi(env);
        if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
        // malformed value: keep the OpenMP default
    }
}

int max_threads() { return omp_get_max_threads(); }

} // namespace kreiss
