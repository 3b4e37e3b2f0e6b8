#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace kreiss {

/// Applies KREISS_THREADS (if set) as the OpenMP thread cap.
void apply_thread_cap_from_env();

int max_threads();

/// Runs body(i) for i in [0, count) across OpenMP threads. The first failing
/// index (lowest i) is rethrown after the loop, so error reporting does not
/// depend on scheduling.
template <class Body>
void parallel_for(std::ptrdiff_t count, Body&& body) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Pairwise summation in a fixed tree order.
template <class T>
T pairwise_sum(std::span<const T> values) {
    if (values.empty()) return T{};
    if (values.size() == 1) return values[0];
    if (values.size() <= 8) {
        T acc = values[0];
        for (std::size_t i = 1; i < values.size(); ++i) acc = acc + values[i];
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace kreiss
