// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "kreiss/constants.hpp"

using namespace kreiss;

namespace {

CMatrix test_matrix(int n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    Dense m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * n);
    m.diagonal().array() -= 1.5;
    return CMatrix(std::move(m));
}

GridSpec grid(int points) { return {-3.0, 1.0, -2.0, 2.0, points, points}; }

void BM_GridSerial(benchmark::State& state) {
    const CMatrix m = test_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_grid_serial(m, grid(64)));
}

void BM_GridParallel(benchmark::State& state) {
    const CMatrix m = test_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_grid(m, grid(64)));
}

std::vector<Params> plane_points(int count) {
    std::vector<Params> pts;
    for (int i = 0; i < count; ++i) pts.push_back({-4.0 + 6.0 * i / count, -3.0 + 6.0 * ((i * 37) % count) / count});
    return pts;
}

PlaneField resolvent_field(const ResolventEvaluator& ev) {
    return [&ev](const Params& q) { return ev.norm(Complex(std::exp(q[0]), q[1])); };
}

void BM_PlaneSerial(benchmark::State& state) {
    const ResolventEvaluator ev(test_matrix(static_cast<int>(state.range(0))));
    const auto pts = plane_points(2048);
    const PlaneField f = resolvent_field(ev);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_params_serial(f, pts));
}

void BM_PlaneParallel(benchmark::State& state) {
    const ResolventEvaluator ev(test_matrix(static_cast<int>(state.range(0))));
    const auto pts = plane_points(2048);
    const PlaneField f = resolvent_field(ev);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_params(f, pts));
}

} // namespace

BENCHMARK(BM_GridSerial)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlaneSerial)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlaneParallel)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
