#include "fbc/metrics.hpp"
#include "fbc/receiver.hpp"
#include "fbc/synth.hpp"

#include <benchmark/benchmark.h>

using namespace fbc;

namespace {

std::vector<FlowEvent> bench_batch(size_t n) {
    return generate_random_events(n, 1000.0, 640, 480, 1);
}

} // namespace

// Full receiver batch at VGA: prediction plus one sort.
static void BM_PredictBatch(benchmark::State& state) {
    const auto batch = bench_batch(static_cast<size_t>(state.range(0)));
    const PredictionWindow win{0, static_cast<uint32_t>(state.range(1)) * 1000};
    for (auto _ : state) {
        auto out = rx_predict_batch(batch, win, 0.4, 640, 480, 1);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PredictBatch)
    ->Args({25000, 10})
    ->Args({25000, 60})
    ->Args({25000, 100})
    ->Args({2500, 60})
    ->Args({250000, 60})
    ->Unit(benchmark::kMillisecond);

static void BM_PredictSingle(benchmark::State& state) {
    const auto batch = bench_batch(1);
    const PredictionWindow win{0, 60000};
    for (auto _ : state) {
        auto out = predict_events(batch[0], win, 0.4, 640, 480);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_PredictSingle);

static void BM_ModifiedBresenham(benchmark::State& state) {
    const int32_t reach = static_cast<int32_t>(state.range(0));
    for (auto _ : state) {
        auto coords = modified_bresenham(0, 0, reach, reach / 3);
        benchmark::DoNotOptimize(coords.data());
    }
}
BENCHMARK(BM_ModifiedBresenham)->Arg(10)->Arg(60)->Arg(200);

static void BM_SortPredictions(benchmark::State& state) {
    const auto batch = bench_batch(static_cast<size_t>(state.range(0)));
    const PredictionWindow win{0, 60000};
    std::vector<Event> preds;
    for (const FlowEvent& fe : batch) {
        const auto p = predict_events(fe, win, 0.4, 640, 480);
        preds.insert(preds.end(), p.begin(), p.end());
    }
    for (auto _ : state) {
        std::vector<Event> copy = preds;
        sort_events(copy);
        benchmark::DoNotOptimize(copy.data());
    }
    state.SetItemsProcessed(state.iterations() * preds.size());
}
BENCHMARK(BM_SortPredictions)->Arg(25000)->Unit(benchmark::kMillisecond);

static void BM_AstsmCube(benchmark::State& state) {
    const SceneSpec scene = preset_scene("bar-square", 500000, 2);
    const SynthResult r = generate(scene);
    for (auto _ : state) {
        auto cubes = astsm_distance(r.stream, r.stream, MetricParams{});
        benchmark::DoNotOptimize(cubes.data());
    }
}
BENCHMARK(BM_AstsmCube)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
