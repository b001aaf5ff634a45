#include <benchmark/benchmark.h>

#include "olapcube/bench.hpp"
#include "olapcube/engine.hpp"
#include "olapcube/ingest.hpp"
#include "olapcube/query_state.hpp"

using namespace olapcube;

namespace {

const Cube& shared_cube() {
    static const Cube cube = generate_synthetic(1'000'000, 7);
    return cube;
}

QueryState drilled(const Cube& cube) {
    return QueryState::create(cube, "Amount (US$-Millions)")
        .with_drilldown("Category")
        .with_drilldown("Subcategory Code")
        .with_drilldown("Fiscal Year");
}

}  // namespace

static void BM_EvaluateSerial(benchmark::State& state) {
    const Cube& cube = shared_cube();
    QueryState q = drilled(cube);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(cube, q, ExecMode::serial()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube.row_count()));
}
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);

static void BM_EvaluateParallel(benchmark::State& state) {
    const Cube& cube = shared_cube();
    QueryState q = drilled(cube);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(cube, q, ExecMode::parallel(static_cast<std::size_t>(state.range(0)))));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube.row_count()));
}
BENCHMARK(BM_EvaluateParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_FilteredEvaluate(benchmark::State& state) {
    const Cube& cube = shared_cube();
    QueryState q = drilled(cube).with_filter("Fiscal Year", "2009");
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(cube, q, ExecMode::parallel()));
    }
}
BENCHMARK(BM_FilteredEvaluate)->Unit(benchmark::kMillisecond);

static void BM_LoadCsv(benchmark::State& state) {
    const std::string csv = to_csv(generate_synthetic(static_cast<std::size_t>(state.range(0)), 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(load_csv(csv));
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(csv.size()));
}
BENCHMARK(BM_LoadCsv)->Arg(31'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
