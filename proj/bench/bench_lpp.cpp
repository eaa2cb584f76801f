// Serial reference vs optimized kernels. With one core the farm numbers only
// show overhead; on a multicore box compare BM_replicas_* at equal n.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "lpplab/harness.hpp"
#include "lpplab/lpp.hpp"
#include "lpplab/reference.hpp"

using namespace lpplab;

namespace {

double p2p(std::size_t r, i64 t, bool ref) {
    WeightField f(Seed{1, "bench", r}, StartSet::empty(), Rect{{0, 0}, {t, t}});
    const StartSet s = StartSet::point({0, 0});
    return ref ? reference::last_passage(f, s, {t, t}).value : last_passage(f, s, {t, t}).value;
}

void BM_dp_reference(benchmark::State& st) {
    const i64 t = st.range(0);
    std::size_t r = 0;
    for (auto _ : st) benchmark::DoNotOptimize(p2p(r++, t, true));
    st.SetItemsProcessed(st.iterations() * (t + 1) * (t + 1));
}

void BM_dp_sweep(benchmark::State& st) {
    const i64 t = st.range(0);
    std::size_t r = 0;
    for (auto _ : st) benchmark::DoNotOptimize(p2p(r++, t, false));
    st.SetItemsProcessed(st.iterations() * (t + 1) * (t + 1));
}

void BM_line_to_point(benchmark::State& st) {
    const i64 t = st.range(0);
    std::size_t r = 0;
    for (auto _ : st) {
        WeightField f(Seed{2, "bench", r++}, StartSet::empty(), Rect{{-t, -t}, {t, t}});
        benchmark::DoNotOptimize(last_passage(f, AntiDiagonalLine{}, {t, t}).value);
    }
}

void BM_replicas_serial(benchmark::State& st) {
    const auto n = std::size_t(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::run_replicas<double>(n, [](std::size_t r) { return p2p(r, 200, false); }));
    st.SetItemsProcessed(st.iterations() * std::int64_t(n));
}

void BM_replicas_openmp(benchmark::State& st) {
    const auto n = std::size_t(st.range(0));
    st.counters["threads"] = omp_get_max_threads();
    for (auto _ : st) benchmark::DoNotOptimize(farm<double>(n, [](std::size_t r) { return p2p(r, 200, false); }));
    st.SetItemsProcessed(st.iterations() * std::int64_t(n));
}

}  // namespace

BENCHMARK(BM_dp_reference)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dp_sweep)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_line_to_point)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replicas_serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replicas_openmp)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
