// Parallel kernels against their serial references. Run with OMP_NUM_THREADS
// set to compare thread counts; on one core the two paths should be close.

#include <benchmark/benchmark.h>

#include <random>

#include "jrc/dsp.hpp"
#include "jrc/radar.hpp"
#include "jrc/waveforms/msqp.hpp"
#include "jrc/waveforms/phase_search.hpp"

using namespace jrc;

namespace {

CVec noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    CVec v(n);
    for (auto& s : v) s = {g(rng), g(rng)};
    return v;
}

SubblockSet blocks(std::size_t n, int q) {
    SubblockSet s;
    s.fft_pad = 4;
    for (int i = 0; i < q; ++i) s.blocks.push_back(noise(n, 10 + i));
    return s;
}

RdmGeometry geometry(std::size_t n, std::size_t q0) {
    RdmGeometry g;
    g.N = n;
    g.Q0 = q0;
    return g;
}

Matrix<double> power_map(std::size_t rows, std::size_t cols) {
    Matrix<double> p(rows, cols);
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> e(1.0);
    for (auto& v : p.data()) v = e(rng);
    return p;
}

constexpr std::size_t kN = 2214;
constexpr int kQ = 32;

}  // namespace

static void BM_delay_cyclic(benchmark::State& st) {
    const InterpolationKernel k(4);
    const CVec x = noise(static_cast<std::size_t>(st.range(0)), 1);
    for (auto _ : st) benchmark::DoNotOptimize(delay_cyclic(x, 37, k));
}
static void BM_delay_cyclic_serial(benchmark::State& st) {
    const InterpolationKernel k(4);
    const CVec x = noise(static_cast<std::size_t>(st.range(0)), 1);
    for (auto _ : st) benchmark::DoNotOptimize(serial::delay_cyclic(x, 37, k));
}
BENCHMARK(BM_delay_cyclic)->Arg(4 * 11070)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_delay_cyclic_serial)->Arg(4 * 11070)->Unit(benchmark::kMillisecond);

static void BM_correlate(benchmark::State& st) {
    const auto rx = blocks(kN, kQ);
    const CVec ref = noise(kN, 99);
    for (auto _ : st) benchmark::DoNotOptimize(correlate_subblocks(rx, ref));
}
static void BM_correlate_serial(benchmark::State& st) {
    const auto rx = blocks(kN, kQ);
    const CVec ref = noise(kN, 99);
    for (auto _ : st) benchmark::DoNotOptimize(serial::correlate_subblocks(rx, ref));
}
BENCHMARK(BM_correlate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlate_serial)->Unit(benchmark::kMillisecond);

static void BM_rdm(benchmark::State& st) {
    const auto corr = correlate_subblocks(blocks(kN, kQ), noise(kN, 99));
    const auto g = geometry(kN, 4 * kQ);
    for (auto _ : st) benchmark::DoNotOptimize(rdm(corr, 4, g));
}
static void BM_rdm_serial(benchmark::State& st) {
    const auto corr = correlate_subblocks(blocks(kN, kQ), noise(kN, 99));
    const auto g = geometry(kN, 4 * kQ);
    for (auto _ : st) benchmark::DoNotOptimize(serial::rdm(corr, 4, g));
}
BENCHMARK(BM_rdm)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rdm_serial)->Unit(benchmark::kMillisecond);

static void BM_cfar(benchmark::State& st) {
    const auto p = power_map(kN, 4 * kQ);
    for (auto _ : st) benchmark::DoNotOptimize(cfar_floor(p, CfarConfig{}));
}
static void BM_cfar_serial(benchmark::State& st) {
    const auto p = power_map(kN, 4 * kQ);
    for (auto _ : st) benchmark::DoNotOptimize(serial::cfar_floor(p, CfarConfig{}));
}
BENCHMARK(BM_cfar)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cfar_serial)->Unit(benchmark::kMillisecond);

static void BM_phase_search(benchmark::State& st) {
    const auto comps = unrotated_components(make_uniform_msqp(6, 101, 10));
    const auto alphabet = default_phase_alphabet();
    for (auto _ : st) benchmark::DoNotOptimize(phase_rotation_search(comps, alphabet));
}
static void BM_phase_search_serial(benchmark::State& st) {
    const auto comps = unrotated_components(make_uniform_msqp(6, 101, 10));
    const auto alphabet = default_phase_alphabet();
    for (auto _ : st) benchmark::DoNotOptimize(serial::phase_search_brute_force(comps, alphabet));
}
BENCHMARK(BM_phase_search)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phase_search_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
