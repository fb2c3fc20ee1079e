#include <benchmark/benchmark.h>

#include "rrsense/corpus.hpp"
#include "rrsense/lrc.hpp"
#include "rrsense/rsa.hpp"
#include "rrsense/selector.hpp"
#include "rrsense/ssa.hpp"
#include "rrsense/synth.hpp"

using namespace rrsense;

static void BM_RsaWindow(benchmark::State& state) {
    SedentaryScenario sc;
    sc.noise_snr = 25.0;
    const auto audio = synth_sedentary(sc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_rr_rsa(audio.left, audio.right));
    }
}
BENCHMARK(BM_RsaWindow)->Unit(benchmark::kMillisecond);

static void BM_LrcWindow(benchmark::State& state) {
    ActiveScenario sc;
    sc.sample_rate = 8000.0;
    sc.breath_band_high = 1800.0;
    sc.noise_snr = 25.0;
    const auto audio = synth_active(sc);
    const BreathingTemplate tmpl = make_default_template();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_rr_lrc(audio.left, audio.right, ActivityClass::ActiveLow, tmpl));
    }
}
BENCHMARK(BM_LrcWindow)->Unit(benchmark::kMillisecond);

static void BM_Ssa(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> series(n);
    for (std::size_t i = 0; i < n; ++i)
        series[i] = std::sin(0.05 * static_cast<double>(i)) +
                    0.3 * std::sin(0.6 * static_cast<double>(i));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssa_decompose(series, n / 4, 15));
    }
}
BENCHMARK(BM_Ssa)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_Mfcc(benchmark::State& state) {
    SedentaryScenario sc;
    sc.duration = 5.0;
    sc.sample_rate = 22050.0;
    sc.noise_snr = 20.0;
    const auto audio = synth_sedentary(sc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mfcc_features(audio.left));
    }
}
BENCHMARK(BM_Mfcc)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
