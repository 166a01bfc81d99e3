#include <benchmark/benchmark.h>

#include "sevseg/detector.hpp"
#include "sevseg/synth.hpp"

using namespace sevseg;

static void BM_Detect(benchmark::State& state) {
    SynthSpec spec;
    spec.rows = {"120", "80", "72"};
    spec.digit_height = static_cast<int>(state.range(0));
    spec.slant_deg = 4;
    spec.noise_sigma = 8;
    const auto img = render(spec).image;
    for (auto _ : state) benchmark::DoNotOptimize(detect(img));
    state.SetLabel(std::to_string(img.width()) + "x" + std::to_string(img.height()));
}
BENCHMARK(BM_Detect)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_Render(benchmark::State& state) {
    SynthSpec spec;
    spec.rows = {"120", "80", "72"};
    spec.noise_sigma = 8;
    for (auto _ : state) benchmark::DoNotOptimize(render(spec));
}
BENCHMARK(BM_Render)->Unit(benchmark::kMicrosecond);
