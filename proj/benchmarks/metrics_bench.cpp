#include <benchmark/benchmark.h>

#include "random_instances.hpp"
#include "sevseg/metrics.hpp"

using namespace sevseg;

namespace {

testsupport::Instance big_instance(int images) {
    Rng rng(3);
    testsupport::Instance all;
    while (static_cast<int>(all.gt.images.size()) < images) {
        auto part = testsupport::random_instance(rng, {8, 7, 12, 256});
        for (auto& img : part.gt.images) img.file = std::to_string(all.gt.images.size()) + "_" + img.file;
        for (auto& img : part.dets.images) img.file = std::to_string(all.gt.images.size()) + "_" + img.file;
        all.gt.images.insert(all.gt.images.end(), part.gt.images.begin(), part.gt.images.end());
        all.dets.images.insert(all.dets.images.end(), part.dets.images.begin(), part.dets.images.end());
    }
    return all;
}

}  // namespace

static void BM_CocoReport(benchmark::State& state) {
    const auto inst = big_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(coco_report(inst.gt, inst.dets));
}
BENCHMARK(BM_CocoReport)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
    const auto inst = big_instance(500);
    for (auto _ : state) benchmark::DoNotOptimize(sweep(inst.gt, inst.dets));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
