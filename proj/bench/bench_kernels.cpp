// Serial reference vs OpenMP path for the three parallel kernels.

#include <benchmark/benchmark.h>

#include "fmmi/exponents.hpp"
#include "fmmi/simulator.hpp"
#include "fmmi/weighting.hpp"

using namespace fmmi;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_CurveBuild(benchmark::State& st) {
    const CompoundExponent ce(Pmf::uniform(2), CompoundClass::bsc_interval(0.1, 0.1));
    for (auto _ : st) benchmark::DoNotOptimize(ExponentCurve::build(ce, 2049, exec_of(st)));
}

void BM_ErfPieces(benchmark::State& st) {
    const Pmf u = Pmf::uniform(2);
    const auto spec = ProblemSpec::with_delta(0.1, u, CompoundClass::bsc_interval(0.1, 0.1), 0.1);
    const SpherePacking sp(u, Channel::bsc(0.1));
    const WeightFn F = optimal_F_list(spec);
    for (auto _ : st) benchmark::DoNotOptimize(erf(0.1, sp, F, exec_of(st)));
}

void BM_RunBlock(benchmark::State& st) {
    sim::SimConfig cfg;
    cfg.channel = Channel::bsc(0.1);
    cfg.R = 0.1;
    cfg.trials = 5000;
    cfg.blocklengths = {48};
    cfg.decoder = sim::Decoder::mmi();
    for (auto _ : st) benchmark::DoNotOptimize(sim::run_block(cfg, 48, exec_of(st)));
    st.SetItemsProcessed(st.iterations() * cfg.trials);
}

}  // namespace

BENCHMARK(BM_CurveBuild)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErfPieces)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunBlock)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
