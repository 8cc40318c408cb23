#include <benchmark/benchmark.h>

#include "nbds/builtins.hpp"
#include "nbds/netlist.hpp"
#include "nbds/sim.hpp"

namespace {

void BM_lower_fhn(benchmark::State& state) {
    const nbds::DynSystem sys = nbds::builtin_fhn();
    for (auto _ : state) {
        nbds::Netlist n = nbds::lower(sys);
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_lower_fhn);

void BM_netlist_eval_lorenz(benchmark::State& state) {
    const nbds::Netlist n = nbds::lower(nbds::builtin_lorenz());
    nbds::NetlistEvaluator ev(n);
    std::vector<nbds::BilateralSignal> rails(3), f;
    for (size_t i = 0; i < rails.size(); ++i) rails[i] = {2e-9, 1e-9};
    for (auto _ : state) {
        ev.eval(rails, {}, f);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_netlist_eval_lorenz);

void BM_circuit_step_fhn(benchmark::State& state) {
    const nbds::Netlist n = nbds::lower(nbds::builtin_fhn());
    nbds::SimConfig cfg;
    cfg.dt = 0.65 / 2000.0;
    cfg.t_end = cfg.dt * 256;
    cfg.record_stride = 256;
    for (auto _ : state) {
        nbds::Waveform w = nbds::integrate_circuit(n, cfg);
        benchmark::DoNotOptimize(w);
    }
    state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_circuit_step_fhn);

void BM_math_step_lorenz(benchmark::State& state) {
    const nbds::DynSystem sys = nbds::builtin_lorenz();
    nbds::SimConfig cfg;
    cfg.dt = 1.3e-3 / 2000.0;
    cfg.t_end = cfg.dt * 256;
    cfg.record_stride = 256;
    for (auto _ : state) {
        nbds::Waveform w = nbds::integrate_math(sys, cfg);
        benchmark::DoNotOptimize(w);
    }
    state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_math_step_lorenz);

}  // namespace

BENCHMARK_MAIN();
