#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "tavis/dynamics.hpp"
#include "tavis/observables.hpp"
#include "tavis/protocol.hpp"

using namespace tavis;

namespace {

const SystemParams kResonant = SystemParams::symmetric_resonant(1.0, 1.0);

void BM_EvolveAnalytic(benchmark::State& state) {
    const CoherentPrep p(static_cast<double>(state.range(0)));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_analytic(kResonant, p, t));
        t += 0.1;
    }
}
BENCHMARK(BM_EvolveAnalytic)->Arg(50)->Arg(200)->Arg(1000);

void BM_EvolveNumeric(benchmark::State& state) {
    const CoherentPrep p(static_cast<double>(state.range(0)));
    const Propagator prop(kResonant, p.n_max());
    const auto psi0 = initial_state(kResonant, p);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(prop.evolve(psi0, t));
        t += 0.1;
    }
}
BENCHMARK(BM_EvolveNumeric)->Arg(50)->Arg(200)->Arg(1000);

void BM_QuadratureSlice(benchmark::State& state) {
    const CoherentPrep p(static_cast<double>(state.range(0)));
    const auto basis = build_quadrature_basis(p.n_max());
    const auto psi = evolve_coherent(kResonant, p, 22.0);
    for (auto _ : state) benchmark::DoNotOptimize(QuadratureSlice(22.0, psi, basis));
}
BENCHMARK(BM_QuadratureSlice)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SuccessProbability(benchmark::State& state) {
    const CoherentPrep p(200.0);
    const double t = 0.01 * static_cast<double>(state.range(0));
    const QuadratureSlice s(t, evolve_coherent(kResonant, p, t), build_quadrature_basis(p.n_max()));
    const TargetState target{std::numbers::pi};
    for (auto _ : state) benchmark::DoNotOptimize(success_probability(s, target, 0.9));
}
BENCHMARK(BM_SuccessProbability)->Arg(2199)->Arg(2275)->Unit(benchmark::kMillisecond);

void BM_SuccessCurveCycle(benchmark::State& state) {
    const CoherentPrep p(200.0);
    const auto basis = build_quadrature_basis(p.n_max());
    std::vector<double> t(64);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 20.0 + 2.0 * std::numbers::pi * static_cast<double>(i) / 64.0;
    const std::vector<SuccessQuery> q{{TargetState{std::numbers::pi}, 0.9}};
    for (auto _ : state) benchmark::DoNotOptimize(success_curves(kResonant, p, q, t, basis));
}
BENCHMARK(BM_SuccessCurveCycle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
