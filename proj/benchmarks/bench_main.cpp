#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "raddiff/lp.hpp"
#include "raddiff/model.hpp"
#include "raddiff/solver.hpp"
#include "raddiff/symbol.hpp"

using namespace raddiff;

namespace {

const DerivedConstants ref = derive_constants(reference_params());

StateField noisy_state(std::shared_ptr<const Grid> g, double amplitude) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01(0.0, amplitude);
    StateField s(g);
    for (std::size_t c = 0; c < s.n_components(); ++c)
        for (auto& v : s.values_mut(c)) v = n01(rng);
    s.refresh_spectral();
    s.remove_mean();
    return s;
}

void BM_Propagator(benchmark::State& st) {
    const double r = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(propagator(ref, r, 0.025));
}
BENCHMARK(BM_Propagator)->Arg(1)->Arg(64)->Arg(1000);

void BM_Eigenvalues(benchmark::State& st) {
    const double r = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(eigenvalues(ref, r));
}
BENCHMARK(BM_Eigenvalues)->Arg(1)->Arg(1000);

void BM_NonlinearSources(benchmark::State& st) {
    auto g = std::make_shared<const Grid>(2, static_cast<int>(st.range(0)), 6.283185307179586);
    const auto s = noisy_state(g, 1e-3);
    const auto p = reference_params();
    for (auto _ : st) benchmark::DoNotOptimize(nonlinear_sources(s, p, ref));
}
BENCHMARK(BM_NonlinearSources)->Arg(32)->Arg(64)->Arg(128);

void BM_Step(benchmark::State& st) {
    auto g = std::make_shared<const Grid>(2, static_cast<int>(st.range(0)), 6.283185307179586);
    const auto s = noisy_state(g, 1e-4);
    const Integrator integ(g, reference_params(), 0.01);
    const auto u = spectral_of(s);
    for (auto _ : st) benchmark::DoNotOptimize(integ.step(u, 0.0));
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64);

void BM_ShellProjection(benchmark::State& st) {
    auto g = std::make_shared<const Grid>(2, static_cast<int>(st.range(0)), 6.283185307179586);
    const auto dec = Decomposition::shells(g);
    const auto s = noisy_state(g, 1.0);
    const auto f = s.coeffs(StateField::rho);
    for (auto _ : st)
        for (int k = dec.k_min(); k <= dec.k_max(); ++k) benchmark::DoNotOptimize(dec.project(f, k));
}
BENCHMARK(BM_ShellProjection)->Arg(64)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
