/*
 * Copyright 2026 The propreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "propreg/estimates.hpp"
#include "propreg/operator_calculus.hpp"
#include "propreg/propagator.hpp"

using namespace propreg;

namespace {

WaveFunction packet(int n, double L) {
    return gaussian_packet(make_grid(1, L, n), {0, 0, 0}, {1.0, 0, 0}, 2.0);
}

PotentialSpec compliant() { return PotentialSpec{InversePower{-2.0, 6.5, {}}, Sinusoid{0.3, 0.0}, {}, 6.5}; }

} // namespace

static void BM_Transform(benchmark::State& state) {
    auto psi = packet(static_cast<int>(state.range(0)), 256.0);
    for(auto _ : state) {
        psi = transform(transform(psi, Representation::momentum), Representation::position);
        benchmark::DoNotOptimize(psi.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Transform)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_StrangStep(benchmark::State& state) {
    auto psi = packet(static_cast<int>(state.range(0)), 256.0);
    const auto v = compliant();
    double t = 0.0;
    for(auto _ : state) {
        psi = strang_step(psi, v, t, 0.01);
        t += 0.01;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_StrangStep2D(benchmark::State& state) {
    const auto g = make_grid(2, 64.0, static_cast<int>(state.range(0)));
    auto psi = gaussian_packet(g, {0, 0, 0}, {1.0, 0.5, 0}, 2.0);
    const auto v = compliant();
    double t = 0.0;
    for(auto _ : state) {
        psi = strang_step(psi, v, t, 0.01);
        t += 0.01;
    }
}
BENCHMARK(BM_StrangStep2D)->Arg(128)->Arg(256);

static void BM_ApplyA(benchmark::State& state) {
    const auto psi = packet(static_cast<int>(state.range(0)), 256.0);
    for(auto _ : state) benchmark::DoNotOptimize(apply_A(psi).values.data());
}
BENCHMARK(BM_ApplyA)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

static void BM_ChebyshevStepDown(benchmark::State& state) {
    const auto psi = packet(static_cast<int>(state.range(0)), 64.0);
    const auto method = chebyshev_for(*psi.grid, 5.0);
    const auto f = CutoffShape::step_down(10.0, 5.0);
    for(auto _ : state) benchmark::DoNotOptimize(function_of_A(psi, f, method).values.data());
    state.counters["order"] = method.order;
}
BENCHMARK(BM_ChebyshevStepDown)->Arg(512)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_DenseStepDown(benchmark::State& state) {
    const auto psi = packet(static_cast<int>(state.range(0)), 64.0);
    const auto f = CutoffShape::step_down(10.0, 5.0);
    dense_A(*psi.grid); // eigendecomposition cached outside the timed loop
    for(auto _ : state) benchmark::DoNotOptimize(function_of_A(psi, f, DenseEigen{}).values.data());
}
BENCHMARK(BM_DenseStepDown)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_DenseEigendecomposition(benchmark::State& state) {
    int fresh = 0;
    for(auto _ : state) {
        // A new half-width per iteration defeats the cache; each entry stays resident.
        const auto g = make_grid(1, 64.0 + 1e-6 * ++fresh, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(dense_A(*g)->eigenvalues.data());
    }
}
BENCHMARK(BM_DenseEigendecomposition)->Arg(128)->Arg(256)->Arg(512)->Iterations(4)->Unit(benchmark::kMillisecond);

static void BM_PsEnergyObservable(benchmark::State& state) {
    const auto psi = packet(static_cast<int>(state.range(0)), 256.0);
    ObservableSpec s;
    s.name = ObservableName::ps_energy;
    const auto v = compliant();
    for(auto _ : state) benchmark::DoNotOptimize(evaluate_prob(psi, s, v, 10.0));
}
BENCHMARK(BM_PsEnergyObservable)->Arg(2048)->Arg(8192);

BENCHMARK_MAIN();
