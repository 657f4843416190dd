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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "propreg/operator_calculus.hpp"
#include "propreg/propagator.hpp"

using namespace propreg;

namespace {

/// Seeded superposition of unit-width packets near the origin.
WaveFunction packets(GridPtr g, std::uint64_t seed, int count = 8, double spread = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-spread, spread), mom(-1.0, 1.0), phase(0.0, 2 * M_PI);
    Field acc = Field::Zero(g->size());
    for(int j = 0; j < count; ++j)
        acc += std::polar(1.0, phase(rng)) * gaussian_packet(g, {pos(rng), 0, 0}, {mom(rng), 0, 0}, 1.0).values;
    WaveFunction psi(g, acc);
    psi.values /= norm(psi);
    return psi;
}

double rel(const WaveFunction& a, const WaveFunction& b) {
    WaveFunction d = transform(a, Representation::position);
    d.values -= transform(b, Representation::position).values;
    return norm(d) / norm(b);
}

} // namespace

TEST(CutoffShapeProperty, PartitionOfUnity) {
    for(double M : {1.0, 5.0, 10.0})
        for(double R : {1.0, 4.0, 8.0})
            for(double a = -60.0; a <= 60.0; a += 0.731) {
                const double s = CutoffShape::step_up(M, R)(a) + CutoffShape::step_down(M, R)(a) +
                                 CutoffShape::window(M, R)(a);
                EXPECT_NEAR(s, 1.0, 1e-14);
            }
}

TEST(CutoffShapeProperty, DerivativeMatchesFiniteDifference) {
    for(const auto& f : {CutoffShape::step_up(5, 4), CutoffShape::step_down(5, 4), CutoffShape::window(10, 8)})
        for(double a = -30.0; a <= 30.0; a += 1.37)
            EXPECT_NEAR(f.derivative(a), (f(a + 1e-5) - f(a - 1e-5)) / 2e-5, 1e-8);
}

TEST(DilationGenerator, GaussianClosedForm) {
    // A = -i (x d/dx + 1/2): on e^{-x^2/2} this is -i (1/2 - x^2).
    const auto g = make_grid(1, 16.0, 256);
    const auto psi = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.0);
    const auto a = apply_A(psi);
    for(std::size_t i = 100; i < 156; i += 5) {
        const double x = g->x_axis()[i];
        EXPECT_NEAR(std::abs(a.values[i] - cplx(0, -1) * (0.5 - x * x) * psi.values[i]), 0.0, 1e-10);
    }
}

TEST(DilationGeneratorProperty, Symmetric) {
    for(int dim : {1, 2}) {
        const auto g = make_grid(dim, 8.0, dim == 1 ? 128 : 32);
        for(std::uint64_t s = 1; s <= 4; ++s) {
            WaveFunction a(g, Field::Random(g->size())), b(g, Field::Random(g->size()));
            a = free_evolve(a, 0.0);
            (void)s;
            EXPECT_NEAR(std::abs(inner(a, apply_A(b)) - inner(apply_A(a), b)), 0.0,
                        1e-10 * norm(a) * norm(b) * lattice_bound(*g));
        }
    }
}

TEST(DilationGroup, MatchesGeneratorToFirstOrder) {
    const auto g = make_grid(1, 16.0, 256);
    const auto psi = packets(g, 3);
    const double h = 1e-4;
    auto d = apply_dilation(psi, h);
    auto m = apply_dilation(psi, -h);
    d.values = (d.values - m.values) / (2 * h);
    auto expect = apply_A(psi);
    expect.values *= cplx(0, -1);
    EXPECT_LT(rel(d, expect), 1e-6);
}

TEST(DilationGroupProperty, Composition) {
    const auto g = make_grid(1, 32.0, 512);
    for(std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto psi = packets(g, seed);
        for(auto [a, b] : {std::pair{0.2, 0.3}, std::pair{-0.25, 0.1}, std::pair{0.4, -0.4}}) {
            EXPECT_LT(rel(apply_dilation(apply_dilation(psi, a), b), apply_dilation(psi, a + b)), 1e-9);
        }
        // Unitary on contained states.
        EXPECT_NEAR(norm(apply_dilation(psi, 0.3)), 1.0, 1e-10);
    }
}

TEST(DilationGroup, LagrangeInterpolationConverges) {
    const auto g = make_grid(1, 32.0, 512);
    const auto psi = packets(g, 5);
    const auto exact = apply_dilation(psi, 0.2);
    EXPECT_LT(rel(apply_dilation(psi, 0.2, 8), exact), rel(apply_dilation(psi, 0.2, 4), exact));
    EXPECT_LT(rel(apply_dilation(psi, 0.2, 8), exact), 1e-3);
}

TEST(DilationGroup, SupportEscapeIsReported) {
    const auto g = make_grid(1, 16.0, 256);
    const auto edge = gaussian_packet(g, {12.0, 0, 0}, {0, 0, 0}, 1.0);
    EXPECT_THROW(apply_dilation(edge, 0.5), SupportEscape);
    // p_max is about 25; contraction by e^{-1/2} pushes k = 15 past it.
    const auto fast = gaussian_packet(g, {0, 0, 0}, {15.0, 0, 0}, 1.0);
    EXPECT_THROW(apply_dilation(fast, -0.5), SupportEscape);
}

TEST(DenseA, SpectrumBoundedAndHermitian) {
    const auto g = make_grid(1, 16.0, 128);
    const auto a = dense_A(*g);
    EXPECT_LT((a->matrix - a->matrix.adjoint()).norm(), 1e-12 * a->matrix.norm());
    EXPECT_LE(a->eigenvalues.cwiseAbs().maxCoeff(), lattice_bound(*g));
    // Same object from the cache.
    EXPECT_EQ(a.get(), dense_A(*g).get());
}

TEST(FunctionOfA, ConstantFunctionIsIdentity) {
    const auto g = make_grid(1, 16.0, 128);
    const auto psi = packets(g, 2);
    const ScalarFunction one = [](double) { return 1.0; };
    EXPECT_LT(rel(function_of_A(psi, one, DenseEigen{}), psi), 1e-12);
    EXPECT_LT(rel(function_of_A(psi, one, chebyshev_for(*g, 4.0)), psi), 1e-10);
}

TEST(FunctionOfAProperty, BackendsAgreeOnScalarFunctions) {
    const auto g = make_grid(1, 16.0, 256);
    const auto down = CutoffShape::step_down(5.0, 4.0);
    const ScalarFunction weight = [down](double a) { return a * down(a); };
    for(std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto psi = packets(g, seed);
        EXPECT_LT(rel(function_of_A(psi, weight, chebyshev_for(*g, 4.0)), function_of_A(psi, weight, DenseEigen{})),
                  1e-8);
    }
}

TEST(FunctionOfAProperty, ProjectionTripleSumsToState) {
    // Group quadrature dilates by up to e^{theta_max} ~ e^{10/R}; R = 8 keeps it on the lattice.
    const auto g = make_grid(1, 32.0, 512);
    const auto psi = packets(g, 4);
    for(const DilationMethod& m : {DilationMethod{DenseEigen{}}, DilationMethod{chebyshev_for(*g, 8.0)},
                                   DilationMethod{group_quadrature_for(8.0)}}) {
        const auto t = projection_triple(psi, 10.0, 8.0, m);
        EXPECT_LT(t.residual, 1e-8);
    }
}

TEST(FunctionOfA, GroupQuadratureMatchesDense) {
    const auto g = make_grid(1, 32.0, 512);
    const auto psi = packets(g, 6);
    const auto f = CutoffShape::step_down(10.0, 8.0);
    const auto r = function_of_A_with_residual(psi, f, group_quadrature_for(8.0));
    EXPECT_LT(r.residual, 1e-6);
    EXPECT_LT(rel(r.value, function_of_A(psi, f, DenseEigen{})), 1e-6);
}

TEST(FunctionOfA, ContractErrors) {
    const auto g = make_grid(1, 16.0, 128);
    const auto psi = packets(g, 1);
    const ScalarFunction f = [](double a) { return a; };
    EXPECT_THROW(function_of_A(psi, f, GroupQuadrature{}), std::invalid_argument);
    EXPECT_THROW(function_of_A(psi, f, Chebyshev{50, 0.5 * lattice_bound(*g)}), std::invalid_argument);
    EXPECT_THROW(function_of_A(psi, f, Chebyshev{0, lattice_bound(*g)}), std::invalid_argument);
    const auto wide = make_grid(1, 32.0, 512);
    GroupQuadrature coarse{group_quadrature_for(8.0).theta_max, 4, 0, 1e-12};
    EXPECT_THROW(function_of_A(packets(wide, 1), CutoffShape::step_down(10, 8), DilationMethod{coarse}),
                 QuadratureError);
}

TEST(FreeFrameCutoff, ReducesToMultiplierAtTimeZero) {
    const auto g = make_grid(1, 16.0, 256);
    const auto psi = packets(g, 7);
    const PhaseSpaceCutoff c{PhaseSpaceCutoff::Direction::ball, 2.0, 0.25};
    const auto a = free_frame_cutoff(psi, 0.0, c);
    const auto b = apply_multiplier(psi, [&c](const Point& x) { return c.profile(std::abs(x[0]) / 2.0); },
                                    Representation::position);
    EXPECT_LT(rel(a, b), 1e-13);
}

TEST(FreeFrameCutoffProperty, ConjugatesByFreeFlow) {
    // F_c(t) = e^{-iH0 t} F e^{iH0 t}, so F_c(t) e^{-iH0 t} psi = e^{-iH0 t} F psi.
    const auto g = make_grid(1, 32.0, 512);
    const auto psi = packets(g, 8);
    const PhaseSpaceCutoff c{PhaseSpaceCutoff::Direction::shell, 1.5, 0.25};
    for(double t : {0.5, 1.0, 2.0}) {
        const auto lhs = free_frame_cutoff(free_evolve(psi, t), t, c);
        const auto rhs = free_evolve(free_frame_cutoff(psi, 0.0, c), t);
        EXPECT_LT(rel(lhs, rhs), 1e-12);
    }
}

TEST(PhaseSpaceCutoff, ProfilesPartition) {
    for(double r = 0.0; r < 5.0; r += 0.1) {
        const PhaseSpaceCutoff ball{PhaseSpaceCutoff::Direction::ball, 1.0, 0.25};
        const PhaseSpaceCutoff comp{PhaseSpaceCutoff::Direction::complement, 1.0, 0.25};
        EXPECT_NEAR(ball.profile(r) + comp.profile(r), 1.0, 1e-15);
    }
}

TEST(MomentumShell, EdgesAtThreeQuartersAndFiveQuarters) {
    const auto g = make_grid(1, 64.0, 1024);
    const Real chi = momentum_shell(*g, 4.0);
    for(std::size_t i = 0; i < g->size(); ++i) {
        const double p = std::abs(g->p_axis()[i]);
        if(std::abs(p - 4.0) < 0.25) EXPECT_GT(chi[i], 0.99);
        if(p < 1.0 || p > 7.0) EXPECT_LT(chi[i], 1e-6);
    }
}

TEST(CommutatorIdentity, HoldsOnResolvedSubspaceForWideProfile) {
    const auto g = make_grid(1, 16.0, 256);
    const auto r = commutator_identity_check(AnalyticMultiplier::gaussian(), 10.0, 8.0, *g);
    EXPECT_LT(r.discrepancy, 1e-6);
    EXPECT_GT(r.subspace_dim, 10);
    EXPECT_GT(r.lhs_norm, 0.0);
}

TEST(CommutatorIdentity, ConstantMultiplierCommutes) {
    const auto g = make_grid(1, 16.0, 128);
    const auto r = commutator_identity_check(AnalyticMultiplier::constant(2.0), 5.0, 4.0, *g);
    EXPECT_LT(r.lhs_norm, 1e-10);
    EXPECT_LT(r.rhs_norm, 1e-10);
}

TEST(CommutatorExpansion, RemainderShrinksQuadraticallyInR) {
    const auto g = make_grid(1, 16.0, 256);
    const PotentialSpec v{GaussianBump{-1.0, 1.0, {}}, ConstantModulation{}, {}, 6.5};
    const auto r4 = commutator_expansion_check(v, CutoffShape::step_down(10.0, 4.0), *g);
    const auto r8 = commutator_expansion_check(v, CutoffShape::step_down(10.0, 8.0), *g);
    EXPECT_GT(r4.residual / r8.residual, 3.0);
}

TEST(LocalDecay, WeightedShellNormDecreases) {
    const auto g = make_grid(1, 64.0, 256);
    const auto v = ld1_operator_check(3.5, {2.0, 4.0, 8.0}, *g);
    EXPECT_GT(v[0], v[1]);
    EXPECT_GT(v[1], v[2]);
}

TEST(LocalDecay, IncomingProbeRejectsSmallBox) {
    const auto g = make_grid(1, 16.0, 256);
    const auto f = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.0);
    EXPECT_THROW(ld2_decay_probe(f, 4.0, {5.0}, 10.0, 5.0, DenseEigen{}), SupportEscape);
}
