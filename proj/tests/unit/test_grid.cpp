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

#include "propreg/grid.hpp"

using namespace propreg;

namespace {

WaveFunction random_state(GridPtr g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Field v(g->size());
    for(auto& z : v) z = cplx(n(rng), n(rng));
    // Smooth by a Gaussian in momentum so every norm below is finite and resolved.
    WaveFunction psi(g, v);
    psi = apply_multiplier(psi, [](const Point& p) { return std::exp(-p[0] * p[0] - p[1] * p[1] - p[2] * p[2]); },
                           Representation::momentum);
    psi.values /= norm(psi);
    return psi;
}

} // namespace

TEST(Grid, FactoryRejectsBadShapes) {
    EXPECT_THROW(make_grid(0, 10.0, 64), std::invalid_argument);
    EXPECT_THROW(make_grid(4, 10.0, 64), std::invalid_argument);
    EXPECT_THROW(make_grid(1, -1.0, 64), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 10.0, 100), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 10.0, 8), std::invalid_argument);
    EXPECT_NO_THROW(make_grid(3, 10.0, 16));
}

TEST(Grid, LatticeSpacings) {
    const auto g = make_grid(1, 10.0, 64);
    EXPECT_DOUBLE_EQ(g->dx(), 20.0 / 64);
    EXPECT_DOUBLE_EQ(g->dp(), M_PI / 10.0);
    EXPECT_DOUBLE_EQ(g->p_max(), M_PI / g->dx());
    EXPECT_DOUBLE_EQ(g->x_axis().front(), -10.0);
    // FFT order: zero first, most negative momentum in the middle.
    EXPECT_DOUBLE_EQ(g->p_axis()[0], 0.0);
    EXPECT_DOUBLE_EQ(g->p_axis()[32], -32 * g->dp());
}

TEST(Grid, GaussianTransformMatchesClosedForm) {
    // (pi w^2)^{-1/4} e^{-x^2/2w^2} has transform (w^2/pi)^{1/4} e^{-w^2 p^2/2}.
    const auto g = make_grid(1, 20.0, 256);
    const double w = 1.5;
    const auto psi = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, w);
    const auto hat = transform(psi, Representation::momentum);
    double err = 0.0;
    for(std::size_t i = 0; i < g->size(); ++i) {
        const double p = g->p_axis()[i];
        const double exact = std::pow(w * w / M_PI, 0.25) * std::exp(-0.5 * w * w * p * p);
        err = std::max(err, std::abs(hat.values[i] - exact));
    }
    EXPECT_LT(err, 1e-12);
}

TEST(Grid, ShiftedPacketPicksUpPhase) {
    const auto g = make_grid(1, 20.0, 256);
    const auto psi = gaussian_packet(g, {2.0, 0, 0}, {0, 0, 0}, 1.0);
    const auto hat = transform(psi, Representation::momentum);
    for(std::size_t i = 1; i < 8; ++i) {
        const double p = g->p_axis()[i];
        const cplx exact = std::pow(1.0 / M_PI, 0.25) * std::exp(-0.5 * p * p) * std::polar(1.0, -2.0 * p);
        EXPECT_NEAR(std::abs(hat.values[i] - exact), 0.0, 1e-12);
    }
}

TEST(Grid, NormsOfGaussian) {
    const auto g = make_grid(1, 20.0, 512);
    const double w = 1.0;
    const auto psi = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, w);
    EXPECT_NEAR(norm(psi), 1.0, 1e-13);
    // <p^2> = 1/(2w^2), <p^4> = 3/(4w^4).
    EXPECT_NEAR(kinetic_expectation(psi), 0.5, 1e-12);
    EXPECT_NEAR(sobolev_norm(psi, 2.0), std::sqrt(1.0 + 2 * 0.5 + 0.75), 1e-12);
    EXPECT_NEAR(weighted_norm(psi, 0.0, 2), std::sqrt(0.75), 1e-12);
    EXPECT_NEAR(weighted_norm(psi, 0.0, 1), std::sqrt(0.5), 1e-12);
    EXPECT_THROW(sobolev_norm(psi, -1.0), std::invalid_argument);
}

TEST(Grid, BoundaryMassOfCenteredAndEdgePackets) {
    const auto g = make_grid(1, 40.0, 512);
    EXPECT_LT(boundary_mass(gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.0)), 1e-30);
    EXPECT_GT(boundary_mass(gaussian_packet(g, {30, 0, 0}, {0, 0, 0}, 1.0)), 0.99);
}

TEST(GridProperty, TransformIsUnitaryAndInvertible) {
    for(int dim : {1, 2, 3}) {
        const auto g = make_grid(dim, 8.0, dim == 1 ? 128 : 16);
        for(std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto a = random_state(g, seed), b = random_state(g, seed + 100);
            const auto ah = transform(a, Representation::momentum), bh = transform(b, Representation::momentum);
            EXPECT_NEAR(std::abs(inner(ah, bh) - inner(a, b)), 0.0, 1e-12);
            const auto back = transform(ah, Representation::position);
            EXPECT_LT((back.values - a.values).norm() / a.values.norm(), 1e-13);
        }
    }
}

TEST(GridProperty, InnerProductIsHermitian) {
    const auto g = make_grid(1, 8.0, 64);
    for(std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = random_state(g, seed), b = random_state(g, seed + 7);
        EXPECT_NEAR(std::abs(inner(a, b) - std::conj(inner(b, a))), 0.0, 1e-14);
        EXPECT_NEAR(inner(a, a).imag(), 0.0, 1e-15);
    }
}

TEST(GridProperty, MultiplierOverloadsAgree) {
    const auto g = make_grid(2, 6.0, 32);
    const auto psi = random_state(g, 3);
    auto f = [](const Point& x) { return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]); };
    const auto a = apply_multiplier(psi, f, Representation::position);
    const auto b = apply_multiplier(psi, g->sample_position(f), Representation::position);
    EXPECT_LT((a.values - b.values).norm(), 1e-14);
}
