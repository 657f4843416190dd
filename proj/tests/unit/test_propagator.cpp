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

#include <gtest/gtest.h>

#include "propreg/propagator.hpp"

using namespace propreg;

namespace {

const PotentialSpec kFree{InversePower{0.0, 6.5, {}}, ConstantModulation{}, {}, 6.5};

PotentialSpec modulated_bump() { return {GaussianBump{-1.0, 1.0, {}}, Sinusoid{1.0, 0.0}, {}, 6.5}; }

double distance(const WaveFunction& a, const WaveFunction& b) {
    WaveFunction d = transform(a, Representation::position);
    d.values -= transform(b, Representation::position).values;
    return norm(d);
}

} // namespace

TEST(Propagator, ScheduleStepsAndValidation) {
    Schedule s{0.0, 1.0, 0.01, 1, {}, 1e-8, true};
    EXPECT_EQ(s.steps(), 100);
    s.dt = -1.0;
    EXPECT_THROW(s.steps(), std::invalid_argument);
}

TEST(Propagator, FreeGaussianMatchesClosedForm) {
    // i psi_t = -psi_xx: width parameter s = w^2 + 2it, group velocity 2k.
    const auto g = make_grid(1, 32.0, 1024);
    const double w = 1.0, k = 0.7, t = 1.3;
    const auto out = free_evolve(gaussian_packet(g, {0, 0, 0}, {k, 0, 0}, w), t);
    const cplx s(w * w, 2 * t);
    double err = 0.0;
    for(std::size_t i = 0; i < g->size(); ++i) {
        const double x = g->x_axis()[i], y = x - 2 * k * t;
        const cplx exact = std::pow(M_PI * w * w, -0.25) * std::sqrt(cplx(w * w) / s) *
                           std::exp(-y * y / (2.0 * s) + cplx(0, k * x - k * k * t));
        err = std::max(err, std::abs(out.values[i] - exact));
    }
    EXPECT_LT(err, 1e-12);
}

TEST(PropagatorProperty, FreeFlowIsAGroup) {
    const auto g = make_grid(2, 10.0, 32);
    const auto psi = gaussian_packet(g, {0.5, -0.5, 0}, {0.3, 0.1, 0}, 1.2);
    EXPECT_LT(distance(free_evolve(free_evolve(psi, 0.4), 0.7), free_evolve(psi, 1.1)), 1e-13);
    EXPECT_LT(distance(free_evolve(free_evolve(psi, 0.9), -0.9), psi), 1e-13);
}

TEST(PropagatorProperty, StrangStepIsUnitary) {
    const auto g = make_grid(1, 16.0, 256);
    auto psi = gaussian_packet(g, {-1, 0, 0}, {0.5, 0, 0}, 1.0);
    for(int n = 0; n < 200; ++n) psi = strang_step(psi, modulated_bump(), 0.01 * n, 0.01);
    EXPECT_NEAR(norm(psi), 1.0, 1e-12);
}

TEST(Propagator, StrangIsSecondOrder) {
    const auto g = make_grid(1, 16.0, 256);
    const auto psi0 = gaussian_packet(g, {-2, 0, 0}, {0.5, 0, 0}, 1.0);
    auto run = [&](double dt) {
        auto psi = psi0;
        for(long n = 0; n < std::lround(1.0 / dt); ++n) psi = strang_step(psi, modulated_bump(), n * dt, dt);
        return psi;
    };
    const auto ref = run(1.0 / 1280);
    const double e1 = distance(run(0.02), ref), e2 = distance(run(0.01), ref);
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Propagator, EvolveRecordsSnapshotsAndProbes) {
    const auto g = make_grid(1, 32.0, 256);
    Schedule s{0.0, 1.0, 0.01, 30, {{"norm", [](const WaveFunction& p) { return norm(p); }}}, 1e-8, true};
    const auto traj = evolve(gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.0), modulated_bump(), s);
    // Records at steps 0, 30, 60, 90 and the final step 100.
    ASSERT_EQ(traj.times.size(), 5u);
    EXPECT_DOUBLE_EQ(traj.times.back(), 1.0);
    EXPECT_NEAR(traj.times[1], 0.3, 1e-12);
    EXPECT_EQ(traj.snapshots.size(), 5u);
    for(double v : traj.probe("norm")) EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_TRUE(traj.valid) << traj.breach;
    EXPECT_THROW(traj.probe("missing"), std::out_of_range);
}

TEST(Propagator, BoundaryBreachInvalidatesTrajectory) {
    const auto g = make_grid(1, 16.0, 256);
    Schedule s{0.0, 6.0, 0.01, 10, {}, 1e-8, false};
    const auto traj = evolve(gaussian_packet(g, {0, 0, 0}, {2.0, 0, 0}, 1.0), kFree, s);
    EXPECT_FALSE(traj.valid);
    EXPECT_NE(traj.breach.find("boundary mass"), std::string::npos);
}

TEST(Propagator, StaticEnergyIsConserved) {
    const auto g = make_grid(1, 16.0, 256);
    const PotentialSpec fixed{GaussianBump{-1.0, 1.0, {}}, ConstantModulation{}, {}, 6.5};
    auto psi = gaussian_packet(g, {-1, 0, 0}, {0.5, 0, 0}, 1.0);
    const double e0 = energy_expectation(psi, fixed, 0.0);
    for(int n = 0; n < 1000; ++n) psi = strang_step(psi, fixed, 1e-3 * n, 1e-3);
    EXPECT_LT(std::abs(energy_expectation(psi, fixed, 1.0) - e0), 1e-6);
}

TEST(Propagator, HamiltonianOfGaussianMatchesClosedForm) {
    const auto g = make_grid(1, 16.0, 256);
    const auto psi = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.0);
    EXPECT_NEAR(energy_expectation(psi, kFree, 0.0), 0.5, 1e-12);
    const auto h = apply_hamiltonian(psi, kFree, 0.0);
    // -psi'' = (1 - x^2) psi for w = 1.
    for(std::size_t i = 96; i < 160; i += 8) {
        const double x = g->x_axis()[i];
        EXPECT_NEAR(std::abs(h.values[i] - (1 - x * x) * psi.values[i]), 0.0, 1e-10);
    }
}

TEST(Propagator, DuhamelReconstructsTheSolution) {
    // psi(t) = e^{-iH0 t} psi(0) - i int_0^t e^{-iH0(t-s)} V(s) psi(s) ds.
    const auto g = make_grid(1, 16.0, 256);
    const auto psi0 = gaussian_packet(g, {-1, 0, 0}, {0.3, 0, 0}, 1.0);
    Schedule s{0.0, 1.0, 1e-3, 1, {}, 1e-8, true};
    const auto traj = evolve(psi0, modulated_bump(), s);
    auto rebuilt = free_evolve(psi0, 1.0);
    rebuilt.values += duhamel_integral(traj, modulated_bump(), 1.0, 5).values;
    EXPECT_LT(distance(rebuilt, traj.snapshots.back()), 1e-4);
}

TEST(Propagator, DuhamelRejectsCoarseQuadrature) {
    const auto g = make_grid(1, 16.0, 256);
    Schedule s{0.0, 1.0, 0.01, 1, {}, 1e-8, true};
    const auto traj = evolve(gaussian_packet(g, {0, 0, 0}, {1.0, 0, 0}, 1.0), modulated_bump(), s);
    EXPECT_THROW(duhamel_integral(traj, modulated_bump(), 1.0, 50), std::invalid_argument);
    EXPECT_THROW(duhamel_integral(traj, modulated_bump(), 0.555, 1), std::invalid_argument);
}
