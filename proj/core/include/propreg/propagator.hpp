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

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "propreg/grid.hpp"
#include "propreg/potentials.hpp"

namespace propreg {

/// Named scalar evaluated on every snapshot.
struct Probe {
    std::string name;
    std::function<double(const WaveFunction&)> evaluate;
};

struct Schedule {
    double t_start = 0.0;
    double t_end   = 1.0;
    double dt      = 1e-3;
    int snapshot_stride = 1;
    std::vector<Probe> probes;
    /// Mass fraction allowed beyond |x| > L/2 before the run is invalid.
    double boundary_threshold = 1e-8;
    /// Keep full snapshots; probes are always recorded.
    bool keep_snapshots = true;

    /// Number of steps, (t_end - t_start) / dt rounded to nearest.
    long steps() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<WaveFunction> snapshots;
    std::vector<std::pair<std::string, std::vector<double>>> probes;
    double initial_norm = 0.0;
    double max_norm_deviation = 0.0;
    double max_boundary_mass = 0.0;
    bool valid = true;
    std::string breach;
    double dt = 0.0;
    int stride = 1;

    const std::vector<double>& probe(const std::string& name) const;
};

/// Exact free flow e^{-i |p|^2 tau}. Returned in the input representation.
WaveFunction free_evolve(const WaveFunction& psi, double tau);

/// Strang step: half potential phase at t + dt/2, kinetic step, half phase.
WaveFunction strang_step(const WaveFunction& psi, const PotentialSpec& spec, double t, double dt);

Trajectory evolve(const WaveFunction& psi0, const PotentialSpec& spec, const Schedule& schedule);

/** -i int_0^t e^{-i H0 (t-s)} V(s) psi(s) ds by the trapezoid rule over
 *  every `quadrature_stride`-th snapshot.
 *
 *  The step h between quadrature nodes must satisfy h * E <= 0.1 with E the
 *  energy scale max|V| + <p^2> + 3 std(p^2) of the initial state; coarser
 *  sampling is rejected.
 */
WaveFunction duhamel_integral(const Trajectory& traj, const PotentialSpec& spec, double t,
                              int quadrature_stride);

/// max|V(t)| + <p^2> + 3 std(p^2): the frequency scale resolved by a time grid.
double energy_scale(const WaveFunction& psi, const PotentialSpec& spec, double t);

/// <psi, (p^2 + V(t)) psi> / ||psi||^2.
double energy_expectation(const WaveFunction& psi, const PotentialSpec& spec, double t);

/// H(t) psi in the position representation.
WaveFunction apply_hamiltonian(const WaveFunction& psi, const PotentialSpec& spec, double t);

} // namespace propreg
