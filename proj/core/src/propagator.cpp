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

#include "propreg/propagator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "propreg/fft.hpp"

namespace propreg {
namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// V(x, t) with the envelope cached when the center does not move.
class PotentialSampler {
public:
    PotentialSampler(const PotentialSpec& spec, const Grid& g) : spec_(spec), grid_(g) {
        moving_ = spec.motion.omega != 0.0 &&
                  (spec.motion.amplitude[0] != 0.0 || spec.motion.amplitude[1] != 0.0 ||
                   spec.motion.amplitude[2] != 0.0);
        if(!moving_) envelope_ = sample_potential(without_modulation(spec), g, 0.0);
    }

    Real at(double t) const {
        if(moving_) return sample_potential(spec_, grid_, t);
        return modulation_value(spec_.modulation, t) * envelope_;
    }

private:
    static PotentialSpec without_modulation(PotentialSpec s) {
        s.modulation = ConstantModulation{};
        return s;
    }
    const PotentialSpec& spec_;
    const Grid& grid_;
    bool moving_ = false;
    Real envelope_;
};

void kinetic_in_place(const Grid& g, Field& v, const Field& phase) {
    fft::forward(g, v.data());
    v.array() *= phase.array();
    fft::backward(g, v.data());
}

Field kinetic_phase(const Grid& g, double tau) {
    const double inv = 1.0 / static_cast<double>(g.size());
    Field ph(g.size());
    const auto& p2 = g.p_squared();
    for(std::size_t i = 0; i < g.size(); ++i) ph[i] = std::polar(inv, -p2[i] * tau);
    return ph;
}

Field potential_phase(const Real& V, double tau) {
    Field ph(V.size());
    for(Eigen::Index i = 0; i < V.size(); ++i) ph[i] = std::polar(1.0, -V[i] * tau);
    return ph;
}

} // namespace

long Schedule::steps() const {
    if(!(dt > 0.0)) throw std::invalid_argument("schedule: dt must be positive");
    if(!(t_end > t_start)) throw std::invalid_argument("schedule: t_end must exceed t_start");
    if(snapshot_stride < 1) throw std::invalid_argument("schedule: snapshot_stride must be >= 1");
    return std::lround((t_end - t_start) / dt);
}

const std::vector<double>& Trajectory::probe(const std::string& name) const {
    for(const auto& [n, s] : probes)
        if(n == name) return s;
    throw std::out_of_range("trajectory: no probe named " + name);
}

WaveFunction free_evolve(const WaveFunction& psi, double tau) {
    if(tau == 0.0) return psi;
    const Grid& g = *psi.grid;
    WaveFunction out = psi;
    if(psi.representation == Representation::position) {
        kinetic_in_place(g, out.values, kinetic_phase(g, tau));
    } else {
        const auto& p2 = g.p_squared();
        for(std::size_t i = 0; i < g.size(); ++i) out.values[i] *= std::polar(1.0, -p2[i] * tau);
    }
    out.time = psi.time + tau;
    return out;
}

WaveFunction strang_step(const WaveFunction& psi, const PotentialSpec& spec, double t, double dt) {
    const Grid& g = *psi.grid;
    WaveFunction out = transform(psi, Representation::position);
    const Field half = potential_phase(sample_potential(spec, g, t + 0.5 * dt), 0.5 * dt);
    out.values.array() *= half.array();
    kinetic_in_place(g, out.values, kinetic_phase(g, dt));
    out.values.array() *= half.array();
    out.time = t + dt;
    return transform(out, psi.representation);
}

Trajectory evolve(const WaveFunction& psi0, const PotentialSpec& spec, const Schedule& schedule) {
    const long n_steps = schedule.steps();
    const Grid& g = *psi0.grid;
    const double dt = schedule.dt;

    Trajectory traj;
    traj.dt = dt;
    traj.stride = schedule.snapshot_stride;
    for(const auto& p : schedule.probes) traj.probes.emplace_back(p.name, std::vector<double>{});

    WaveFunction psi = transform(psi0, Representation::position);
    psi.time = schedule.t_start;
    traj.initial_norm = norm(psi);

    const PotentialSampler sampler(spec, g);
    const Field kin = kinetic_phase(g, dt);
    const bool zero_v = spec.is_zero();
    const bool static_v = spec.is_static();
    Field half_static;
    if(static_v && !zero_v) half_static = potential_phase(sampler.at(0.0), 0.5 * dt);

    auto record = [&](const WaveFunction& w) {
        traj.times.push_back(w.time);
        for(std::size_t k = 0; k < schedule.probes.size(); ++k)
            traj.probes[k].second.push_back(schedule.probes[k].evaluate(w));
        const double dev = std::abs(norm(w) - traj.initial_norm);
        traj.max_norm_deviation = std::max(traj.max_norm_deviation, dev);
        const double bm = boundary_mass(w);
        traj.max_boundary_mass = std::max(traj.max_boundary_mass, bm);
        if(bm > schedule.boundary_threshold && traj.valid) {
            traj.valid = false;
            char buf[128];
            std::snprintf(buf, sizeof buf, "boundary mass %.3g beyond |x| > L/2 at t = %g", bm, w.time);
            traj.breach = buf;
        }
        if(schedule.keep_snapshots) traj.snapshots.push_back(w);
    };

    record(psi);
    for(long step = 1; step <= n_steps; ++step) {
        const double t = schedule.t_start + (step - 1) * dt;
        if(!zero_v) {
            const Field half = static_v ? half_static : potential_phase(sampler.at(t + 0.5 * dt), 0.5 * dt);
            psi.values.array() *= half.array();
            kinetic_in_place(g, psi.values, kin);
            psi.values.array() *= half.array();
        } else {
            kinetic_in_place(g, psi.values, kin);
        }
        psi.time = schedule.t_start + step * dt;
        if(step % schedule.snapshot_stride == 0 || step == n_steps) record(psi);
    }
    return traj;
}

WaveFunction duhamel_integral(const Trajectory& traj, const PotentialSpec& spec, double t,
                              int quadrature_stride) {
    if(traj.snapshots.empty()) throw std::invalid_argument("duhamel_integral: trajectory has no snapshots");
    if(quadrature_stride < 1) throw std::invalid_argument("duhamel_integral: stride must be >= 1");
    const auto& first = traj.snapshots.front();
    const GridPtr grid = first.grid;
    const double t0 = traj.times.front();
    if(t < t0 - 1e-12 || t > traj.times.back() + 1e-12)
        throw std::out_of_range("duhamel_integral: t outside the trajectory");

    // Locate the snapshot at t.
    std::size_t end = traj.times.size();
    for(std::size_t i = 0; i < traj.times.size(); ++i)
        if(std::abs(traj.times[i] - t) < 1e-9 * std::max(1.0, std::abs(t))) end = i;
    if(end == traj.times.size()) throw std::invalid_argument("duhamel_integral: t is not a snapshot time");
    if(end % quadrature_stride != 0)
        throw std::invalid_argument("duhamel_integral: t is not on the quadrature lattice");
    if(end == 0) return WaveFunction::zeros(grid);

    const Grid& g = *grid;
    const double scale = energy_scale(first, spec, t0);
    for(std::size_t i = quadrature_stride; i <= end; i += quadrature_stride) {
        const double h = traj.times[i] - traj.times[i - quadrature_stride];
        if(h * scale > 0.1)
            throw std::invalid_argument("duhamel_integral: snapshot stride too coarse (h * E = " +
                                        fmt_g(h * scale) + " > 0.1)");
    }

    Field acc = Field::Zero(g.size());
    for(std::size_t i = 0; i <= end; i += quadrature_stride) {
        double w;
        if(i == 0) w = 0.5 * (traj.times[quadrature_stride] - traj.times[0]);
        else if(i == end) w = 0.5 * (traj.times[end] - traj.times[end - quadrature_stride]);
        else w = 0.5 * (traj.times[i + quadrature_stride] - traj.times[i - quadrature_stride]);
        const double s = traj.times[i];
        WaveFunction vpsi = transform(traj.snapshots[i], Representation::position);
        vpsi.values.array() *= sample_potential(spec, g, s).array();
        acc += w * free_evolve(vpsi, t - s).values;
    }
    return WaveFunction(grid, cplx(0.0, -1.0) * acc, Representation::position, t);
}

double energy_scale(const WaveFunction& psi, const PotentialSpec& spec, double t) {
    const Grid& g = *psi.grid;
    const auto hat = transform(psi, Representation::momentum);
    const double mass = hat.values.squaredNorm();
    double mean = 0.0, second = 0.0;
    for(std::size_t i = 0; i < g.size(); ++i) {
        const double w = std::norm(hat.values[i]) / mass;
        mean += w * g.p_squared()[i];
        second += w * g.p_squared()[i] * g.p_squared()[i];
    }
    const double vmax = spec.is_zero() ? 0.0 : sample_potential(spec, g, t).cwiseAbs().maxCoeff();
    return vmax + mean + 3.0 * std::sqrt(std::max(0.0, second - mean * mean));
}

WaveFunction apply_hamiltonian(const WaveFunction& psi, const PotentialSpec& spec, double t) {
    const Grid& g = *psi.grid;
    WaveFunction pos = transform(psi, Representation::position);
    WaveFunction out = apply_multiplier(pos, g.p_squared(), Representation::momentum);
    if(!spec.is_zero()) out.values.array() += sample_potential(spec, g, t).array() * pos.values.array();
    return out;
}

double energy_expectation(const WaveFunction& psi, const PotentialSpec& spec, double t) {
    const auto pos = transform(psi, Representation::position);
    const auto h = apply_hamiltonian(pos, spec, t);
    return inner(pos, h).real() / inner(pos, pos).real();
}

} // namespace propreg
