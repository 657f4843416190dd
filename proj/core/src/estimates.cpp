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

#include "propreg/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace propreg {

namespace {

constexpr const char* kObservableNames[] = {"kinetic_threshold", "incoming_flag",  "incoming_weighted",
                                            "ps_energy",         "away_B_M",       "away_B_M_minus",
                                            "outgoing_energy",   "ps_high_freq"};

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double smooth_step(double x, double w) { return 0.5 * (1.0 + std::tanh(x / w)); }

DilationMethod method_for(const ObservableSpec& spec, const Grid& g, double width) {
    return spec.method ? *spec.method : default_method(g, width);
}

/// Realness guard on a symmetrized expectation.
double checked_real(cplx z, ObservableName n) {
    if(std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z.real())))
        throw std::runtime_error("evaluate_prob: " + to_string(n) + " has imaginary residue " + fmt_g(z.imag()));
    return z.real();
}

WaveFunction momentum_component(const WaveFunction& pos, int axis) {
    return apply_multiplier(pos, pos.grid->p_component(axis), Representation::momentum);
}

} // namespace

std::string to_string(ObservableName n) { return kObservableNames[static_cast<int>(n)]; }

ObservableName observable_from_string(const std::string& s) {
    for(int i = 0; i < 8; ++i)
        if(s == kObservableNames[i]) return static_cast<ObservableName>(i);
    throw std::invalid_argument("unknown observable '" + s + "'");
}

double ScaleRule::at(double t) const {
    if(kind == Kind::constant) return value;
    if(t <= 0.0) throw std::invalid_argument("ScaleRule: t^" + fmt_g(value) + " needs t > 0");
    return std::pow(t, value);
}

void ObservableSpec::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("observable." + field + ": " + why);
    };
    if(!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
    if(!(beta > 0.0 && beta <= 1.0)) fail("beta", "must lie in (0, 1]");
    if(!(R >= 1.0)) fail("R", "must be >= 1");
    if(!(M0 >= 1.0)) fail("M0", "must be >= 1");
    if(!(M >= M0)) fail("M", "must be >= M0");
    if(!(ell >= 0.0)) fail("ell", "must be >= 0");
    if(!(K > 0.0)) fail("K", "must be positive");
    if(!(softness > 0.0)) fail("softness", "must be positive");
    if(!(rc.value > 0.0)) fail("rc", "scale must be positive");
}

bool ObservableSpec::needs_unit_time() const noexcept {
    switch(name) {
        case ObservableName::kinetic_threshold:
        case ObservableName::away_B_M:
        case ObservableName::away_B_M_minus:
        case ObservableName::outgoing_energy: return true;
        case ObservableName::ps_energy:
        case ObservableName::ps_high_freq: return rc.time_dependent();
        default: return false;
    }
}

double evaluate_prob(const WaveFunction& psi, const ObservableSpec& spec, const PotentialSpec& V, double t) {
    spec.validate();
    if(spec.needs_unit_time() && t < 1.0)
        throw std::invalid_argument("evaluate_prob: " + to_string(spec.name) + " requires t >= 1, got " +
                                    fmt_g(t));
    const auto pos = transform(psi, Representation::position);
    const Grid& g = *pos.grid;
    const double w = spec.softness;

    switch(spec.name) {
        case ObservableName::kinetic_threshold: {
            const double ta = std::pow(t, spec.alpha);
            const auto phi = apply_multiplier(
                pos, [&](const Point& p) {
                    return smooth_step(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / ta - 1.0, w);
                },
                Representation::momentum);
            const auto h = apply_hamiltonian(pos, V, t);
            return checked_real(inner(phi, h) + inner(h, phi), spec.name);
        }
        case ObservableName::incoming_flag: {
            const auto phi = function_of_A(pos, CutoffShape::step_down(spec.M, spec.R), method_for(spec, g, spec.R));
            return checked_real(inner(pos, phi), spec.name);
        }
        case ObservableName::incoming_weighted: {
            const auto down = CutoffShape::step_down(spec.M, spec.R);
            const ScalarFunction weight = [down](double a) { return a * down(a); };
            const auto method = method_for(spec, g, spec.R);
            cplx z = 0.0;
            for(int axis = 0; axis < g.dim(); ++axis) {
                const auto q = momentum_component(pos, axis);
                z += inner(q, function_of_A(q, weight, method));
            }
            return checked_real(z, spec.name);
        }
        case ObservableName::ps_energy: {
            const auto phi = free_frame_cutoff(
                pos, t, PhaseSpaceCutoff{PhaseSpaceCutoff::Direction::ball, spec.rc.at(t), w});
            const auto h = apply_hamiltonian(pos, V, t);
            return checked_real(inner(phi, h) + inner(h, phi), spec.name);
        }
        case ObservableName::away_B_M:
        case ObservableName::away_B_M_minus: {
            const bool minus = spec.name == ObservableName::away_B_M_minus;
            const double tm = t * spec.M;
            const double ta = std::pow(t, spec.alpha);
            // Outer factor F_A(A/(tM) <= 1/2), or >= 1/2 for the minus variant.
            const ScalarFunction outer = [=](double a) {
                return smooth_step((minus ? 1.0 : -1.0) * (a / tm - 0.5), w);
            };
            // Inner factor in the free frame: F(-A/t^alpha >= 1), or F(A/t^alpha >= 1).
            const ScalarFunction inner_f = [=](double a) {
                return smooth_step((minus ? a : -a) / ta - 1.0, w);
            };
            const auto phi1 = function_of_A(pos, outer, method_for(spec, g, w * tm));
            const auto back = free_evolve(pos, -t);
            const auto phi2 = free_evolve(function_of_A(back, inner_f, method_for(spec, g, w * ta)), t);
            return checked_real(inner(phi1, phi2) + inner(phi2, phi1), spec.name);
        }
        case ObservableName::outgoing_energy: {
            const double scale = spec.M * std::pow(t, spec.alpha);
            const ScalarFunction f = [=](double a) { return smooth_step(a / scale - 1.0, w); };
            const auto phi = function_of_A(pos, f, method_for(spec, g, w * scale));
            return checked_real(inner(phi, apply_hamiltonian(phi, V, t)), spec.name);
        }
        case ObservableName::ps_high_freq: {
            const auto h = apply_hamiltonian(pos, V, t);
            const auto phi = free_frame_cutoff(
                h, t, PhaseSpaceCutoff{PhaseSpaceCutoff::Direction::ball, spec.rc.at(t), w});
            return checked_real(inner(h, phi), spec.name);
        }
    }
    throw std::logic_error("evaluate_prob: unhandled observable");
}

bool EstimateReport::all_pass() const noexcept {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Series& EstimateReport::find_series(const std::string& name) const {
    for(const auto& s : series)
        if(s.name == name) return s;
    throw std::out_of_range("no series named '" + name + "'");
}

const ExponentFit& EstimateReport::find_exponent(const std::string& name) const {
    for(const auto& e : exponents)
        if(e.name == name) return e;
    throw std::out_of_range("no exponent named '" + name + "'");
}

double EstimateReport::find_constant(const std::string& name) const {
    for(const auto& [k, v] : constants)
        if(k == name) return v;
    throw std::out_of_range("no constant named '" + name + "'");
}

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<std::size_t>& idx) {
    const double n = static_cast<double>(idx.size());
    double sx = 0, sy = 0;
    for(auto i : idx) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for(auto i : idx) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

} // namespace

FitResult fit_exponent(const std::vector<double>& t, const std::vector<double>& v, double t_lo, double t_hi,
                       int resamples, std::uint64_t seed) {
    if(t.size() != v.size()) throw std::invalid_argument("fit_exponent: t and v differ in length");
    std::vector<double> lx, ly;
    for(std::size_t i = 0; i < t.size(); ++i) {
        if(t[i] < t_lo || t[i] > t_hi) continue;
        if(!(t[i] > 0.0)) throw std::invalid_argument("fit_exponent: nonpositive time in window");
        if(!(v[i] > 0.0))
            throw std::invalid_argument("fit_exponent: nonpositive value " + fmt_g(v[i]) + " at t = " + fmt_g(t[i]));
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(v[i]));
    }
    if(lx.size() < 10)
        throw std::invalid_argument("fit_exponent: need at least 10 points in window, got " +
                                    std::to_string(lx.size()));

    std::vector<std::size_t> all(lx.size());
    std::iota(all.begin(), all.end(), 0);
    FitResult out;
    out.exponent = slope(lx, ly, all);
    out.points = static_cast<int>(lx.size());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, lx.size() - 1);
    std::vector<double> slopes;
    std::vector<std::size_t> idx(lx.size());
    for(int r = 0; r < resamples; ++r) {
        for(auto& i : idx) i = pick(rng);
        const double s = slope(lx, ly, idx);
        if(std::isfinite(s)) slopes.push_back(s);
    }
    if(slopes.size() >= 2) {
        std::sort(slopes.begin(), slopes.end());
        auto q = [&](double p) {
            const double pos = p * static_cast<double>(slopes.size() - 1);
            const auto i = static_cast<std::size_t>(pos);
            const double f = pos - static_cast<double>(i);
            return i + 1 < slopes.size() ? slopes[i] * (1 - f) + slopes[i + 1] * f : slopes[i];
        };
        out.half_width = 0.5 * (q(0.975) - q(0.025));
    }
    return out;
}

DyadicSum dyadic_sum(const std::vector<double>& values, double ell, double M0) {
    if(values.empty()) throw std::invalid_argument("dyadic_sum: empty family");
    DyadicSum out;
    for(std::size_t n = 0; n < values.size(); ++n) {
        const double w = std::pow(M0 * std::ldexp(1.0, static_cast<int>(n)), ell);
        out.weighted += w * values[n];
        out.harmonic += w / static_cast<double>(std::max<std::size_t>(n, 1)) * values[n];
    }
    return out;
}

DyadicScalarCheck dyadic_scalar_check(double a, double ell, double M0, int terms, double softness) {
    if(terms < 1) throw std::invalid_argument("dyadic_scalar_check: need at least one term");
    DyadicScalarCheck out;
    for(int n = 0; n < terms; ++n) {
        const double Mn = M0 * std::ldexp(1.0, n);
        out.sum += std::pow(Mn, ell) * smooth_step(std::abs(a) / Mn - 1.0, softness);
    }
    out.envelope = std::pow(std::abs(a), ell) * std::log(std::sqrt(1.0 + a * a));
    out.ratio = out.sum / out.envelope;
    return out;
}

SliceSchedule slice_schedule(double T, double ratio) {
    if(!(T > M_E)) throw std::invalid_argument("slice_schedule: T must exceed e");
    if(!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("slice_schedule: ratio must lie in (0, 1)");
    SliceSchedule s{T, ratio, {T}};
    // Iterate on ln T_n to keep T_n = T^(ratio^n) exact up to one rounding per step.
    double log_t = std::log(T);
    for(;;) {
        log_t *= ratio;
        const double next = std::exp(log_t);
        if(next < 2.0) break;
        s.boundaries.push_back(next);
        if(s.slices() > 64) throw std::runtime_error("slice_schedule: more than 64 slices");
    }
    return s;
}

Telescoping telescope(const SliceSchedule& s, const std::function<double(double)>& value) {
    Telescoping out;
    if(s.boundaries.empty()) return out;
    for(std::size_t n = 1; n < s.boundaries.size(); ++n)
        out.summed += value(s.boundaries[n - 1]) - value(s.boundaries[n]);
    out.direct = value(s.boundaries.front()) - value(s.boundaries.back());
    out.residual = std::abs(out.summed - out.direct);
    return out;
}

HeisenbergResult heisenberg_consistency(const ObservableSpec& spec, const PotentialSpec& V, const Trajectory& traj) {
    if(spec.name != ObservableName::ps_energy || spec.rc.time_dependent())
        throw std::invalid_argument("heisenberg_consistency: needs ps_energy with a constant R_c");
    if(traj.snapshots.size() < 3 || traj.snapshots.size() != traj.times.size())
        throw std::invalid_argument("heisenberg_consistency: needs at least three stored snapshots");

    const double h0 = traj.times[1] - traj.times[0];
    const double scale = energy_scale(traj.snapshots.front(), V, traj.times.front());
    if(h0 * scale > 0.1)
        throw std::invalid_argument("heisenberg_consistency: stride too coarse (h E = " +
                                    fmt_g(h0 * scale) + " > 0.1)");

    const PhaseSpaceCutoff cut{PhaseSpaceCutoff::Direction::ball, spec.rc.at(1.0), spec.softness};
    std::vector<double> b(traj.times.size());
    for(std::size_t i = 0; i < b.size(); ++i) b[i] = evaluate_prob(traj.snapshots[i], spec, V, traj.times[i]);

    HeisenbergResult out;
    for(std::size_t i = 1; i + 1 < b.size(); ++i) {
        const double hl = traj.times[i] - traj.times[i - 1];
        const double hr = traj.times[i + 1] - traj.times[i];
        // The last record may close a partial stride; skip uneven stencils.
        if(std::abs(hl - hr) > 1e-9 * hl) continue;
        const double t = traj.times[i];
        const auto psi = transform(traj.snapshots[i], Representation::position);
        const auto fpsi = free_frame_cutoff(psi, t, cut);
        const auto hpsi = apply_hamiltonian(psi, V, t);
        const Real v = V.is_zero() ? Real::Zero(psi.values.size()) : sample_potential(V, *psi.grid, t);
        const Real vdot = V.is_zero() ? Real::Zero(psi.values.size()) : sample_time_derivative(V, *psi.grid, t);

        WaveFunction vdot_psi = psi;
        vdot_psi.values = vdot.cwiseProduct(psi.values);
        // C psi = i (V F_c - F_c V) psi
        WaveFunction vpsi = psi;
        vpsi.values = v.cwiseProduct(psi.values);
        const auto f_vpsi = free_frame_cutoff(vpsi, t, cut);
        WaveFunction cpsi = psi;
        cpsi.values = cplx(0.0, 1.0) * (v.cwiseProduct(fpsi.values) - f_vpsi.values);

        const double rhs = 2.0 * inner(vdot_psi, fpsi).real() + 2.0 * inner(cpsi, hpsi).real();
        out.t.push_back(t);
        out.lhs.push_back((b[i + 1] - b[i - 1]) / (hl + hr));
        out.rhs.push_back(rhs);
        out.max_residual = std::max(out.max_residual, std::abs(out.lhs.back() - rhs));
    }
    return out;
}

WaveFunction make_initial_state(GridPtr g, const InitialState& s) {
    if(s.kind == InitialState::Kind::gaussian) {
        if(!(s.width > 0.0)) throw std::invalid_argument("initial_state.width must be positive");
        return gaussian_packet(std::move(g), s.center, s.k, s.width);
    }
    if(!(s.shell_K > 0.0)) throw std::invalid_argument("initial_state.shell_K must be positive");
    if(!(s.shell_width > 0.0 && s.shell_width < 1.0))
        throw std::invalid_argument("initial_state.shell_width must lie in (0, 1)");
    const Real shell = momentum_shell(*g, s.shell_K * (1.0 - s.shell_width), s.shell_K * (1.0 + s.shell_width),
                                      0.25 * s.shell_K * s.shell_width);
    Field hat(g->size());
    for(std::size_t i = 0; i < g->size(); ++i) {
        const Point p = g->momentum(i);
        const double phase = -(p[0] * s.center[0] + p[1] * s.center[1] + p[2] * s.center[2]);
        hat[i] = shell[i] * std::polar(1.0, phase);
    }
    auto psi = transform(WaveFunction(g, std::move(hat), Representation::momentum), Representation::position);
    psi.values /= norm(psi);
    return psi;
}

} // namespace propreg
