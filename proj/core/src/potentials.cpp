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

#include "propreg/potentials.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace propreg {

BandLimitedNoise::BandLimitedNoise(double cutoff, std::uint64_t seed)
  : cutoff_(cutoff), seed_(seed) {
    if(!(cutoff > 0.0)) throw std::invalid_argument("band_limited_noise: cutoff must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(0.0, cutoff);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    omega_.resize(modes);
    phase_.resize(modes);
    for(int j = 0; j < modes; ++j) {
        omega_[j] = freq(rng);
        phase_[j] = ph(rng);
    }
}

double BandLimitedNoise::value(double t) const noexcept {
    double acc = 0.0;
    for(int j = 0; j < modes; ++j) acc += std::sin(omega_[j] * t + phase_[j]);
    return acc / modes;
}

double BandLimitedNoise::derivative(double t) const noexcept {
    double acc = 0.0;
    for(int j = 0; j < modes; ++j) acc += omega_[j] * std::cos(omega_[j] * t + phase_[j]);
    return acc / modes;
}

double BandLimitedNoise::derivative_bound() const noexcept {
    double acc = 0.0;
    for(double w : omega_) acc += std::abs(w);
    return acc / modes;
}

bool PotentialSpec::is_zero() const noexcept {
    return std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr(std::is_same_v<T, GaussianBump>) return e.depth == 0.0;
            else return e.amplitude == 0.0;
        },
        envelope);
}

bool PotentialSpec::is_static() const noexcept {
    const bool still = motion.omega == 0.0 ||
                       (motion.amplitude[0] == 0.0 && motion.amplitude[1] == 0.0 &&
                        motion.amplitude[2] == 0.0);
    return still && std::holds_alternative<ConstantModulation>(modulation);
}

double modulation_value(const Modulation& m, double t) noexcept {
    return std::visit(
        [t](const auto& mod) -> double {
            using T = std::decay_t<decltype(mod)>;
            if constexpr(std::is_same_v<T, ConstantModulation>) return 1.0;
            else if constexpr(std::is_same_v<T, Sinusoid>) return std::sin(mod.omega * t + mod.phase);
            else if constexpr(std::is_same_v<T, Chirp>)
                return std::sin(mod.omega * t + 0.5 * mod.rate * t * t);
            else return mod.value(t);
        },
        m);
}

double modulation_derivative(const Modulation& m, double t) noexcept {
    return std::visit(
        [t](const auto& mod) -> double {
            using T = std::decay_t<decltype(mod)>;
            if constexpr(std::is_same_v<T, ConstantModulation>) return 0.0;
            else if constexpr(std::is_same_v<T, Sinusoid>)
                return mod.omega * std::cos(mod.omega * t + mod.phase);
            else if constexpr(std::is_same_v<T, Chirp>)
                return (mod.omega + mod.rate * t) * std::cos(mod.omega * t + 0.5 * mod.rate * t * t);
            else return mod.derivative(t);
        },
        m);
}

double modulation_sup(const Modulation&) noexcept { return 1.0; }

double modulation_derivative_sup(const Modulation& m, double t_max) noexcept {
    return std::visit(
        [t_max](const auto& mod) -> double {
            using T = std::decay_t<decltype(mod)>;
            if constexpr(std::is_same_v<T, ConstantModulation>) return 0.0;
            else if constexpr(std::is_same_v<T, Sinusoid>) return std::abs(mod.omega);
            else if constexpr(std::is_same_v<T, Chirp>)
                return std::max(std::abs(mod.omega), std::abs(mod.omega + mod.rate * t_max));
            else return mod.derivative_bound();
        },
        m);
}

Point center_offset(const CenterMotion& c, double t) noexcept {
    const double s = std::sin(c.omega * t);
    return {c.amplitude[0] * s, c.amplitude[1] * s, c.amplitude[2] * s};
}

Point center_velocity(const CenterMotion& c, double t) noexcept {
    const double s = c.omega * std::cos(c.omega * t);
    return {c.amplitude[0] * s, c.amplitude[1] * s, c.amplitude[2] * s};
}

namespace {

const Point& envelope_center(const Envelope& e) {
    return std::visit([](const auto& env) -> const Point& { return env.center; }, e);
}

Point displacement(const PotentialSpec& spec, const Point& x, double t, int dim) {
    const Point& c = envelope_center(spec.envelope);
    const Point r = center_offset(spec.motion, t);
    Point y{0.0, 0.0, 0.0};
    for(int a = 0; a < dim; ++a) y[a] = x[a] - c[a] - r[a];
    return y;
}

template<typename F>
Real sample(const PotentialSpec& spec, const Grid& g, double t, F&& f) {
    Real out(g.size());
    const int n = g.dim();
    for(std::size_t i = 0; i < g.size(); ++i) {
        const auto y = displacement(spec, g.position(i), t, n);
        out[i] = f(envelope_jet(spec.envelope, y, n));
    }
    return out;
}

} // namespace

EnvelopeJet envelope_jet(const Envelope& e, const Point& y, int dim) noexcept {
    double r2 = 0.0;
    for(int a = 0; a < dim; ++a) r2 += y[a] * y[a];
    EnvelopeJet jet;
    if(const auto* g = std::get_if<GaussianBump>(&e)) {
        const double w2 = g->width * g->width;
        jet.value = g->depth * std::exp(-r2 / (2.0 * w2));
        for(int a = 0; a < dim; ++a) jet.gradient[a] = -y[a] / w2 * jet.value;
        jet.laplacian = (r2 / (w2 * w2) - dim / w2) * jet.value;
    } else {
        const auto& ip = std::get<InversePower>(e);
        const double s = ip.exponent;
        const double q = 1.0 + r2;
        const double base = ip.amplitude * std::pow(q, -0.5 * s);
        jet.value = base;
        for(int a = 0; a < dim; ++a) jet.gradient[a] = -s * y[a] * base / q;
        jet.laplacian = base * (-s * dim / q + s * (s + 2.0) * r2 / (q * q));
    }
    return jet;
}

Real sample_potential(const PotentialSpec& spec, const Grid& g, double t) {
    const double m = modulation_value(spec.modulation, t);
    return sample(spec, g, t, [m](const EnvelopeJet& j) { return m * j.value; });
}

Real sample_time_derivative(const PotentialSpec& spec, const Grid& g, double t) {
    const double m  = modulation_value(spec.modulation, t);
    const double dm = modulation_derivative(spec.modulation, t);
    const Point v = center_velocity(spec.motion, t);
    const int n = g.dim();
    return sample(spec, g, t, [=](const EnvelopeJet& j) {
        double drift = 0.0;
        for(int a = 0; a < n; ++a) drift += j.gradient[a] * v[a];
        return dm * j.value - m * drift;
    });
}

Real sample_gradient(const PotentialSpec& spec, const Grid& g, double t, int axis) {
    if(axis < 0 || axis >= g.dim()) throw std::invalid_argument("sample_gradient: bad axis");
    const double m = modulation_value(spec.modulation, t);
    return sample(spec, g, t, [=](const EnvelopeJet& j) { return m * j.gradient[axis]; });
}

Real sample_laplacian(const PotentialSpec& spec, const Grid& g, double t) {
    const double m = modulation_value(spec.modulation, t);
    return sample(spec, g, t, [m](const EnvelopeJet& j) { return m * j.laplacian; });
}

AssumptionReport verify_decay_assumptions(const PotentialSpec& spec, const Grid& g, double sigma,
                                          const std::vector<double>& time_samples,
                                          double constant) {
    if(!(sigma > 0.0)) throw std::invalid_argument("verify_decay_assumptions: sigma must be positive");
    AssumptionReport rep;
    rep.sigma_tested   = sigma;
    rep.constant       = constant;
    rep.lattice_points = g.size();
    rep.time_samples   = time_samples.size();

    double t_max = 0.0;
    for(double t : time_samples) t_max = std::max(t_max, std::abs(t));
    const double msup  = modulation_sup(spec.modulation);
    const double dmsup = modulation_derivative_sup(spec.modulation, t_max);
    const int n = g.dim();

    double inner_v = 0.0, inner_d = 0.0, shell_v = 0.0, shell_d = 0.0;
    std::vector<double> ts = time_samples.empty() ? std::vector<double>{0.0} : time_samples;
    for(double t : ts) {
        const Point vel = center_velocity(spec.motion, t);
        for(std::size_t i = 0; i < g.size(); ++i) {
            const auto x = g.position(i);
            const auto j = envelope_jet(spec.envelope, displacement(spec, x, t, n), n);
            const double w = std::pow(1.0 + g.x_squared()[i], 0.5 * sigma);
            double grad2 = 0.0, drift = 0.0;
            for(int a = 0; a < n; ++a) {
                grad2 += j.gradient[a] * j.gradient[a];
                drift += j.gradient[a] * vel[a];
            }
            const double wv = w * msup * std::abs(j.value);
            const double wd = w * (dmsup * std::abs(j.value) + msup * std::abs(drift) +
                                   msup * std::sqrt(grad2) + msup * std::abs(j.laplacian));
            if(g.on_outer_shell(i)) {
                shell_v = std::max(shell_v, wv);
                shell_d = std::max(shell_d, wd);
            } else {
                inner_v = std::max(inner_v, wv);
                inner_d = std::max(inner_d, wd);
            }
        }
    }
    rep.sup_weighted_V = std::max(inner_v, shell_v);
    rep.sup_weighted_derivatives = std::max(inner_d, shell_d);
    // Growth toward the edge means the true supremum on R^n is infinite.
    rep.attained_on_boundary = (shell_v > 0.0 && shell_v >= inner_v) ||
                               (shell_d > 0.0 && shell_d >= inner_d);
    rep.pass = std::isfinite(rep.sup_weighted_V) && std::isfinite(rep.sup_weighted_derivatives) &&
               rep.sup_weighted_V < constant && rep.sup_weighted_derivatives < constant &&
               !rep.attained_on_boundary;
    return rep;
}

cplx dilated_envelope(const Envelope& e, double x, cplx theta) {
    const cplx z = std::exp(-theta) * x;
    if(const auto* g = std::get_if<GaussianBump>(&e)) {
        if(g->center[0] != 0.0) throw std::invalid_argument("dilated_envelope: center must be 0");
        return g->depth * std::exp(-z * z / (2.0 * g->width * g->width));
    }
    const auto& ip = std::get<InversePower>(e);
    if(ip.center[0] != 0.0) throw std::invalid_argument("dilated_envelope: center must be 0");
    const cplx q = 1.0 + z * z;
    if(std::abs(q) < 1e-12) throw std::domain_error("dilated_envelope: singular on the lattice");
    return ip.amplitude * std::pow(q, -0.5 * ip.exponent);
}

std::string describe(const PotentialSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& env) {
            using T = std::decay_t<decltype(env)>;
            if constexpr(std::is_same_v<T, GaussianBump>)
                os << "gaussian_bump(depth=" << env.depth << ", width=" << env.width << ")";
            else
                os << "inverse_power(amplitude=" << env.amplitude << ", exponent=" << env.exponent
                   << ")";
        },
        spec.envelope);
    std::visit(
        [&](const auto& mod) {
            using T = std::decay_t<decltype(mod)>;
            if constexpr(std::is_same_v<T, ConstantModulation>) os << " x constant";
            else if constexpr(std::is_same_v<T, Sinusoid>)
                os << " x sinusoid(omega=" << mod.omega << ", phase=" << mod.phase << ")";
            else if constexpr(std::is_same_v<T, Chirp>)
                os << " x chirp(omega=" << mod.omega << ", rate=" << mod.rate << ")";
            else os << " x band_limited_noise(cutoff=" << mod.cutoff() << ", seed=" << mod.seed() << ")";
        },
        spec.modulation);
    return os.str();
}

} // namespace propreg
