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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "propreg/grid.hpp"

namespace propreg {

/// V0 exp(-|y|^2 / (2 w^2)) with y = x - c - r(t).
struct GaussianBump {
    double depth = -1.0;
    double width = 1.0;
    Point center{0.0, 0.0, 0.0};
};

/// V0 <y>^{-s'} with y = x - c - r(t).
struct InversePower {
    double amplitude = 1.0;
    double exponent  = 6.5;
    Point center{0.0, 0.0, 0.0};
};

using Envelope = std::variant<GaussianBump, InversePower>;

struct ConstantModulation {};

/// sin(omega t + phase)
struct Sinusoid {
    double omega = 1.0;
    double phase = 0.0;
};

/// sin(omega t + rate t^2 / 2)
struct Chirp {
    double omega = 1.0;
    double rate  = 0.0;
};

/// Sum of 32 seeded random-phase modes below cutoff, normalized to [-1, 1].
class BandLimitedNoise {
public:
    static constexpr int modes = 32;

    BandLimitedNoise(double cutoff = 1.0, std::uint64_t seed = 0);

    double cutoff() const noexcept { return cutoff_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double value(double t) const noexcept;
    double derivative(double t) const noexcept;
    /// sum_j a_j |omega_j|, an upper bound for |m'(t)|.
    double derivative_bound() const noexcept;

private:
    double cutoff_;
    std::uint64_t seed_;
    std::vector<double> omega_, phase_;
};

using Modulation = std::variant<ConstantModulation, Sinusoid, Chirp, BandLimitedNoise>;

/// r(t) = amplitude * sin(omega t), componentwise.
struct CenterMotion {
    Point amplitude{0.0, 0.0, 0.0};
    double omega = 0.0;
};

struct PotentialSpec {
    Envelope envelope = GaussianBump{};
    Modulation modulation = ConstantModulation{};
    CenterMotion motion{};
    double decay_claim = 6.5;

    /// V identically zero (zero depth or amplitude).
    bool is_zero() const noexcept;
    /// No time dependence at all.
    bool is_static() const noexcept;
};

double modulation_value(const Modulation& m, double t) noexcept;
double modulation_derivative(const Modulation& m, double t) noexcept;
/// sup |m| and sup |m'| over [0, t_max].
double modulation_sup(const Modulation& m) noexcept;
double modulation_derivative_sup(const Modulation& m, double t_max) noexcept;

Point center_offset(const CenterMotion& c, double t) noexcept;
Point center_velocity(const CenterMotion& c, double t) noexcept;

/// Envelope and its derivatives at a displacement y (already shifted).
struct EnvelopeJet {
    double value = 0.0;
    Point gradient{0.0, 0.0, 0.0};
    double laplacian = 0.0;
};
EnvelopeJet envelope_jet(const Envelope& e, const Point& y, int dim) noexcept;

Real sample_potential(const PotentialSpec& spec, const Grid& g, double t);
Real sample_time_derivative(const PotentialSpec& spec, const Grid& g, double t);
/// One component of grad V.
Real sample_gradient(const PotentialSpec& spec, const Grid& g, double t, int axis);
Real sample_laplacian(const PotentialSpec& spec, const Grid& g, double t);

struct AssumptionReport {
    double sup_weighted_V = 0.0;
    double sup_weighted_derivatives = 0.0;
    double sigma_tested = 0.0;
    double constant = 0.0;
    std::size_t lattice_points = 0;
    std::size_t time_samples = 0;
    /// Largest supremum sits on the outermost lattice layer (growth toward infinity).
    bool attained_on_boundary = false;
    bool pass = false;
};

/** Suprema of <x>^sigma |V| and <x>^sigma (|dV/dt| + |grad V| + |Lap V|).
 *
 *  The modulation enters through its uniform bounds sup|m| and sup|m'|,
 *  so for a fixed center the result does not depend on which times are
 *  sampled. A supremum reached on the box edge is reported as divergent.
 */
AssumptionReport verify_decay_assumptions(const PotentialSpec& spec, const Grid& g, double sigma,
                                          const std::vector<double>& time_samples,
                                          double constant = 1e6);

/// Complex dilation of the envelope, B(e^{-theta} x) with complex theta.
/// Only centered envelopes without motion are dilation analytic here.
cplx dilated_envelope(const Envelope& e, double x, cplx theta);

std::string describe(const PotentialSpec& spec);

} // namespace propreg
