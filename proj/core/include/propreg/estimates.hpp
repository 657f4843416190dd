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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "propreg/grid.hpp"
#include "propreg/operator_calculus.hpp"
#include "propreg/potentials.hpp"
#include "propreg/propagator.hpp"

namespace propreg {

enum class ObservableName {
    kinetic_threshold,
    incoming_flag,
    incoming_weighted,
    ps_energy,
    away_B_M,
    away_B_M_minus,
    outgoing_energy,
    ps_high_freq
};

std::string to_string(ObservableName n);
ObservableName observable_from_string(const std::string& s);

/// Spatial scale R_c: a constant or t^exponent.
struct ScaleRule {
    enum class Kind { constant, power };
    Kind kind = Kind::power;
    double value = 0.4;

    double at(double t) const;
    bool time_dependent() const noexcept { return kind == Kind::power; }
};

struct ObservableSpec {
    ObservableName name = ObservableName::ps_energy;
    double M = 10.0;
    double R = 5.0;
    double M0 = 1.0;
    double alpha = 0.2;
    double beta = 1.0;
    double ell = 1.0;
    double K = 1.0;
    ScaleRule rc{};
    /// Relative tanh width used by every smooth step inside the observable.
    double softness = 0.25;
    /// Backend for functions of A; chosen per grid when empty.
    std::optional<DilationMethod> method;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// True when some factor scales with t^alpha (then t >= 1 is required).
    bool needs_unit_time() const noexcept;
};

/// <psi, B(t) psi> for the symmetrized observable B.
double evaluate_prob(const WaveFunction& psi, const ObservableSpec& spec, const PotentialSpec& V, double t);

struct Series {
    std::string name;
    std::vector<double> t;
    std::vector<double> v;
};

struct ExponentFit {
    std::string name;
    double exponent = 0.0;
    double half_width = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int points = 0;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    /// "<", "<=", ">=" ...
    std::string relation;
    std::string detail;
};

struct EstimateReport {
    std::string scenario;
    std::vector<Series> series;
    std::vector<ExponentFit> exponents;
    std::vector<std::pair<std::string, double>> constants;
    std::vector<Verdict> verdicts;

    int dim = 1;
    double half_width = 0.0;
    int points_per_axis = 0;
    double dt = 0.0;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    double max_boundary_mass = 0.0;
    double max_norm_deviation = 0.0;
    bool trajectory_valid = true;
    std::string breach;

    bool all_pass() const noexcept;
    const Series& find_series(const std::string& name) const;
    const ExponentFit& find_exponent(const std::string& name) const;
    double find_constant(const std::string& name) const;
};

struct FitResult {
    double exponent = 0.0;
    double half_width = 0.0;
    int points = 0;
};

/// Least-squares slope of log v against log t on [t_lo, t_hi], with a
/// seeded bootstrap 95% half-width.
FitResult fit_exponent(const std::vector<double>& t, const std::vector<double>& v, double t_lo, double t_hi,
                       int resamples = 200, std::uint64_t seed = 20240601);

struct DyadicSum {
    double weighted = 0.0; ///< sum M_n^l v_n
    double harmonic = 0.0; ///< sum M_n^l / max(n, 1) v_n
};

/// M_n = M0 2^n for n = 0 .. values.size() - 1.
DyadicSum dyadic_sum(const std::vector<double>& values, double ell, double M0);

struct DyadicScalarCheck {
    double sum = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

/// sum_n M_n^l F(|a| / M_n >= 1) against |a|^l ln<a>, smooth step of width `softness`.
DyadicScalarCheck dyadic_scalar_check(double a, double ell, double M0, int terms, double softness = 0.25);

struct SliceSchedule {
    double T = 0.0;
    double ratio = 0.8;
    /// T = T_0 > T_1 > ... > T_last >= 2.
    std::vector<double> boundaries;

    std::size_t slices() const noexcept { return boundaries.empty() ? 0 : boundaries.size() - 1; }
};

/// T_n = T_{n-1}^ratio while T_n >= 2.
SliceSchedule slice_schedule(double T, double ratio = 0.8);

struct Telescoping {
    double summed = 0.0;
    double direct = 0.0;
    double residual = 0.0;
};
Telescoping telescope(const SliceSchedule& s, const std::function<double(double)>& value);

struct HeisenbergResult {
    std::vector<double> t;
    std::vector<double> lhs;
    std::vector<double> rhs;
    double max_residual = 0.0;
};

/// Centered difference of <H F_c + F_c H> against the dV/dt and [V, F_c] terms.
HeisenbergResult heisenberg_consistency(const ObservableSpec& spec, const PotentialSpec& V, const Trajectory& traj);

struct InitialState {
    enum class Kind { gaussian, shell };
    Kind kind = Kind::gaussian;
    Point center{0.0, 0.0, 0.0};
    /// Velocity is 2k.
    Point k{0.0, 0.0, 0.0};
    double width = 4.0;
    /// Shell radius and relative width for Kind::shell.
    double shell_K = 2.0;
    double shell_width = 0.25;
};

WaveFunction make_initial_state(GridPtr g, const InitialState& s);

struct ScenarioConfig {
    std::string scenario = "local_smoothness";
    int dim = 1;
    double half_width = 2048.0;
    int points_per_axis = 8192;
    PotentialSpec potential{};
    InitialState initial{};
    double t_start = 0.0;
    double t_end = 100.0;
    double dt = 0.01;
    int stride = 100;
    ObservableSpec observable{};
    double ratio = 0.8;
    int dyadic_terms = 4;
    double fit_lo = 10.0;
    double fit_hi = 0.0; ///< 0 means t_end
    int eval_points = 16;
    double trend_tolerance = 0.05;
    double weight_power = 3.5;
    std::uint64_t seed = 0;
};

struct ScenarioInfo {
    std::string name;
    std::string anchor;
    std::string claim;
    std::vector<std::string> parameters;
    std::vector<std::string> columns;
};

const std::vector<ScenarioInfo>& scenario_catalog();
const ScenarioInfo& scenario_info(const std::string& name);

/// Pinned defaults for a scenario.
ScenarioConfig default_config(const std::string& scenario);

EstimateReport run_scenario(const ScenarioConfig& config);

} // namespace propreg
