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
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "propreg/grid.hpp"
#include "propreg/potentials.hpp"

namespace propreg {

/** tanh profiles in the dilation variable a.
 *
 *  step_up(M, R)   = (1 + tanh((a - M)/R)) / 2
 *  step_down(M, R) = (1 - tanh((a + M)/R)) / 2
 *  window(M, R)    = (tanh((a + M)/R) - tanh((a - M)/R)) / 2
 *
 *  so step_up + step_down + window = 1 for the same (M, R).
 */
struct CutoffShape {
    enum class Kind { step_up, step_down, window };
    Kind kind = Kind::step_down;
    double M = 10.0;
    double R = 5.0;

    static CutoffShape step_up(double M, double R) { return {Kind::step_up, M, R}; }
    static CutoffShape step_down(double M, double R) { return {Kind::step_down, M, R}; }
    static CutoffShape window(double M, double R) { return {Kind::window, M, R}; }

    double operator()(double a) const noexcept;
    double derivative(double a) const noexcept;
};

struct DenseEigen {};

struct Chebyshev {
    int order = 0;
    double spectral_bound = 0.0;
};

struct GroupQuadrature {
    double theta_max = 1.0;
    int nodes = 96;
    int interpolation_order = 0;
    /// Allowed quadrature residual before the evaluation is rejected.
    double tolerance = 1e-6;
};

using DilationMethod = std::variant<DenseEigen, Chebyshev, GroupQuadrature>;
using ScalarFunction = std::function<double(double)>;

/// Raised when a dilated field would leave the box in x or in p.
struct SupportEscape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when group quadrature cannot meet its tolerance.
struct QuadratureError : std::runtime_error {
    double residual;
    QuadratureError(const std::string& what, double r) : std::runtime_error(what), residual(r) {}
};

/// x_max * p_max + n/2, an upper bound for the discrete generator.
double lattice_bound(const Grid& g);

/// Chebyshev order for a profile with tanh width R on the lattice bound.
Chebyshev chebyshev_for(const Grid& g, double R, double tolerance = 1e-10);

/// Truncation and node count for a tanh profile of width R.
GroupQuadrature group_quadrature_for(double R, double tolerance = 1e-7);

/// A = (X.P + P.X)/2 with spectral P; exactly symmetric on the lattice.
WaveFunction apply_A(const WaveFunction& psi);
/// Same on a raw position-space field, overwriting it.
void apply_A_in_place(const Grid& g, Field& v);

/// U_theta psi = e^{-n theta/2} psi(e^{-theta} x). Order 0 uses band-limited
/// trigonometric interpolation, order k > 0 local Lagrange of that order.
WaveFunction apply_dilation(const WaveFunction& psi, double theta, int interpolation_order = 0,
                            double escape_tolerance = 1e-10);

WaveFunction function_of_A(const WaveFunction& psi, const CutoffShape& f, const DilationMethod& method);
WaveFunction function_of_A(const WaveFunction& psi, const ScalarFunction& f, const DilationMethod& method);

struct FunctionOfAResult {
    WaveFunction value;
    double residual = 0.0;
};
FunctionOfAResult function_of_A_with_residual(const WaveFunction& psi, const CutoffShape& f,
                                              const GroupQuadrature& method);

/// Several functions of A applied to one state, sharing the expensive part.
std::vector<WaveFunction> function_of_A_many(const WaveFunction& psi,
                                             const std::vector<ScalarFunction>& fs,
                                             const DilationMethod& method);

/// Dense for small 1D lattices, Chebyshev otherwise.
DilationMethod default_method(const Grid& g, double R);

struct ProjectionTriple {
    WaveFunction plus, zero, minus;
    double residual = 0.0;
};
ProjectionTriple projection_triple(const WaveFunction& psi, double M, double R,
                                   const DilationMethod& method);

/// Radial profile in r = |x| / scale.
struct PhaseSpaceCutoff {
    enum class Direction { ball, shell, complement };
    Direction direction = Direction::ball;
    double scale = 1.0;
    double softness = 0.25;

    double profile(double r) const noexcept;
};

/// e^{-iH0 t} F(x) e^{iH0 t}, i.e. F evaluated at x - 2pt.
WaveFunction free_frame_cutoff(const WaveFunction& psi, double t, const PhaseSpaceCutoff& cutoff);
WaveFunction free_frame_cutoff(const WaveFunction& psi, double t,
                               const std::function<double(const Point&)>& shape);

/// Smooth momentum shell (tanh(|p| - lo)/w - tanh(|p| - hi)/w) / 2.
Real momentum_shell(const Grid& g, double lo, double hi, double softness);
/// Shell at |p| = K with edges at 0.75K and 1.25K and softness K/16.
Real momentum_shell(const Grid& g, double K);

// Dense 1D machinery.

struct DenseA {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

/// Cached eigendecomposition of the dense generator (1D, N <= 2048).
std::shared_ptr<const DenseA> dense_A(const Grid& g);
Eigen::MatrixXcd dense_function(const DenseA& a, const ScalarFunction& f);
Eigen::MatrixXcd dense_momentum_multiplier(const Grid& g, const std::function<cplx(double)>& f);
/// Orthonormal basis of Gaussian packets resolved on the lattice.
Eigen::MatrixXcd coherent_basis(const Grid& g, double x_extent, double p_extent, double width = 1.0);
/// ||Q^* M Q||_2.
double restricted_norm(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& q);
double operator_norm(const Eigen::MatrixXcd& m);

/// Multiplier known at complex arguments, for B_theta(x) = B(e^{-theta} x).
struct AnalyticMultiplier {
    std::string name;
    std::function<cplx(cplx)> f;

    static AnalyticMultiplier japanese(double power);
    static AnalyticMultiplier gaussian();
    static AnalyticMultiplier constant(double c);
};

struct CommutatorReport {
    /// Relative discrepancy on the resolved subspace.
    double discrepancy = 0.0;
    /// Same ratio for the full lattice matrices.
    double full_discrepancy = 0.0;
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
    int subspace_dim = 0;
};

/// Compares i[P^-(A), B] with (i/4) sech((A+M)/R) (B_{-i/R} - B_{i/R}) sech((A+M)/R).
CommutatorReport commutator_identity_check(const AnalyticMultiplier& b, double M, double R,
                                           const Grid& g);

struct ExpansionReport {
    double residual = 0.0;
    double rescaled = 0.0;
    double commutator_norm = 0.0;
};

/// || [V, F(A)] - (F'(A) [V, A] + [V, A] F'(A)) / 2 || and its R^2 multiple.
ExpansionReport commutator_expansion_check(const PotentialSpec& spec, const CutoffShape& shape,
                                           const Grid& g);

/// ||<x>^{-sigma} Pi e^{-iH0 tau} <x>^{-2} e^{iH0 tau} Pi|| for each tau, Pi the
/// momentum shell on [lo, hi].
std::vector<double> ld1_operator_check(double sigma, const std::vector<double>& taus, const Grid& g,
                                       double lo = 1.0, double hi = 2.0, double softness = 0.1);

/// ||P^-(A) e^{-iH0 tau} chi f|| for each tau.
std::vector<double> ld2_decay_probe(const WaveFunction& f, double K, const std::vector<double>& taus,
                                    double M, double R, const DilationMethod& method);

} // namespace propreg
