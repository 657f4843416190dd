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

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace propreg {

using cplx  = std::complex<double>;
using Field = Eigen::VectorXcd;
using Real  = Eigen::VectorXd;

/// Coordinates of one lattice point; unused trailing axes are zero.
using Point = std::array<double, 3>;

enum class Representation { position, momentum };

/** Periodic box [-L, L)^n sampled with N points per axis.
 *
 *  Points are stored row-major with the last axis fastest. The momentum
 *  lattice is kept in FFT order, p_k = 2 pi k / (2L) for signed k.
 */
class Grid {
public:
    Grid(int dim, double half_width, int points_per_axis);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return L_; }
    int points_per_axis() const noexcept { return N_; }
    std::size_t size() const noexcept { return size_; }

    double dx() const noexcept { return dx_; }
    double dp() const noexcept { return dp_; }
    double p_max() const noexcept { return M_PI / dx_; }
    double x_max() const noexcept { return L_; }

    /// Volume elements dx^n and dp^n.
    double cell_volume() const noexcept { return cell_x_; }
    double momentum_cell_volume() const noexcept { return cell_p_; }

    const std::vector<double>& x_axis() const noexcept { return x_; }
    const std::vector<double>& p_axis() const noexcept { return p_; }

    /// |x|^2 and |p|^2 at every lattice point.
    const Real& x_squared() const noexcept { return x2_; }
    const Real& p_squared() const noexcept { return p2_; }

    /// Per-axis coordinate fields (size() entries each).
    const Real& x_component(int axis) const { return xc_.at(axis); }
    const Real& p_component(int axis) const { return pc_.at(axis); }

    Point position(std::size_t index) const noexcept;
    Point momentum(std::size_t index) const noexcept;

    /// Sample f(x) or f(p) on the lattice.
    Real sample_position(const std::function<double(const Point&)>& f) const;
    Real sample_momentum(const std::function<double(const Point&)>& f) const;

    /// True when the index lies on the outermost layer of the box.
    bool on_outer_shell(std::size_t index) const noexcept;

    bool operator==(const Grid& other) const noexcept {
        return dim_ == other.dim_ && N_ == other.N_ && L_ == other.L_;
    }

private:
    int dim_;
    double L_;
    int N_;
    std::size_t size_;
    double dx_, dp_, cell_x_, cell_p_;
    std::vector<double> x_, p_;
    Real x2_, p2_;
    std::vector<Real> xc_, pc_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validating factory: N a power of two >= 16, L > 0, dim in {1,2,3}.
GridPtr make_grid(int dim, double half_width, int points_per_axis);

struct WaveFunction {
    GridPtr grid;
    Field values;
    Representation representation = Representation::position;
    double time = 0.0;

    WaveFunction() = default;
    WaveFunction(GridPtr g, Field v,
                 Representation rep = Representation::position, double t = 0.0);

    /// Zero field on g.
    static WaveFunction zeros(GridPtr g, Representation rep = Representation::position);
};

/// Unitary transform between position and momentum samples. The momentum
/// samples approximate the continuous transform (2 pi)^{-n/2} int e^{-ipx} psi.
WaveFunction transform(const WaveFunction& psi, Representation target);

/// Inner product <a, b> in the common representation of a and b.
cplx inner(const WaveFunction& a, const WaveFunction& b);

/// L^2 norm using dx^n or dp^n as appropriate.
double norm(const WaveFunction& psi);

/// ||(1+|p|^2)^{s/2} psi_hat||.
double sobolev_norm(const WaveFunction& psi, double s);

/// ||<x>^{-a} |p|^k psi|| for k in {0, 1, 2}.
double weighted_norm(const WaveFunction& psi, double a, int k);

/// Pointwise multiplication in the requested representation. The result is
/// returned in the representation of the input.
WaveFunction apply_multiplier(const WaveFunction& psi,
                              const std::function<double(const Point&)>& f,
                              Representation rep);
WaveFunction apply_multiplier(const WaveFunction& psi, const Real& f, Representation rep);
WaveFunction apply_multiplier(const WaveFunction& psi, const Field& f, Representation rep);

/// Fraction of the mass of psi at |x| > fraction * L.
double boundary_mass(const WaveFunction& psi, double fraction = 0.5);

/// Expectation <psi, |p|^2 psi> / ||psi||^2.
double kinetic_expectation(const WaveFunction& psi);

/// Normalized Gaussian packet (pi w^2)^{-n/4} exp(-|x-c|^2/(2w^2) + i k.x).
WaveFunction gaussian_packet(GridPtr g, const Point& center, const Point& k, double width);

} // namespace propreg
