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

#include "propreg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "propreg/fft.hpp"

namespace propreg {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// (-1)^k for the momentum index, applied once per axis.
double parity_sign(const Grid& g, std::size_t index) {
    const auto n = static_cast<std::size_t>(g.points_per_axis());
    std::size_t parity = 0;
    for(int a = 0; a < g.dim(); ++a) {
        parity += index % n;
        index /= n;
    }
    return (parity & 1u) ? -1.0 : 1.0;
}

} // namespace

Grid::Grid(int dim, double half_width, int points_per_axis)
  : dim_(dim), L_(half_width), N_(points_per_axis) {
    if(dim < 1 || dim > 3)
        throw std::invalid_argument("grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
    if(!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid: half_width must be positive");
    if(points_per_axis < 16 || !is_power_of_two(points_per_axis))
        throw std::invalid_argument("grid: points_per_axis must be a power of two >= 16, got " +
                                    std::to_string(points_per_axis));

    dx_ = 2.0 * L_ / N_;
    dp_ = M_PI / L_;
    cell_x_ = std::pow(dx_, dim_);
    cell_p_ = std::pow(dp_, dim_);

    x_.resize(N_);
    p_.resize(N_);
    for(int j = 0; j < N_; ++j) {
        x_[j] = -L_ + j * dx_;
        const int k = (j < N_ / 2) ? j : j - N_;
        p_[j] = k * dp_;
    }

    size_ = 1;
    for(int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(N_);

    x2_ = Real::Zero(size_);
    p2_ = Real::Zero(size_);
    xc_.assign(dim_, Real::Zero(size_));
    pc_.assign(dim_, Real::Zero(size_));
    for(std::size_t i = 0; i < size_; ++i) {
        std::size_t rest = i;
        for(int a = dim_ - 1; a >= 0; --a) {
            const auto j = rest % N_;
            rest /= N_;
            xc_[a][i] = x_[j];
            pc_[a][i] = p_[j];
        }
        for(int a = 0; a < dim_; ++a) {
            x2_[i] += xc_[a][i] * xc_[a][i];
            p2_[i] += pc_[a][i] * pc_[a][i];
        }
    }
}

Point Grid::position(std::size_t index) const noexcept {
    Point out{0.0, 0.0, 0.0};
    for(int a = 0; a < dim_; ++a) out[a] = xc_[a][index];
    return out;
}

Point Grid::momentum(std::size_t index) const noexcept {
    Point out{0.0, 0.0, 0.0};
    for(int a = 0; a < dim_; ++a) out[a] = pc_[a][index];
    return out;
}

Real Grid::sample_position(const std::function<double(const Point&)>& f) const {
    Real out(size_);
    for(std::size_t i = 0; i < size_; ++i) out[i] = f(position(i));
    return out;
}

Real Grid::sample_momentum(const std::function<double(const Point&)>& f) const {
    Real out(size_);
    for(std::size_t i = 0; i < size_; ++i) out[i] = f(momentum(i));
    return out;
}

bool Grid::on_outer_shell(std::size_t index) const noexcept {
    for(int a = 0; a < dim_; ++a) {
        const auto j = index % N_;
        index /= N_;
        if(j == 0 || j == static_cast<std::size_t>(N_ - 1)) return true;
    }
    return false;
}

GridPtr make_grid(int dim, double half_width, int points_per_axis) {
    return std::make_shared<const Grid>(dim, half_width, points_per_axis);
}

WaveFunction::WaveFunction(GridPtr g, Field v, Representation rep, double t)
  : grid(std::move(g)), values(std::move(v)), representation(rep), time(t) {
    if(!grid) throw std::invalid_argument("wavefunction: null grid");
    if(static_cast<std::size_t>(values.size()) != grid->size())
        throw std::invalid_argument("wavefunction: value count does not match grid");
}

WaveFunction WaveFunction::zeros(GridPtr g, Representation rep) {
    Field v = Field::Zero(g->size());
    return WaveFunction(std::move(g), std::move(v), rep, 0.0);
}

WaveFunction transform(const WaveFunction& psi, Representation target) {
    if(psi.representation == target) return psi;
    const Grid& g = *psi.grid;
    WaveFunction out = psi;
    out.representation = target;
    cplx* data = out.values.data();
    const auto n = g.size();
    if(target == Representation::momentum) {
        fft::forward(g, data);
        const double scale = std::pow(g.dx() / std::sqrt(2.0 * M_PI), g.dim());
        for(std::size_t i = 0; i < n; ++i) data[i] *= scale * parity_sign(g, i);
    } else {
        const double scale = std::pow(g.dp() / std::sqrt(2.0 * M_PI), g.dim());
        for(std::size_t i = 0; i < n; ++i) data[i] *= scale * parity_sign(g, i);
        fft::backward(g, data);
    }
    return out;
}

cplx inner(const WaveFunction& a, const WaveFunction& b) {
    if(a.representation != b.representation)
        throw std::invalid_argument("inner: representations differ");
    if(!(*a.grid == *b.grid)) throw std::invalid_argument("inner: grids differ");
    const double w = a.representation == Representation::position
                         ? a.grid->cell_volume()
                         : a.grid->momentum_cell_volume();
    return a.values.dot(b.values) * w;
}

double norm(const WaveFunction& psi) {
    const double w = psi.representation == Representation::position
                         ? psi.grid->cell_volume()
                         : psi.grid->momentum_cell_volume();
    return std::sqrt(psi.values.squaredNorm() * w);
}

double sobolev_norm(const WaveFunction& psi, double s) {
    if(s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    const auto hat = transform(psi, Representation::momentum);
    const auto& p2 = psi.grid->p_squared();
    double acc = 0.0;
    for(Eigen::Index i = 0; i < hat.values.size(); ++i)
        acc += std::pow(1.0 + p2[i], s) * std::norm(hat.values[i]);
    return std::sqrt(acc * psi.grid->momentum_cell_volume());
}

double weighted_norm(const WaveFunction& psi, double a, int k) {
    if(a < 0.0) throw std::invalid_argument("weighted_norm: weight power must be >= 0");
    if(k < 0 || k > 2) throw std::invalid_argument("weighted_norm: order must be 0, 1 or 2");
    const Grid& g = *psi.grid;
    WaveFunction phi = transform(psi, Representation::position);
    if(k > 0) {
        Real mult = k == 2 ? g.p_squared() : g.p_squared().cwiseSqrt();
        phi = apply_multiplier(phi, mult, Representation::momentum);
    }
    if(a > 0.0) {
        Real w = (1.0 + g.x_squared().array()).pow(-0.5 * a);
        phi.values.array() *= w.array();
    }
    return norm(phi);
}

WaveFunction apply_multiplier(const WaveFunction& psi,
                              const std::function<double(const Point&)>& f,
                              Representation rep) {
    const Grid& g = *psi.grid;
    Real m = rep == Representation::position ? g.sample_position(f) : g.sample_momentum(f);
    return apply_multiplier(psi, m, rep);
}

WaveFunction apply_multiplier(const WaveFunction& psi, const Real& f, Representation rep) {
    if(static_cast<std::size_t>(f.size()) != psi.grid->size())
        throw std::invalid_argument("apply_multiplier: size mismatch");
    WaveFunction out = transform(psi, rep);
    out.values.array() *= f.array();
    return transform(out, psi.representation);
}

WaveFunction apply_multiplier(const WaveFunction& psi, const Field& f, Representation rep) {
    if(static_cast<std::size_t>(f.size()) != psi.grid->size())
        throw std::invalid_argument("apply_multiplier: size mismatch");
    WaveFunction out = transform(psi, rep);
    out.values.array() *= f.array();
    return transform(out, psi.representation);
}

double boundary_mass(const WaveFunction& psi, double fraction) {
    const auto pos = transform(psi, Representation::position);
    const double r2 = std::pow(fraction * psi.grid->half_width(), 2);
    const auto& x2 = psi.grid->x_squared();
    double outside = 0.0, total = 0.0;
    for(Eigen::Index i = 0; i < pos.values.size(); ++i) {
        const double m = std::norm(pos.values[i]);
        total += m;
        if(x2[i] > r2) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

double kinetic_expectation(const WaveFunction& psi) {
    const auto hat = transform(psi, Representation::momentum);
    const double total = hat.values.squaredNorm();
    if(total == 0.0) return 0.0;
    return (hat.values.cwiseAbs2().array() * psi.grid->p_squared().array()).sum() / total;
}

WaveFunction gaussian_packet(GridPtr g, const Point& center, const Point& k, double width) {
    if(!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
    const int n = g->dim();
    const double amp = std::pow(M_PI * width * width, -0.25 * n);
    Field v(g->size());
    for(std::size_t i = 0; i < g->size(); ++i) {
        const auto x = g->position(i);
        double r2 = 0.0, phase = 0.0;
        for(int a = 0; a < n; ++a) {
            r2 += (x[a] - center[a]) * (x[a] - center[a]);
            phase += k[a] * x[a];
        }
        v[i] = amp * std::exp(-r2 / (2.0 * width * width)) * std::polar(1.0, phase);
    }
    return WaveFunction(std::move(g), std::move(v));
}

} // namespace propreg
