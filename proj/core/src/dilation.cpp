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
#include <cstdio>
#include <string>

#include "propreg/fft.hpp"
#include "propreg/operator_calculus.hpp"

namespace propreg {
namespace {

// Periodic band-limited kernel with the Nyquist mode split as a cosine.
double dirichlet(double s, int n) {
    const double half = 0.5 * s;
    const double t = std::tan(half);
    if(std::abs(t) < 1e-14) return 1.0;
    return std::sin(n * half) / (n * t);
}

// Row i gives the weights producing psi(y_i) from the lattice samples.
Eigen::MatrixXd interpolation_matrix(const Grid& g, double scale, int order) {
    const int n = g.points_per_axis();
    const double L = g.half_width();
    const double dx = g.dx();
    const auto& x = g.x_axis();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for(int i = 0; i < n; ++i) {
        const double y = scale * x[i];
        if(y < -L || y >= L) continue; // outside the box: zero
        if(order == 0) {
            for(int j = 0; j < n; ++j) W(i, j) = dirichlet(M_PI * (y - x[j]) / L, n);
        } else {
            // Lagrange on order + 1 consecutive nodes around y, indices taken periodically.
            const double u = (y + L) / dx;
            const int first = static_cast<int>(std::floor(u)) - order / 2;
            for(int a = 0; a <= order; ++a) {
                double w = 1.0;
                for(int b = 0; b <= order; ++b)
                    if(b != a) w *= (u - (first + b)) / static_cast<double>(a - b);
                const int j = ((first + a) % n + n) % n;
                W(i, j) += w;
            }
        }
    }
    return W;
}

// Apply a 1D operator along every axis of a row-major field.
Field apply_along_axes(const Grid& g, const Eigen::MatrixXd& W, const Field& v) {
    const int n = g.points_per_axis();
    const Eigen::MatrixXcd Wc = W.cast<cplx>();
    Field cur = v;
    Field line(n), out(n);
    for(int axis = 0; axis < g.dim(); ++axis) {
        std::size_t stride = 1;
        for(int a = g.dim() - 1; a > axis; --a) stride *= n;
        const std::size_t block = stride * n;
        Field next(cur.size());
        for(std::size_t base = 0; base < g.size(); base += block) {
            for(std::size_t off = 0; off < stride; ++off) {
                for(int j = 0; j < n; ++j) line[j] = cur[base + off + j * stride];
                out.noalias() = Wc * line;
                for(int j = 0; j < n; ++j) next[base + off + j * stride] = out[j];
            }
        }
        cur.swap(next);
    }
    return cur;
}

double mass_outside_box(const WaveFunction& psi, double limit, bool momentum) {
    const Grid& g = *psi.grid;
    const auto w = transform(psi, momentum ? Representation::momentum : Representation::position);
    double outside = 0.0, total = 0.0;
    for(std::size_t i = 0; i < g.size(); ++i) {
        const auto c = momentum ? g.momentum(i) : g.position(i);
        double m = 0.0;
        for(int a = 0; a < g.dim(); ++a) m = std::max(m, std::abs(c[a]));
        const double mass = std::norm(w.values[i]);
        total += mass;
        if(m > limit) outside += mass;
    }
    return total > 0.0 ? outside / total : 0.0;
}

} // namespace

WaveFunction apply_A(const WaveFunction& psi) {
    const Grid& g = *psi.grid;
    WaveFunction out = transform(psi, Representation::position);
    apply_A_in_place(g, out.values);
    return transform(out, psi.representation);
}

void apply_A_in_place(const Grid& g, Field& v) {
    const double half_inv = 0.5 / static_cast<double>(g.size());
    thread_local Field hat, s, t;
    hat = v;
    fft::forward(g, hat.data());
    Field acc = Field::Zero(g.size());
    Field sum_hat = Field::Zero(g.size());
    for(int a = 0; a < g.dim(); ++a) {
        const auto& pa = g.p_component(a);
        const auto& xa = g.x_component(a);
        // x_a (P_a psi)
        t = hat.array() * pa.array();
        fft::backward(g, t.data());
        acc.array() += xa.array() * t.array();
        // P_a (x_a psi)
        s = v.array() * xa.array();
        fft::forward(g, s.data());
        sum_hat.array() += pa.array() * s.array();
    }
    fft::backward(g, sum_hat.data());
    v = (acc + sum_hat) * half_inv;
}

WaveFunction apply_dilation(const WaveFunction& psi, double theta, int interpolation_order,
                            double escape_tolerance) {
    if(theta == 0.0) return psi;
    if(interpolation_order < 0) throw std::invalid_argument("apply_dilation: negative interpolation order");
    const Grid& g = *psi.grid;
    if(theta > 0.0) {
        const double m = mass_outside_box(psi, g.half_width() * std::exp(-theta), false);
        if(m > escape_tolerance) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "apply_dilation: position support escapes the box (mass %.3g beyond L e^{-theta})", m);
            throw SupportEscape(buf);
        }
    } else {
        const double m = mass_outside_box(psi, g.p_max() * std::exp(theta), true);
        if(m > escape_tolerance) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "apply_dilation: momentum support escapes the lattice (mass %.3g beyond p_max e^{theta})", m);
            throw SupportEscape(buf);
        }
    }
    const auto pos = transform(psi, Representation::position);
    const Eigen::MatrixXd W = interpolation_matrix(g, std::exp(-theta), interpolation_order);
    WaveFunction out = pos;
    out.values = apply_along_axes(g, W, pos.values) * std::exp(-0.5 * g.dim() * theta);
    return transform(out, psi.representation);
}

} // namespace propreg
