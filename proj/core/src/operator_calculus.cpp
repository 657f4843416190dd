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

#include "propreg/operator_calculus.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "propreg/fft.hpp"
#include "propreg/propagator.hpp"

namespace propreg {
namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

constexpr std::array<double, 4> gl_nodes{0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> gl_weights{0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

double sech(double u) { return 1.0 / std::cosh(u); }

std::vector<double> chebyshev_coefficients(const ScalarFunction& f, int order, double bound) {
    const int n = order + 1;
    std::vector<double> samples(n);
    for(int j = 0; j < n; ++j) samples[j] = f(bound * std::cos(M_PI * (j + 0.5) / n));
    auto c = fft::dct2(samples);
    for(auto& v : c) v /= n;
    c[0] *= 0.5;
    return c;
}

void check_chebyshev(const Grid& g, const Chebyshev& ch) {
    if(ch.order < 1) throw std::invalid_argument("chebyshev: order must be >= 1");
    const double need = lattice_bound(g);
    if(ch.spectral_bound < need)
        throw std::invalid_argument("chebyshev: spectral bound " + fmt_g(ch.spectral_bound) +
                                    " below the lattice bound " + fmt_g(need));
}

std::vector<Field> chebyshev_many(const WaveFunction& pos, const std::vector<ScalarFunction>& fs,
                                  const Chebyshev& ch) {
    const double B = ch.spectral_bound;
    std::vector<std::vector<double>> coeffs;
    for(const auto& f : fs) coeffs.push_back(chebyshev_coefficients(f, ch.order, B));
    std::vector<Field> acc(fs.size());
    const Grid& g = *pos.grid;
    Field t0 = pos.values;
    Field t1 = t0;
    apply_A_in_place(g, t1);
    t1 /= B;
    for(std::size_t k = 0; k < fs.size(); ++k) acc[k] = coeffs[k][0] * t0 + coeffs[k][1] * t1;
    Field t2;
    for(int j = 2; j <= ch.order; ++j) {
        t2 = t1;
        apply_A_in_place(g, t2);
        t2 = (2.0 / B) * t2 - t0;
        for(std::size_t k = 0; k < fs.size(); ++k) acc[k] += coeffs[k][j] * t2;
        t0.swap(t1);
        t1.swap(t2);
    }
    return acc;
}

std::vector<Field> dense_many(const WaveFunction& pos, const std::vector<ScalarFunction>& fs) {
    const auto a = dense_A(*pos.grid);
    const Eigen::VectorXcd w = a->eigenvectors.adjoint() * pos.values;
    std::vector<Field> out;
    for(const auto& f : fs) {
        Eigen::VectorXcd s = w;
        for(Eigen::Index i = 0; i < s.size(); ++i) s[i] *= f(a->eigenvalues[i]);
        out.push_back(a->eigenvectors * s);
    }
    return out;
}

// tanh((A - c)/R) psi for every shift c, with panel count `panels` on [0, K].
std::vector<Field> tanh_quadrature(const WaveFunction& pos, double R, const std::vector<double>& shifts,
                                   double K, int panels, int order) {
    std::vector<Field> acc(shifts.size(), Field::Zero(pos.values.size()));
    const double h = K / panels;
    for(int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for(std::size_t q = 0; q < 2 * gl_nodes.size(); ++q) {
            const double xi = (q < gl_nodes.size()) ? -gl_nodes[q] : gl_nodes[q - gl_nodes.size()];
            const double w = gl_weights[q % gl_nodes.size()] * 0.5 * h;
            const double k = mid + 0.5 * h * xi;
            const Field minus = apply_dilation(pos, -k / R, order).values; // e^{ikA/R}
            const Field plus  = apply_dilation(pos, k / R, order).values;  // e^{-ikA/R}
            const cplx denom = cplx(0.0, 2.0) * std::sinh(0.5 * M_PI * k);
            for(std::size_t s = 0; s < shifts.size(); ++s) {
                const cplx e = std::polar(1.0, -k * shifts[s] / R);
                acc[s] += (w / denom) * (e * minus - std::conj(e) * plus);
            }
        }
    }
    return acc;
}

struct TanhResult {
    std::vector<Field> values;
    double residual = 0.0;
};

TanhResult tanh_group(const WaveFunction& pos, double R, const std::vector<double>& shifts,
                      const GroupQuadrature& gq) {
    if(gq.theta_max <= 0.0) throw std::invalid_argument("group_quadrature: theta_max must be positive");
    const double K = gq.theta_max * R;
    int panels = std::max(2, gq.nodes / 8);
    if(panels % 2) ++panels;
    auto fine   = tanh_quadrature(pos, R, shifts, K, panels, gq.interpolation_order);
    auto coarse = tanh_quadrature(pos, R, shifts, K, panels / 2, gq.interpolation_order);
    const double scale = std::max(pos.values.norm(), 1e-300);
    double diff = 0.0;
    for(std::size_t s = 0; s < shifts.size(); ++s) diff = std::max(diff, (fine[s] - coarse[s]).norm() / scale);
    const double tail = -(2.0 / M_PI) * std::log(std::tanh(0.25 * M_PI * K));
    return {std::move(fine), diff + tail};
}

} // namespace

double CutoffShape::operator()(double a) const noexcept {
    switch(kind) {
    case Kind::step_up: return 0.5 * (1.0 + std::tanh((a - M) / R));
    case Kind::step_down: return 0.5 * (1.0 - std::tanh((a + M) / R));
    case Kind::window: return 0.5 * (std::tanh((a + M) / R) - std::tanh((a - M) / R));
    }
    return 0.0;
}

double CutoffShape::derivative(double a) const noexcept {
    const auto s2 = [this](double u) { return sech(u / R) * sech(u / R) / R; };
    switch(kind) {
    case Kind::step_up: return 0.5 * s2(a - M);
    case Kind::step_down: return -0.5 * s2(a + M);
    case Kind::window: return 0.5 * (s2(a + M) - s2(a - M));
    }
    return 0.0;
}

double lattice_bound(const Grid& g) {
    return g.dim() * g.x_max() * g.p_max() + 0.5 * g.dim();
}

Chebyshev chebyshev_for(const Grid& g, double R, double tolerance) {
    const double B = lattice_bound(g);
    const double log_rho = std::asinh(0.5 * M_PI * R / B);
    const int order = static_cast<int>(std::ceil(std::log(2.0 / tolerance) / log_rho)) + 8;
    return Chebyshev{order, B};
}

GroupQuadrature group_quadrature_for(double R, double tolerance) {
    // int_K^inf csch(pi k / 2) dk = -(2/pi) ln tanh(pi K / 4) ~ (4/pi) e^{-pi K / 2}
    const double K = -2.0 / M_PI * std::log(0.25 * M_PI * tolerance);
    return GroupQuadrature{K / R, 96, 0, 1e-6};
}

DilationMethod default_method(const Grid& g, double R) {
    if(g.dim() == 1 && g.points_per_axis() <= 2048) return DenseEigen{};
    return chebyshev_for(g, R);
}

std::vector<WaveFunction> function_of_A_many(const WaveFunction& psi,
                                             const std::vector<ScalarFunction>& fs,
                                             const DilationMethod& method) {
    const auto pos = transform(psi, Representation::position);
    std::vector<Field> raw;
    if(std::holds_alternative<DenseEigen>(method)) {
        raw = dense_many(pos, fs);
    } else if(const auto* ch = std::get_if<Chebyshev>(&method)) {
        check_chebyshev(*psi.grid, *ch);
        raw = chebyshev_many(pos, fs, *ch);
    } else {
        throw std::invalid_argument("function_of_A: group quadrature supports tanh cutoff shapes only");
    }
    std::vector<WaveFunction> out;
    for(auto& r : raw) out.push_back(transform(WaveFunction(psi.grid, std::move(r), Representation::position, psi.time),
                                               psi.representation));
    return out;
}

WaveFunction function_of_A(const WaveFunction& psi, const ScalarFunction& f, const DilationMethod& method) {
    return function_of_A_many(psi, {f}, method).front();
}

FunctionOfAResult function_of_A_with_residual(const WaveFunction& psi, const CutoffShape& f,
                                              const GroupQuadrature& method) {
    const auto pos = transform(psi, Representation::position);
    Field out;
    double residual = 0.0;
    switch(f.kind) {
    case CutoffShape::Kind::step_up: {
        auto r = tanh_group(pos, f.R, {f.M}, method);
        out = 0.5 * (pos.values + r.values[0]);
        residual = 0.5 * r.residual;
        break;
    }
    case CutoffShape::Kind::step_down: {
        auto r = tanh_group(pos, f.R, {-f.M}, method);
        out = 0.5 * (pos.values - r.values[0]);
        residual = 0.5 * r.residual;
        break;
    }
    case CutoffShape::Kind::window: {
        auto r = tanh_group(pos, f.R, {-f.M, f.M}, method);
        out = 0.5 * (r.values[0] - r.values[1]);
        residual = r.residual;
        break;
    }
    }
    WaveFunction w(psi.grid, std::move(out), Representation::position, psi.time);
    return {transform(w, psi.representation), residual};
}

[[noreturn]] static void throw_quadrature(double residual, double tolerance) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "group_quadrature: residual %.3g above tolerance %.3g", residual, tolerance);
    throw QuadratureError(buf, residual);
}

WaveFunction function_of_A(const WaveFunction& psi, const CutoffShape& f, const DilationMethod& method) {
    if(const auto* gq = std::get_if<GroupQuadrature>(&method)) {
        auto r = function_of_A_with_residual(psi, f, *gq);
        if(r.residual > gq->tolerance)
            throw_quadrature(r.residual, gq->tolerance);
        return r.value;
    }
    return function_of_A(psi, ScalarFunction([f](double a) { return f(a); }), method);
}

ProjectionTriple projection_triple(const WaveFunction& psi, double M, double R, const DilationMethod& method) {
    ProjectionTriple t;
    if(const auto* gq = std::get_if<GroupQuadrature>(&method)) {
        const auto pos = transform(psi, Representation::position);
        auto r = tanh_group(pos, R, {-M, M}, *gq);
        if(r.residual > gq->tolerance)
            throw_quadrature(r.residual, gq->tolerance);
        auto wrap = [&](Field v) {
            return transform(WaveFunction(psi.grid, std::move(v), Representation::position, psi.time),
                             psi.representation);
        };
        t.plus  = wrap(0.5 * (pos.values + r.values[1]));
        t.minus = wrap(0.5 * (pos.values - r.values[0]));
        t.zero  = wrap(0.5 * (r.values[0] - r.values[1]));
    } else {
        const auto up = CutoffShape::step_up(M, R), down = CutoffShape::step_down(M, R),
                   win = CutoffShape::window(M, R);
        auto parts = function_of_A_many(
            psi, {[up](double a) { return up(a); }, [win](double a) { return win(a); },
                  [down](double a) { return down(a); }},
            method);
        t.plus  = std::move(parts[0]);
        t.zero  = std::move(parts[1]);
        t.minus = std::move(parts[2]);
    }
    const double n0 = norm(psi);
    Field sum = t.plus.values + t.zero.values + t.minus.values - psi.values;
    t.residual = norm(WaveFunction(psi.grid, sum, psi.representation)) / (n0 > 0.0 ? n0 : 1.0);
    return t;
}

double PhaseSpaceCutoff::profile(double r) const noexcept {
    const double ball = 0.5 * (1.0 - std::tanh((r - 1.0) / softness));
    switch(direction) {
    case Direction::ball: return ball;
    case Direction::complement: return 1.0 - ball;
    case Direction::shell: return 0.5 * (std::tanh((r - 1.0) / softness) - std::tanh((r - 2.0) / softness));
    }
    return 0.0;
}

WaveFunction free_frame_cutoff(const WaveFunction& psi, double t,
                               const std::function<double(const Point&)>& shape) {
    auto back = free_evolve(psi, -t);
    back = apply_multiplier(back, shape, Representation::position);
    return free_evolve(back, t);
}

WaveFunction free_frame_cutoff(const WaveFunction& psi, double t, const PhaseSpaceCutoff& cutoff) {
    if(!(cutoff.scale > 0.0)) throw std::invalid_argument("free_frame_cutoff: scale must be positive");
    const Grid& g = *psi.grid;
    Real m(g.size());
    for(std::size_t i = 0; i < g.size(); ++i) m[i] = cutoff.profile(std::sqrt(g.x_squared()[i]) / cutoff.scale);
    auto back = free_evolve(psi, -t);
    back = apply_multiplier(back, m, Representation::position);
    return free_evolve(back, t);
}

Real momentum_shell(const Grid& g, double lo, double hi, double softness) {
    Real out(g.size());
    for(std::size_t i = 0; i < g.size(); ++i) {
        const double p = std::sqrt(g.p_squared()[i]);
        out[i] = 0.5 * (std::tanh((p - lo) / softness) - std::tanh((p - hi) / softness));
    }
    return out;
}

Real momentum_shell(const Grid& g, double K) {
    return momentum_shell(g, 0.75 * K, 1.25 * K, K / 16.0);
}

AnalyticMultiplier AnalyticMultiplier::japanese(double power) {
    char name[32];
    std::snprintf(name, sizeof name, "japanese^-%g", power);
    return {name,
            [power](cplx z) { return std::pow(1.0 + z * z, -0.5 * power); }};
}

AnalyticMultiplier AnalyticMultiplier::gaussian() {
    return {"gaussian", [](cplx z) { return std::exp(-0.5 * z * z); }};
}

AnalyticMultiplier AnalyticMultiplier::constant(double c) {
    return {"constant", [c](cplx) { return cplx(c, 0.0); }};
}

CommutatorReport commutator_identity_check(const AnalyticMultiplier& b, double M, double R, const Grid& g) {
    const auto a = dense_A(g);
    const int n = g.points_per_axis();
    const auto& x = g.x_axis();
    const auto down = CutoffShape::step_down(M, R);
    const Eigen::MatrixXcd P = dense_function(*a, [down](double v) { return down(v); });
    const Eigen::MatrixXcd S = dense_function(*a, [M, R](double v) { return sech((v + M) / R); });

    Eigen::VectorXcd B(n), Bdiff(n);
    const cplx rot = std::polar(1.0, 1.0 / R); // e^{-theta} at theta = -i/R
    for(int j = 0; j < n; ++j) {
        B[j] = b.f(cplx(x[j], 0.0));
        const cplx bm = b.f(rot * x[j]);            // B_{-i/R}(x)
        const cplx bp = b.f(std::conj(rot) * x[j]); // B_{+i/R}(x)
        if(!std::isfinite(std::abs(bm)) || !std::isfinite(std::abs(bp)))
            throw std::domain_error("commutator_identity_check: complex dilation singular on the lattice");
        Bdiff[j] = bm - bp;
    }
    const cplx I(0.0, 1.0);
    const Eigen::MatrixXcd lhs = I * (P * B.asDiagonal() - B.asDiagonal() * P);
    const Eigen::MatrixXcd rhs = 0.25 * I * (S * Bdiff.asDiagonal() * S);

    const Eigen::MatrixXcd Q = coherent_basis(g, g.half_width() / 8.0, g.p_max() / 8.0, 1.0);
    CommutatorReport rep;
    rep.subspace_dim = static_cast<int>(Q.cols());
    rep.lhs_norm = restricted_norm(lhs, Q);
    rep.rhs_norm = restricted_norm(rhs, Q);
    const double diff = restricted_norm(lhs - rhs, Q);
    const double scale = std::max(rep.lhs_norm, rep.rhs_norm);
    rep.discrepancy = scale > 1e-300 ? diff / scale : diff;
    const double full_scale = std::max(operator_norm(lhs), operator_norm(rhs));
    const double full_diff = operator_norm(lhs - rhs);
    rep.full_discrepancy = full_scale > 1e-300 ? full_diff / full_scale : full_diff;
    return rep;
}

ExpansionReport commutator_expansion_check(const PotentialSpec& spec, const CutoffShape& shape, const Grid& g) {
    const auto a = dense_A(g);
    const int n = g.points_per_axis();
    const auto& x = g.x_axis();
    PotentialSpec frozen = spec;
    frozen.modulation = ConstantModulation{};
    frozen.motion = CenterMotion{};
    const Real V = sample_potential(frozen, g, 0.0);
    const Real dV = sample_gradient(frozen, g, 0.0, 0);

    const Eigen::MatrixXcd F  = dense_function(*a, [shape](double v) { return shape(v); });
    const Eigen::MatrixXcd Fp = dense_function(*a, [shape](double v) { return shape.derivative(v); });
    Eigen::VectorXcd C(n); // [V, A] = i x V'
    for(int j = 0; j < n; ++j) C[j] = cplx(0.0, x[j] * dV[j]);
    const Eigen::VectorXcd Vc = V.cast<cplx>();
    const Eigen::MatrixXcd comm = Vc.asDiagonal() * F - F * Vc.asDiagonal();
    const Eigen::MatrixXcd first = 0.5 * (Fp * C.asDiagonal() + C.asDiagonal() * Fp);

    const Eigen::MatrixXcd Q = coherent_basis(g, g.half_width() / 8.0, g.p_max() / 8.0, 1.0);
    ExpansionReport rep;
    rep.commutator_norm = restricted_norm(comm, Q);
    rep.residual = restricted_norm(comm - first, Q);
    rep.rescaled = rep.residual * shape.R * shape.R;
    return rep;
}

std::vector<double> ld1_operator_check(double sigma, const std::vector<double>& taus, const Grid& g,
                                       double lo, double hi, double softness) {
    if(g.dim() != 1) throw std::invalid_argument("ld1_operator_check: 1D only");
    const int n = g.points_per_axis();
    const auto& x = g.x_axis();
    Eigen::VectorXcd W(n), G(n);
    for(int j = 0; j < n; ++j) {
        W[j] = std::pow(1.0 + x[j] * x[j], -0.5 * sigma);
        G[j] = 1.0 / (1.0 + x[j] * x[j]);
    }
    const Eigen::MatrixXcd Pi = dense_momentum_multiplier(g, [=](double p) {
        const double ap = std::abs(p);
        return cplx(0.5 * (std::tanh((ap - lo) / softness) - std::tanh((ap - hi) / softness)), 0.0);
    });
    std::vector<double> out;
    for(double tau : taus) {
        const Eigen::MatrixXcd U =
            dense_momentum_multiplier(g, [tau](double p) { return std::polar(1.0, -p * p * tau); });
        const Eigen::MatrixXcd Gt = U * G.asDiagonal() * U.adjoint();
        const Eigen::MatrixXcd op = W.asDiagonal() * (Pi * Gt * Pi);
        out.push_back(operator_norm(op));
    }
    return out;
}

std::vector<double> ld2_decay_probe(const WaveFunction& f, double K, const std::vector<double>& taus,
                                    double M, double R, const DilationMethod& method) {
    const Real chi = momentum_shell(*f.grid, K);
    const auto g0 = apply_multiplier(transform(f, Representation::position), chi, Representation::momentum);
    const auto down = CutoffShape::step_down(M, R);
    std::vector<double> out;
    for(double tau : taus) {
        const auto phi = free_evolve(g0, tau);
        const double bm = boundary_mass(phi);
        if(bm > 1e-8) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "ld2_decay_probe: box too small, boundary mass %.3g at tau = %g", bm, tau);
            throw SupportEscape(buf);
        }
        out.push_back(norm(function_of_A(phi, down, method)));
    }
    return out;
}

} // namespace propreg
