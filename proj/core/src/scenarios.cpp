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

#include <cstdio>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "propreg/estimates.hpp"

namespace propreg {

namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const std::vector<ScenarioInfo> kCatalog = {
    {"local_smoothness", "Schroedinger solution: ||<x>^{-sigma} Laplacian psi(t)|| <~ ||psi(0)||_{H^2}",
     "weighted H^2 norm has no positive trend",
     {"weight_power", "fit_lo", "fit_hi", "trend_tolerance"},
     {"t", "weighted_H2"}},
    {"kinetic_growth", "<p^2>_t <= t^{2/5}, from 2 alpha = 1 - 3 alpha",
     "fitted <p^2> exponent at most 2 alpha + tolerance",
     {"alpha", "softness", "fit_lo", "fit_hi", "trend_tolerance"},
     {"t", "p2", "kinetic_threshold"}},
    {"incoming_H2", "P^-(A) psi(t) in H^2, uniformly in t",
     "||Laplacian P^-(A) psi(t)|| has no positive trend",
     {"M", "R", "method", "eval_points", "fit_lo", "fit_hi"},
     {"t", "incoming_H2", "incoming_L2"}},
    {"incoming_pres", "bounded for all times, on average",
     "flag balance closes and time-averaged weighted flags stay bounded",
     {"M", "R", "M0", "ell", "dyadic_terms", "fit_lo", "fit_hi"},
     {"t", "incoming_flag", "avg_incoming_weighted", "dyadic_weighted", "dyadic_harmonic"}},
    {"ps_energy", "uniformly bounded in time: <H F_c + F_c H>",
     "propagation-set energy has no positive trend; Heisenberg balance when R_c is constant",
     {"rc", "softness", "fit_lo", "fit_hi"},
     {"t", "ps_energy"}},
    {"away_from_ps", "bound away from the PS: B_M and B_M^-",
     "both expectations stay bounded and the s^{-13/5} integral converges",
     {"M", "alpha", "softness", "fit_lo", "fit_hi"},
     {"t", "away_B_M", "away_B_M_minus", "away_integral"}},
    {"outgoing_H2", "sup_t <phi(t), H(t) phi(t)> <~ O(1) and the weighted Laplacian integral",
     "outgoing energy bounded and the weighted integral has no positive trend",
     {"M", "alpha", "softness", "fit_lo", "fit_hi"},
     {"t", "outgoing_energy", "weighted_laplacian", "weighted_integral"}},
    {"ps_high_freq", "R at least of order t^alpha: B_HH = <H F_c H>",
     "B_HH bounded with R_c = t^{2/5}; slice telescoping exact",
     {"rc", "ratio", "softness", "fit_lo", "fit_hi"},
     {"t", "ps_high_freq"}},
};

PotentialSpec compliant_potential() {
    PotentialSpec v;
    v.envelope = InversePower{-2.0, 6.5, {0.0, 0.0, 0.0}};
    v.modulation = Sinusoid{0.3, 0.0};
    v.decay_claim = 6.5;
    return v;
}

struct Run {
    const ScenarioConfig& cfg;
    GridPtr grid;
    Trajectory traj;
    EstimateReport report;
    double lo = 0.0, hi = 0.0;
};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

void add_verdict(EstimateReport& r, std::string name, bool pass, double value, double threshold,
                 std::string relation, std::string detail = {}) {
    r.verdicts.push_back({std::move(name), pass, value, threshold, std::move(relation), std::move(detail)});
}

/// Fit the series exponent on [lo, hi]; a failed fit is a failed verdict.
void add_trend(Run& run, const Series& s, double bound, const std::string& verdict, const std::string& relation) {
    try {
        const auto fit = fit_exponent(s.t, s.v, run.lo, run.hi, 200, run.cfg.seed + 20240601);
        run.report.exponents.push_back({s.name, fit.exponent, fit.half_width, run.lo, run.hi, fit.points});
        const bool pass = relation == "<" ? fit.exponent < bound : fit.exponent <= bound;
        add_verdict(run.report, verdict, pass, fit.exponent, bound, relation,
                    "exponent of " + s.name + " on [" + fmt_g(run.lo) + ", " + fmt_g(run.hi) + "]");
    } catch(const std::invalid_argument& e) {
        add_verdict(run.report, verdict, false, nan(), bound, relation, e.what());
    }
}

void add_trend(Run& run, const Series& s) {
    add_trend(run, s, run.cfg.trend_tolerance, "trend_" + s.name, "<");
}

Series series_from(const std::string& name, const std::vector<double>& t, const std::vector<double>& v) {
    Series s{name, {}, {}};
    for(std::size_t i = 0; i < t.size(); ++i) {
        if(std::isnan(v[i])) continue;
        s.t.push_back(t[i]);
        s.v.push_back(v[i]);
    }
    return s;
}

/// Snapshot indices nearest to `count` log-spaced times in [a, b].
std::vector<std::size_t> log_indices(const std::vector<double>& times, double a, double b, int count) {
    std::vector<std::size_t> out;
    if(times.empty() || count < 1) return out;
    a = std::max(a, 1e-12);
    for(int k = 0; k < count; ++k) {
        const double target = count == 1 ? b : a * std::pow(b / a, static_cast<double>(k) / (count - 1));
        std::size_t best = 0;
        for(std::size_t i = 1; i < times.size(); ++i)
            if(std::abs(times[i] - target) < std::abs(times[best] - target)) best = i;
        if(times[best] >= a * (1 - 1e-12) && times[best] <= b * (1 + 1e-12) &&
           (out.empty() || out.back() != best))
            out.push_back(best);
    }
    return out;
}

std::vector<std::size_t> indices_from(const std::vector<double>& times, double t_min) {
    std::vector<std::size_t> out;
    for(std::size_t i = 0; i < times.size(); ++i)
        if(times[i] >= t_min) out.push_back(i);
    return out;
}

/// Trapezoid running integral of v(t) w(t).
std::vector<double> running_integral(const std::vector<double>& t, const std::vector<double>& v,
                                     const std::function<double(double)>& w = {}) {
    std::vector<double> out(t.size(), 0.0);
    for(std::size_t i = 1; i < t.size(); ++i) {
        const double a = v[i - 1] * (w ? w(t[i - 1]) : 1.0);
        const double b = v[i] * (w ? w(t[i]) : 1.0);
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (a + b);
    }
    return out;
}

WaveFunction momentum_component(const WaveFunction& pos, int axis) {
    return apply_multiplier(pos, pos.grid->p_component(axis), Representation::momentum);
}

WaveFunction laplacian_of(const WaveFunction& pos) {
    auto out = apply_multiplier(pos, pos.grid->p_squared(), Representation::momentum);
    out.values = -out.values;
    return out;
}

// ---- individual scenarios -------------------------------------------------

void local_smoothness(Run& run, const WaveFunction& psi0) {
    const auto& t = run.traj.times;
    const auto& v = run.traj.probe("weighted_H2");
    const double h2 = sobolev_norm(psi0, 2.0);
    double sup = 0.0;
    for(double x : v) sup = std::max(sup, x);
    run.report.constants.emplace_back("sup_weighted_H2", sup);
    run.report.constants.emplace_back("initial_H2", h2);
    run.report.constants.emplace_back("C", sup / h2);
    run.report.series.push_back(series_from("weighted_H2", t, v));
    add_trend(run, run.report.series.back());
}

void kinetic_growth(Run& run) {
    const auto& t = run.traj.times;
    run.report.series.push_back(series_from("p2", t, run.traj.probe("p2")));
    run.report.series.push_back(series_from("kinetic_threshold", t, run.traj.probe("kinetic_threshold")));
    const double alpha = run.cfg.observable.alpha;
    add_trend(run, run.report.series.front(), 2.0 * alpha + run.cfg.trend_tolerance, "kinetic_bound", "<=");
}

void incoming_H2(Run& run) {
    const auto& spec = run.cfg.observable;
    const auto method = spec.method ? *spec.method : default_method(*run.grid, spec.R);
    const auto down = CutoffShape::step_down(spec.M, spec.R);
    Series h2{"incoming_H2", {}, {}}, l2{"incoming_L2", {}, {}};
    for(auto i : log_indices(run.traj.times, run.lo, run.hi, run.cfg.eval_points)) {
        const auto phi = function_of_A(run.traj.snapshots[i], down, method);
        h2.t.push_back(run.traj.times[i]);
        h2.v.push_back(weighted_norm(phi, 0.0, 2));
        l2.t.push_back(run.traj.times[i]);
        l2.v.push_back(norm(phi));
    }
    double sup = 0.0;
    for(double x : h2.v) sup = std::max(sup, x);
    run.report.constants.emplace_back("sup_incoming_H2", sup);
    run.report.series.push_back(h2);
    run.report.series.push_back(l2);
    add_trend(run, h2);
}

void incoming_pres(Run& run) {
    const auto& cfg = run.cfg;
    const auto& spec = cfg.observable;
    const auto& V = cfg.potential;
    const Grid& g = *run.grid;
    const auto method = spec.method ? *spec.method : default_method(g, spec.R);
    const auto down = CutoffShape::step_down(spec.M, spec.R);

    // Functions of A: P^-, then |a| F_n(a) for the dyadic family and for M itself.
    std::vector<ScalarFunction> family;
    for(int n = 0; n < cfg.dyadic_terms; ++n) {
        const auto fn = CutoffShape::step_down(spec.M0 * std::ldexp(1.0, n), spec.R);
        family.push_back([fn](double a) { return std::abs(a) * fn(a); });
    }
    family.push_back([down](double a) { return std::abs(a) * down(a); });

    const auto& times = run.traj.times;
    std::vector<double> flag, neg, rem, weighted;
    std::vector<std::vector<double>> fam(cfg.dyadic_terms);
    for(std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const auto psi = transform(run.traj.snapshots[i], Representation::position);
        const auto pm = function_of_A(psi, down, method);
        const auto h0 = apply_multiplier(psi, g.p_squared(), Representation::momentum);
        WaveFunction vpsi = psi;
        vpsi.values = (V.is_zero() ? Real::Zero(g.size()) : sample_potential(V, g, t)).cwiseProduct(psi.values);
        flag.push_back(inner(psi, pm).real());
        // <i[X, P^-]> = -2 Im <X psi, P^- psi> for symmetric X.
        neg.push_back(-2.0 * inner(h0, pm).imag());
        rem.push_back(-2.0 * inner(vpsi, pm).imag());

        std::vector<double> acc(family.size(), 0.0);
        for(int axis = 0; axis < g.dim(); ++axis) {
            const auto q = momentum_component(psi, axis);
            const auto out = function_of_A_many(q, family, method);
            for(std::size_t k = 0; k < family.size(); ++k) acc[k] += inner(q, out[k]).real();
        }
        for(int n = 0; n < cfg.dyadic_terms; ++n) fam[n].push_back(acc[n]);
        weighted.push_back(acc.back());
    }

    const auto ineg = running_integral(times, neg);
    const auto irem = running_integral(times, rem);
    const double change = flag.back() - flag.front();
    const double residual = std::abs(change - ineg.back() - irem.back());
    run.report.constants.emplace_back("flag_change", change);
    run.report.constants.emplace_back("integral_negative", ineg.back());
    run.report.constants.emplace_back("integral_remainder", irem.back());
    add_verdict(run.report, "monotone_remainder", residual <= 1e-3, residual, 1e-3, "<=",
                "|<F>_T - <F>_0 - int negative - int remainder|");

    // Time averages (1/(t - t0)) int_t0^t.
    const double t0 = times.front();
    auto average = [&](const std::vector<double>& v) {
        const auto I = running_integral(times, v);
        std::vector<double> out(times.size(), nan());
        for(std::size_t i = 1; i < times.size(); ++i) out[i] = I[i] / (times[i] - t0);
        return out;
    };
    const auto avg_w = average(weighted);
    std::vector<std::vector<double>> avg_fam;
    for(const auto& f : fam) avg_fam.push_back(average(f));
    std::vector<double> dw(times.size(), nan()), dh(times.size(), nan());
    for(std::size_t i = 1; i < times.size(); ++i) {
        std::vector<double> vals;
        for(const auto& f : avg_fam) vals.push_back(f[i]);
        const auto d = dyadic_sum(vals, spec.ell, spec.M0);
        dw[i] = d.weighted;
        dh[i] = d.harmonic;
    }
    run.report.series.push_back(series_from("incoming_flag", times, flag));
    run.report.series.push_back(series_from("avg_incoming_weighted", times, avg_w));
    run.report.series.push_back(series_from("dyadic_weighted", times, dw));
    run.report.series.push_back(series_from("dyadic_harmonic", times, dh));
    run.report.constants.emplace_back("dyadic_weighted_T", dw.back());
    run.report.constants.emplace_back("dyadic_harmonic_T", dh.back());
    add_trend(run, run.report.series[1]);
    add_trend(run, run.report.series[3]);
}

void ps_energy(Run& run) {
    const auto& cfg = run.cfg;
    const auto& times = run.traj.times;
    std::vector<double> v;
    for(std::size_t i = 0; i < times.size(); ++i)
        v.push_back(cfg.observable.needs_unit_time() && times[i] < 1.0
                        ? nan()
                        : evaluate_prob(run.traj.snapshots[i], cfg.observable, cfg.potential, times[i]));
    run.report.series.push_back(series_from("ps_energy", times, v));
    add_trend(run, run.report.series.back());
    if(!cfg.observable.rc.time_dependent()) {
        try {
            const auto h = heisenberg_consistency(cfg.observable, cfg.potential, run.traj);
            add_verdict(run.report, "heisenberg", h.max_residual < 1e-3, h.max_residual, 1e-3, "<",
                        "max |d/dt <B> - (dV/dt and [V, F_c] terms)|");
        } catch(const std::invalid_argument& e) {
            add_verdict(run.report, "heisenberg", false, nan(), 1e-3, "<", e.what());
        }
    }
}

void away_from_ps(Run& run) {
    const auto& cfg = run.cfg;
    auto plus = cfg.observable, minus = cfg.observable;
    plus.name = ObservableName::away_B_M;
    minus.name = ObservableName::away_B_M_minus;
    std::vector<double> t, bp, bm;
    for(auto i : indices_from(run.traj.times, 1.0)) {
        t.push_back(run.traj.times[i]);
        bp.push_back(evaluate_prob(run.traj.snapshots[i], plus, cfg.potential, t.back()));
        bm.push_back(evaluate_prob(run.traj.snapshots[i], minus, cfg.potential, t.back()));
    }
    const auto I = running_integral(t, bp, [](double s) { return std::pow(s, -2.6); });
    run.report.series.push_back(series_from("away_B_M", t, bp));
    run.report.series.push_back(series_from("away_B_M_minus", t, bm));
    run.report.series.push_back(series_from("away_integral", t, I));
    run.report.constants.emplace_back("away_integral_T", I.empty() ? nan() : I.back());
    add_trend(run, run.report.series[0]);
    add_trend(run, run.report.series[1]);
    add_trend(run, run.report.series[2]);
}

void outgoing_H2(Run& run) {
    const auto& cfg = run.cfg;
    auto spec = cfg.observable;
    spec.name = ObservableName::outgoing_energy;
    const Grid& g = *run.grid;
    std::vector<double> t, e, c;
    for(auto i : indices_from(run.traj.times, 1.0)) {
        const double s = run.traj.times[i];
        const auto psi = transform(run.traj.snapshots[i], Representation::position);
        t.push_back(s);
        e.push_back(evaluate_prob(psi, spec, cfg.potential, s));
        // [<a/t^alpha> (1 + ln <a/t^alpha>)]^{-1}; the 1 keeps the weight finite at a = 0.
        const double ta = std::pow(s, spec.alpha);
        const ScalarFunction weight = [ta](double a) {
            const double j = std::sqrt(1.0 + (a / ta) * (a / ta));
            return 1.0 / (j * (1.0 + std::log(j)));
        };
        const auto lap = laplacian_of(psi);
        const auto method = spec.method ? *spec.method : default_method(g, ta);
        c.push_back(inner(lap, function_of_A(lap, weight, method)).real());
    }
    const double alpha = spec.alpha;
    const auto I = running_integral(t, c, [alpha](double s) { return std::pow(s, -alpha); });
    double sup = 0.0;
    for(double x : e) sup = std::max(sup, x);
    run.report.constants.emplace_back("sup_outgoing_energy", sup);
    run.report.constants.emplace_back("weighted_integral_T", I.empty() ? nan() : I.back());
    run.report.series.push_back(series_from("outgoing_energy", t, e));
    run.report.series.push_back(series_from("weighted_laplacian", t, c));
    run.report.series.push_back(series_from("weighted_integral", t, I));
    add_trend(run, run.report.series[0]);
    add_trend(run, run.report.series[2]);
}

void ps_high_freq(Run& run) {
    const auto& cfg = run.cfg;
    const auto& times = run.traj.times;
    const auto& probe = run.traj.probe("ps_high_freq");
    run.report.series.push_back(series_from("ps_high_freq", times, probe));
    const Series& s = run.report.series.back();
    add_trend(run, s);

    try {
        const auto sched = slice_schedule(cfg.t_end, cfg.ratio);
        // Piecewise-linear reading of the recorded series at slice boundaries.
        auto value = [&s](double x) {
            auto it = std::lower_bound(s.t.begin(), s.t.end(), x);
            if(it == s.t.begin()) return s.v.front();
            if(it == s.t.end()) return s.v.back();
            const auto j = static_cast<std::size_t>(it - s.t.begin());
            const double f = (x - s.t[j - 1]) / (s.t[j] - s.t[j - 1]);
            return s.v[j - 1] * (1 - f) + s.v[j] * f;
        };
        const auto tel = telescope(sched, value);
        run.report.constants.emplace_back("slices", static_cast<double>(sched.slices()));
        run.report.constants.emplace_back("B_HH_T", value(sched.boundaries.front()));
        run.report.constants.emplace_back("B_HH_T_last", value(sched.boundaries.back()));
        add_verdict(run.report, "telescoping", tel.residual <= 1e-9, tel.residual, 1e-9, "<=",
                    "sum of slice increments against the end-point difference");
    } catch(const std::exception& e) {
        add_verdict(run.report, "telescoping", false, nan(), 1e-9, "<=", e.what());
    }
}

} // namespace

const std::vector<ScenarioInfo>& scenario_catalog() { return kCatalog; }

const ScenarioInfo& scenario_info(const std::string& name) {
    for(const auto& s : kCatalog)
        if(s.name == name) return s;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

ScenarioConfig default_config(const std::string& scenario) {
    scenario_info(scenario);
    ScenarioConfig c;
    c.scenario = scenario;
    c.potential = compliant_potential();
    c.observable.rc = ScaleRule{ScaleRule::Kind::power, 0.4};

    if(scenario == "kinetic_growth") {
        c.observable.name = ObservableName::kinetic_threshold;
    } else if(scenario == "incoming_H2") {
        c.observable.name = ObservableName::incoming_flag;
        c.fit_lo = 5.0;
    } else if(scenario == "ps_energy") {
        c.observable.name = ObservableName::ps_energy;
        c.initial.width = 1.0;
    } else if(scenario == "ps_high_freq") {
        c.observable.name = ObservableName::ps_high_freq;
        // A packet narrower than R_c(1) = 1 lets the growing ball saturate inside the fit window.
        c.initial.width = 1.0;
    } else if(scenario == "incoming_pres" || scenario == "away_from_ps" || scenario == "outgoing_H2") {
        // Observables with t^alpha-scale widths need the dense backend, which caps N at
        // 2048; dx = 0.5 resolves the well, and the scattered wave reaches L/2 near t = 34.
        c.half_width = 512.0;
        c.points_per_axis = 2048;
        c.t_end = 30.0;
        c.fit_lo = 15.0;
        if(scenario == "incoming_pres") {
            c.observable.name = ObservableName::incoming_weighted;
            c.stride = 5;
        } else if(scenario == "away_from_ps") {
            c.observable.name = ObservableName::away_B_M;
            c.stride = 50;
        } else {
            c.observable.name = ObservableName::outgoing_energy;
            c.observable.M = 1.0;
            c.stride = 50;
        }
    }
    return c;
}

EstimateReport run_scenario(const ScenarioConfig& cfg) {
    scenario_info(cfg.scenario);
    cfg.observable.validate();
    if(!(cfg.t_end > cfg.t_start)) throw std::invalid_argument("schedule: t_end must exceed t_start");
    if(cfg.stride < 1) throw std::invalid_argument("schedule.stride must be >= 1");
    if(cfg.eval_points < 1) throw std::invalid_argument("scenario.eval_points must be >= 1");
    if(cfg.dyadic_terms < 1) throw std::invalid_argument("scenario.dyadic_terms must be >= 1");

    Run run{cfg, make_grid(cfg.dim, cfg.half_width, cfg.points_per_axis), {}, {}};
    run.lo = cfg.fit_lo;
    run.hi = cfg.fit_hi > 0.0 ? cfg.fit_hi : cfg.t_end;

    auto psi0 = make_initial_state(run.grid, cfg.initial);
    psi0.time = cfg.t_start;

    Schedule sched;
    sched.t_start = cfg.t_start;
    sched.t_end = cfg.t_end;
    sched.dt = cfg.dt;
    sched.snapshot_stride = cfg.stride;
    sched.keep_snapshots = false;

    const std::string& name = cfg.scenario;
    if(name == "local_smoothness") {
        const double s = cfg.weight_power;
        sched.probes.push_back({"weighted_H2", [s](const WaveFunction& p) { return weighted_norm(p, s, 2); }});
    } else if(name == "kinetic_growth") {
        sched.probes.push_back({"p2", [](const WaveFunction& p) { return kinetic_expectation(p); }});
        auto spec = cfg.observable;
        spec.name = ObservableName::kinetic_threshold;
        const auto V = cfg.potential;
        sched.probes.push_back({"kinetic_threshold", [spec, V](const WaveFunction& p) {
                                    return p.time < 1.0 ? nan() : evaluate_prob(p, spec, V, p.time);
                                }});
    } else if(name == "ps_high_freq") {
        auto spec = cfg.observable;
        spec.name = ObservableName::ps_high_freq;
        const auto V = cfg.potential;
        sched.probes.push_back({"ps_high_freq", [spec, V](const WaveFunction& p) {
                                    return spec.needs_unit_time() && p.time < 1.0 ? nan()
                                                                                  : evaluate_prob(p, spec, V, p.time);
                                }});
    } else {
        sched.keep_snapshots = true;
    }

    run.traj = evolve(psi0, cfg.potential, sched);

    auto& r = run.report;
    r.scenario = name;
    r.dim = cfg.dim;
    r.half_width = cfg.half_width;
    r.points_per_axis = cfg.points_per_axis;
    r.dt = cfg.dt;
    r.t_end = cfg.t_end;
    r.seed = cfg.seed;
    r.max_boundary_mass = run.traj.max_boundary_mass;
    r.max_norm_deviation = run.traj.max_norm_deviation;
    r.trajectory_valid = run.traj.valid;
    r.breach = run.traj.breach;

    add_verdict(r, "boundary_audit", run.traj.valid, run.traj.max_boundary_mass, sched.boundary_threshold, "<=",
                run.traj.valid ? "mass beyond |x| > L/2" : run.traj.breach);
    add_verdict(r, "unitarity", run.traj.max_norm_deviation < 1e-9, run.traj.max_norm_deviation, 1e-9, "<",
                "max | ||psi(t)|| - ||psi(0)|| |");

    if(!cfg.potential.is_zero()) {
        std::vector<double> ts;
        for(int k = 0; k < 16; ++k) ts.push_back(cfg.t_start + (cfg.t_end - cfg.t_start) * k / 15.0);
        const auto a = verify_decay_assumptions(cfg.potential, *run.grid, cfg.weight_power, ts);
        r.constants.emplace_back("sup_weighted_V", a.sup_weighted_V);
        add_verdict(r, "decay_assumptions", a.pass, a.sup_weighted_V, a.constant, "<=",
                    "sup <x>^sigma |V| and derivatives with sigma = " + fmt_g(cfg.weight_power) +
                        (a.attained_on_boundary ? "; supremum on the outer shell" : ""));
    }

    if(name == "local_smoothness") local_smoothness(run, psi0);
    else if(name == "kinetic_growth") kinetic_growth(run);
    else if(name == "incoming_H2") incoming_H2(run);
    else if(name == "incoming_pres") incoming_pres(run);
    else if(name == "ps_energy") ps_energy(run);
    else if(name == "away_from_ps") away_from_ps(run);
    else if(name == "outgoing_H2") outgoing_H2(run);
    else ps_high_freq(run);
    return r;
}

} // namespace propreg
