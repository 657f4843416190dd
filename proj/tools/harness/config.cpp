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

#include "harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace propreg::harness {

ConfigError::ConfigError(int line, std::string field, const std::string& message)
  : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) +
                       (field.empty() ? std::string{} : field + ": ") + message),
    line_(line),
    field_(std::move(field)) {}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

struct Entry {
    YAML::Node value;
    int line = 0;
    std::string path;
};

/// Keys of one mapping, rejecting duplicates.
std::map<std::string, Entry> entries_of(const YAML::Node& map, const std::string& prefix, RunConfig& cfg) {
    if(!map.IsMap()) throw ConfigError(line_of(map), prefix, "expected a mapping");
    std::map<std::string, Entry> out;
    for(const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        const auto path = prefix.empty() ? key : prefix + "." + key;
        const int line = line_of(kv.first);
        if(out.count(key)) throw ConfigError(line, path, "duplicate key (first defined on line " +
                                                             std::to_string(out[key].line) + ")");
        out[key] = Entry{kv.second, line, path};
        cfg.lines[path] = line;
    }
    return out;
}

double number(const Entry& e) {
    try {
        const double v = e.value.as<double>();
        if(!std::isfinite(v)) throw ConfigError(e.line, e.path, "expected a finite number");
        return v;
    } catch(const YAML::BadConversion&) {
        throw ConfigError(e.line, e.path, "expected a number");
    }
}

long long integer(const Entry& e) {
    try {
        return e.value.as<long long>();
    } catch(const YAML::BadConversion&) {
        throw ConfigError(e.line, e.path, "expected an integer");
    }
}

std::string text(const Entry& e) {
    if(!e.value.IsScalar()) throw ConfigError(e.line, e.path, "expected a string");
    return e.value.as<std::string>();
}

Point point(const Entry& e) {
    Point p{0.0, 0.0, 0.0};
    if(e.value.IsScalar()) {
        p[0] = number(e);
        return p;
    }
    if(!e.value.IsSequence() || e.value.size() < 1 || e.value.size() > 3)
        throw ConfigError(e.line, e.path, "expected a number or a list of 1 to 3 numbers");
    for(std::size_t i = 0; i < e.value.size(); ++i) p[i] = number(Entry{e.value[i], e.line, e.path});
    return p;
}

[[noreturn]] void unknown(const Entry& e) { throw ConfigError(e.line, e.path, "unknown key"); }

void apply_grid(const std::map<std::string, Entry>& s, ScenarioConfig& c) {
    for(const auto& [k, e] : s) {
        if(k == "dim") c.dim = static_cast<int>(integer(e));
        else if(k == "L") c.half_width = number(e);
        else if(k == "N") c.points_per_axis = static_cast<int>(integer(e));
        else unknown(e);
    }
}

void apply_potential(const std::map<std::string, Entry>& s, ScenarioConfig& c) {
    auto& v = c.potential;
    if(auto it = s.find("envelope"); it != s.end()) {
        const auto kind = text(it->second);
        if(kind == "inverse_power") {
            if(!std::holds_alternative<InversePower>(v.envelope)) v.envelope = InversePower{};
        } else if(kind == "gaussian_bump") {
            if(!std::holds_alternative<GaussianBump>(v.envelope)) v.envelope = GaussianBump{};
        } else {
            throw ConfigError(it->second.line, it->second.path, "expected inverse_power or gaussian_bump");
        }
    }
    double noise_cutoff = 1.0;
    std::uint64_t noise_seed = c.seed;
    bool noise = false;
    if(auto it = s.find("modulation"); it != s.end()) {
        const auto kind = text(it->second);
        if(kind == "constant") v.modulation = ConstantModulation{};
        else if(kind == "sinusoid") {
            if(!std::holds_alternative<Sinusoid>(v.modulation)) v.modulation = Sinusoid{};
        } else if(kind == "chirp") {
            if(!std::holds_alternative<Chirp>(v.modulation)) v.modulation = Chirp{};
        } else if(kind == "noise") {
            noise = true;
            if(const auto* n = std::get_if<BandLimitedNoise>(&v.modulation)) {
                noise_cutoff = n->cutoff();
                noise_seed = n->seed();
            }
        } else {
            throw ConfigError(it->second.line, it->second.path, "expected constant, sinusoid, chirp or noise");
        }
    }
    auto* ip = std::get_if<InversePower>(&v.envelope);
    auto* gb = std::get_if<GaussianBump>(&v.envelope);
    auto* sn = std::get_if<Sinusoid>(&v.modulation);
    auto* ch = std::get_if<Chirp>(&v.modulation);
    auto inapplicable = [](const Entry& e, const std::string& what) {
        throw ConfigError(e.line, e.path, "not valid for " + what);
    };
    for(const auto& [k, e] : s) {
        if(k == "envelope" || k == "modulation") continue;
        if(k == "amplitude") ip ? void(ip->amplitude = number(e)) : inapplicable(e, "envelope gaussian_bump");
        else if(k == "exponent") ip ? void(ip->exponent = number(e)) : inapplicable(e, "envelope gaussian_bump");
        else if(k == "depth") gb ? void(gb->depth = number(e)) : inapplicable(e, "envelope inverse_power");
        else if(k == "width") gb ? void(gb->width = number(e)) : inapplicable(e, "envelope inverse_power");
        else if(k == "center") (ip ? ip->center : gb->center) = point(e);
        else if(k == "omega") {
            if(sn) sn->omega = number(e);
            else if(ch) ch->omega = number(e);
            else inapplicable(e, "this modulation");
        } else if(k == "phase") sn ? void(sn->phase = number(e)) : inapplicable(e, "this modulation");
        else if(k == "rate") ch ? void(ch->rate = number(e)) : inapplicable(e, "this modulation");
        else if(k == "cutoff") noise ? void(noise_cutoff = number(e)) : inapplicable(e, "this modulation");
        else if(k == "noise_seed")
            noise ? void(noise_seed = static_cast<std::uint64_t>(integer(e))) : inapplicable(e, "this modulation");
        else if(k == "motion_amplitude") v.motion.amplitude = point(e);
        else if(k == "motion_omega") v.motion.omega = number(e);
        else if(k == "decay_claim") v.decay_claim = number(e);
        else unknown(e);
    }
    if(noise) {
        if(!(noise_cutoff > 0.0)) {
            const auto& e = s.at("cutoff");
            throw ConfigError(e.line, e.path, "must be positive");
        }
        v.modulation = BandLimitedNoise(noise_cutoff, noise_seed);
    }
}

void apply_initial(const std::map<std::string, Entry>& s, ScenarioConfig& c) {
    auto& i = c.initial;
    for(const auto& [k, e] : s) {
        if(k == "kind") {
            const auto kind = text(e);
            if(kind == "gaussian") i.kind = InitialState::Kind::gaussian;
            else if(kind == "shell") i.kind = InitialState::Kind::shell;
            else throw ConfigError(e.line, e.path, "expected gaussian or shell");
        } else if(k == "center") i.center = point(e);
        else if(k == "k") i.k = point(e);
        else if(k == "width") i.width = number(e);
        else if(k == "shell_K") i.shell_K = number(e);
        else if(k == "shell_width") i.shell_width = number(e);
        else unknown(e);
    }
}

void apply_schedule(const std::map<std::string, Entry>& s, ScenarioConfig& c) {
    for(const auto& [k, e] : s) {
        if(k == "t_start") c.t_start = number(e);
        else if(k == "T") c.t_end = number(e);
        else if(k == "dt") c.dt = number(e);
        else if(k == "stride") c.stride = static_cast<int>(integer(e));
        else unknown(e);
    }
}

void apply_scenario(const std::map<std::string, Entry>& s, ScenarioConfig& c, std::string& method, int& order) {
    auto& o = c.observable;
    for(const auto& [k, e] : s) {
        if(k == "name") continue;
        if(k == "M") o.M = number(e);
        else if(k == "R") o.R = number(e);
        else if(k == "M0") o.M0 = number(e);
        else if(k == "alpha") o.alpha = number(e);
        else if(k == "beta") o.beta = number(e);
        else if(k == "ell") o.ell = number(e);
        else if(k == "K") o.K = number(e);
        else if(k == "softness") o.softness = number(e);
        else if(k == "rc") {
            const auto raw = text(e);
            if(raw.rfind("t^", 0) == 0) {
                o.rc.kind = ScaleRule::Kind::power;
                o.rc.value = number(Entry{YAML::Node(raw.substr(2)), e.line, e.path});
            } else {
                o.rc.kind = ScaleRule::Kind::constant;
                o.rc.value = number(e);
            }
        } else if(k == "method") method = text(e);
        else if(k == "chebyshev_order") order = static_cast<int>(integer(e));
        else if(k == "ratio") c.ratio = number(e);
        else if(k == "dyadic_terms") c.dyadic_terms = static_cast<int>(integer(e));
        else if(k == "fit_lo") c.fit_lo = number(e);
        else if(k == "fit_hi") c.fit_hi = number(e);
        else if(k == "eval_points") c.eval_points = static_cast<int>(integer(e));
        else if(k == "trend_tolerance") c.trend_tolerance = number(e);
        else if(k == "weight_power") c.weight_power = number(e);
        else unknown(e);
    }
}

void apply_output(const std::map<std::string, Entry>& s, OutputOptions& out) {
    for(const auto& [k, e] : s) {
        if(k == "directory") out.directory = text(e);
        else if(k == "formats") {
            out.csv = out.json = false;
            std::vector<std::string> names;
            if(e.value.IsSequence())
                for(const auto& n : e.value) names.push_back(text(Entry{n, e.line, e.path}));
            else
                names.push_back(text(e));
            for(const auto& n : names) {
                if(n == "csv") out.csv = true;
                else if(n == "json") out.json = true;
                else throw ConfigError(e.line, e.path, "unknown format '" + n + "' (expected csv or json)");
            }
        } else unknown(e);
    }
}

int line_for(const RunConfig& cfg, const std::string& path) {
    if(auto it = cfg.lines.find(path); it != cfg.lines.end()) return it->second;
    const auto section = path.substr(0, path.find('.'));
    if(auto it = cfg.lines.find(section); it != cfg.lines.end()) return it->second;
    return 0;
}

[[noreturn]] void violation(const RunConfig& cfg, const std::string& path, const std::string& why) {
    throw ConfigError(line_for(cfg, path), path, why);
}

std::string num(double v) { return fmt::format("{}", v); }

std::string pt(const Point& p) { return fmt::format("[{}, {}, {}]", p[0], p[1], p[2]); }

} // namespace

void validate(const RunConfig& cfg) {
    const auto& c = cfg.scenario;
    if(c.dim < 1 || c.dim > 3) violation(cfg, "grid.dim", "must be 1, 2 or 3");
    if(!(c.half_width > 0.0)) violation(cfg, "grid.L", "must be positive");
    const int N = c.points_per_axis;
    if(N < 16 || (N & (N - 1)) != 0) violation(cfg, "grid.N", "must be a power of two >= 16");

    if(const auto* ip = std::get_if<InversePower>(&c.potential.envelope)) {
        if(!(ip->exponent > 0.0)) violation(cfg, "potential.exponent", "must be positive");
    } else {
        const auto& gb = std::get<GaussianBump>(c.potential.envelope);
        if(!(gb.width > 0.0)) violation(cfg, "potential.width", "must be positive");
    }
    if(!(c.potential.motion.omega >= 0.0)) violation(cfg, "potential.motion_omega", "must be >= 0");

    const auto& i = c.initial;
    if(i.kind == InitialState::Kind::gaussian && !(i.width > 0.0))
        violation(cfg, "initial_state.width", "must be positive");
    if(i.kind == InitialState::Kind::shell) {
        if(!(i.shell_K > 0.0)) violation(cfg, "initial_state.shell_K", "must be positive");
        if(!(i.shell_width > 0.0 && i.shell_width < 1.0))
            violation(cfg, "initial_state.shell_width", "must lie in (0, 1)");
    }

    if(!(c.dt > 0.0)) violation(cfg, "schedule.dt", "must be positive");
    if(!(c.t_end > c.t_start)) violation(cfg, "schedule.T", "must exceed schedule.t_start");
    if(c.stride < 1) violation(cfg, "schedule.stride", "must be >= 1");

    try {
        c.observable.validate();
    } catch(const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        const auto field = msg.substr(std::string("observable.").size(), colon - std::string("observable.").size());
        violation(cfg, "scenario." + field, msg.substr(colon + 2));
    }
    if(c.observable.method && std::holds_alternative<DenseEigen>(*c.observable.method) && (c.dim != 1 || N > 2048))
        violation(cfg, "scenario.method", "dense needs a 1D grid with N <= 2048");
    if(const auto* ch = c.observable.method ? std::get_if<Chebyshev>(&*c.observable.method) : nullptr)
        if(ch->order < 1) violation(cfg, "scenario.chebyshev_order", "must be >= 1");
    if(!(c.ratio > 0.0 && c.ratio < 1.0)) violation(cfg, "scenario.ratio", "must lie in (0, 1)");
    if(c.dyadic_terms < 1 || c.dyadic_terms > 40) violation(cfg, "scenario.dyadic_terms", "must lie in [1, 40]");
    if(c.eval_points < 1) violation(cfg, "scenario.eval_points", "must be >= 1");
    if(!(c.fit_lo >= 0.0)) violation(cfg, "scenario.fit_lo", "must be >= 0");
    if(c.fit_hi != 0.0 && !(c.fit_hi > c.fit_lo)) violation(cfg, "scenario.fit_hi", "must be 0 or exceed fit_lo");
    if(!(c.trend_tolerance > 0.0)) violation(cfg, "scenario.trend_tolerance", "must be positive");
    if(!(c.weight_power >= 0.0)) violation(cfg, "scenario.weight_power", "must be >= 0");
    if(cfg.output.directory.empty()) violation(cfg, "output.directory", "must not be empty");
}

RunConfig parse_config(const std::string& text_in) {
    YAML::Node root;
    try {
        root = YAML::Load(text_in);
    } catch(const YAML::ParserException& e) {
        throw ConfigError(e.mark.line + 1, "", e.msg);
    }
    if(!root || root.IsNull()) throw ConfigError(0, "", "empty configuration");

    RunConfig cfg;
    const auto top = entries_of(root, "", cfg);
    static const std::set<std::string> sections = {"seed",     "grid",     "potential", "initial_state",
                                                   "schedule", "scenario", "output"};
    for(const auto& [k, e] : top)
        if(!sections.count(k)) unknown(e);

    const auto sc = top.find("scenario");
    if(sc == top.end()) throw ConfigError(0, "scenario", "missing section");
    const auto scenario = entries_of(sc->second.value, "scenario", cfg);
    const auto name = scenario.find("name");
    if(name == scenario.end()) throw ConfigError(sc->second.line, "scenario.name", "required");
    try {
        cfg.scenario = default_config(text(name->second));
    } catch(const std::invalid_argument& e) {
        throw ConfigError(name->second.line, "scenario.name", e.what());
    }

    if(auto it = top.find("seed"); it != top.end()) cfg.scenario.seed = static_cast<std::uint64_t>(integer(it->second));
    if(auto it = top.find("grid"); it != top.end()) apply_grid(entries_of(it->second.value, "grid", cfg), cfg.scenario);
    if(auto it = top.find("potential"); it != top.end())
        apply_potential(entries_of(it->second.value, "potential", cfg), cfg.scenario);
    if(auto it = top.find("initial_state"); it != top.end())
        apply_initial(entries_of(it->second.value, "initial_state", cfg), cfg.scenario);
    if(auto it = top.find("schedule"); it != top.end())
        apply_schedule(entries_of(it->second.value, "schedule", cfg), cfg.scenario);
    std::string method = "auto";
    int order = 0;
    apply_scenario(scenario, cfg.scenario, method, order);
    if(auto it = top.find("output"); it != top.end())
        apply_output(entries_of(it->second.value, "output", cfg), cfg.output);

    if(method == "dense") {
        cfg.scenario.observable.method = DenseEigen{};
    } else if(method == "chebyshev") {
        const int N = cfg.scenario.points_per_axis;
        if(cfg.scenario.half_width > 0.0 && N >= 16 && (N & (N - 1)) == 0 && cfg.scenario.dim >= 1 &&
           cfg.scenario.dim <= 3) {
            const auto g = make_grid(cfg.scenario.dim, cfg.scenario.half_width, N);
            cfg.scenario.observable.method =
                Chebyshev{order > 0 ? order : chebyshev_for(*g, cfg.scenario.observable.R).order, lattice_bound(*g)};
        }
    } else if(method != "auto") {
        violation(cfg, "scenario.method", "expected auto, dense or chebyshev");
    } else if(order != 0) {
        violation(cfg, "scenario.chebyshev_order", "only valid with method chebyshev");
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if(!in) throw ConfigError(0, "", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
    const auto& c = cfg.scenario;
    const auto& o = c.observable;
    std::string s;
    s += fmt::format("seed: {}\n", c.seed);
    s += fmt::format("grid:\n  dim: {}\n  L: {}\n  N: {}\n", c.dim, num(c.half_width), c.points_per_axis);

    s += "potential:\n";
    if(const auto* ip = std::get_if<InversePower>(&c.potential.envelope))
        s += fmt::format("  envelope: inverse_power\n  amplitude: {}\n  exponent: {}\n  center: {}\n",
                         num(ip->amplitude), num(ip->exponent), pt(ip->center));
    else {
        const auto& gb = std::get<GaussianBump>(c.potential.envelope);
        s += fmt::format("  envelope: gaussian_bump\n  depth: {}\n  width: {}\n  center: {}\n", num(gb.depth),
                         num(gb.width), pt(gb.center));
    }
    std::visit(
        [&s](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr(std::is_same_v<M, ConstantModulation>) s += "  modulation: constant\n";
            else if constexpr(std::is_same_v<M, Sinusoid>)
                s += fmt::format("  modulation: sinusoid\n  omega: {}\n  phase: {}\n", num(m.omega), num(m.phase));
            else if constexpr(std::is_same_v<M, Chirp>)
                s += fmt::format("  modulation: chirp\n  omega: {}\n  rate: {}\n", num(m.omega), num(m.rate));
            else
                s += fmt::format("  modulation: noise\n  cutoff: {}\n  noise_seed: {}\n", num(m.cutoff()), m.seed());
        },
        c.potential.modulation);
    s += fmt::format("  motion_amplitude: {}\n  motion_omega: {}\n  decay_claim: {}\n", pt(c.potential.motion.amplitude),
                     num(c.potential.motion.omega), num(c.potential.decay_claim));

    const auto& i = c.initial;
    s += fmt::format("initial_state:\n  kind: {}\n  center: {}\n  k: {}\n  width: {}\n  shell_K: {}\n  shell_width: {}\n",
                     i.kind == InitialState::Kind::gaussian ? "gaussian" : "shell", pt(i.center), pt(i.k),
                     num(i.width), num(i.shell_K), num(i.shell_width));
    s += fmt::format("schedule:\n  t_start: {}\n  T: {}\n  dt: {}\n  stride: {}\n", num(c.t_start), num(c.t_end),
                     num(c.dt), c.stride);

    s += fmt::format("scenario:\n  name: {}\n  M: {}\n  R: {}\n  M0: {}\n  alpha: {}\n  beta: {}\n  ell: {}\n  K: {}\n",
                     c.scenario, num(o.M), num(o.R), num(o.M0), num(o.alpha), num(o.beta), num(o.ell), num(o.K));
    s += fmt::format("  rc: {}\n  softness: {}\n",
                     o.rc.kind == ScaleRule::Kind::power ? "\"t^" + num(o.rc.value) + "\"" : num(o.rc.value),
                     num(o.softness));
    if(!o.method) s += "  method: auto\n";
    else if(std::holds_alternative<DenseEigen>(*o.method)) s += "  method: dense\n";
    else if(const auto* ch = std::get_if<Chebyshev>(&*o.method))
        s += fmt::format("  method: chebyshev\n  chebyshev_order: {}\n", ch->order);
    s += fmt::format("  ratio: {}\n  dyadic_terms: {}\n  fit_lo: {}\n  fit_hi: {}\n  eval_points: {}\n"
                     "  trend_tolerance: {}\n  weight_power: {}\n",
                     num(c.ratio), c.dyadic_terms, num(c.fit_lo), num(c.fit_hi), c.eval_points,
                     num(c.trend_tolerance), num(c.weight_power));

    std::vector<std::string> formats;
    if(cfg.output.csv) formats.emplace_back("csv");
    if(cfg.output.json) formats.emplace_back("json");
    s += fmt::format("output:\n  directory: \"{}\"\n  formats: [{}]\n", cfg.output.directory, fmt::join(formats, ", "));
    return s;
}

} // namespace propreg::harness
