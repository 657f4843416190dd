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

#include "harness/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace propreg::harness {

namespace {

/// JSON has no NaN; absent values become null.
nlohmann::ordered_json number(double v) {
    if(std::isfinite(v)) return v;
    return nullptr;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if(!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << body;
    if(!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace

nlohmann::ordered_json report_json(const EstimateReport& r, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["scenario"] = r.scenario;
    j["pass"] = r.all_pass();
    j["metadata"] = {{"dim", r.dim},
                     {"L", r.half_width},
                     {"N", r.points_per_axis},
                     {"dt", r.dt},
                     {"T", r.t_end},
                     {"seed", r.seed},
                     {"max_boundary_mass", number(r.max_boundary_mass)},
                     {"max_norm_deviation", number(r.max_norm_deviation)},
                     {"trajectory_valid", r.trajectory_valid},
                     {"breach", r.breach}};
    auto& verdicts = j["verdicts"] = nlohmann::ordered_json::array();
    for(const auto& v : r.verdicts)
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"value", number(v.value)},
                            {"relation", v.relation},
                            {"threshold", number(v.threshold)},
                            {"detail", v.detail}});
    auto& exps = j["exponents"] = nlohmann::ordered_json::array();
    for(const auto& e : r.exponents)
        exps.push_back({{"series", e.name},
                        {"exponent", number(e.exponent)},
                        {"half_width", number(e.half_width)},
                        {"t_lo", e.t_lo},
                        {"t_hi", e.t_hi},
                        {"points", e.points}});
    auto& consts = j["constants"] = nlohmann::ordered_json::object();
    for(const auto& [k, v] : r.constants) consts[k] = number(v);
    auto& series = j["series"] = nlohmann::ordered_json::array();
    for(const auto& s : r.series)
        series.push_back({{"name", s.name}, {"file", s.name + ".csv"}, {"points", s.t.size()}});
    j["config_text"] = render_config(cfg);
    return j;
}

nlohmann::ordered_json summary_json(const EstimateReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["scenario"] = r.scenario;
    j["pass"] = r.all_pass();
    auto& v = j["verdicts"] = nlohmann::ordered_json::object();
    for(const auto& x : r.verdicts) v[x.name] = x.pass ? "PASS" : "FAIL";
    return j;
}

std::string series_csv(const Series& s) {
    std::string out = "t," + s.name + "\n";
    for(std::size_t i = 0; i < s.t.size(); ++i) out += fmt::format("{},{}\n", s.t[i], s.v[i]);
    return out;
}

void write_artifacts(const EstimateReport& r, const RunConfig& cfg, const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if(ec) throw std::runtime_error("cannot create '" + directory + "': " + ec.message());
    if(cfg.output.csv)
        for(const auto& s : r.series) write_file(dir / (s.name + ".csv"), series_csv(s));
    if(cfg.output.json) write_file(dir / "report.json", report_json(r, cfg).dump(2) + "\n");
    write_file(dir / "summary.json", summary_json(r).dump(2) + "\n");
}

std::string catalog_text() {
    std::string out;
    for(const auto& s : scenario_catalog()) {
        out += fmt::format("{}\n  anchor:     {}\n  claim:      {}\n  parameters: {}\n  columns:    {}\n", s.name,
                           s.anchor, s.claim, fmt::join(s.parameters, ", "), fmt::join(s.columns, ","));
    }
    return out;
}

nlohmann::ordered_json catalog_json() {
    auto j = nlohmann::ordered_json::array();
    for(const auto& s : scenario_catalog())
        j.push_back({{"name", s.name},
                     {"anchor", s.anchor},
                     {"claim", s.claim},
                     {"parameters", s.parameters},
                     {"columns", s.columns}});
    return j;
}

} // namespace propreg::harness
