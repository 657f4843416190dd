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

#include <string>

#include <nlohmann/json.hpp>

#include "harness/config.hpp"

namespace propreg::harness {

inline constexpr int schema_version = 1;

/// Structured report: verdicts, exponents, constants, metadata and the config echo.
nlohmann::ordered_json report_json(const EstimateReport& report, const RunConfig& cfg);

/// Machine-readable pass/fail summary.
nlohmann::ordered_json summary_json(const EstimateReport& report);

/// CSV text for one series, header `t,<name>`.
std::string series_csv(const Series& s);

/// Write CSVs, report.json and summary.json into `directory` (created if needed).
void write_artifacts(const EstimateReport& report, const RunConfig& cfg, const std::string& directory);

/// Catalog as text, one block per scenario, or as JSON.
std::string catalog_text();
nlohmann::ordered_json catalog_json();

} // namespace propreg::harness
