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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "propreg/estimates.hpp"

namespace propreg::harness {

/// A rejected configuration, with the 1-based line of the offending entry (0 if unknown).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string field, const std::string& message);

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

struct OutputOptions {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    ScenarioConfig scenario;
    OutputOptions output;
    /// Line of every key seen, by dotted path.
    std::map<std::string, int> lines;
};

/** Parse and validate a YAML run configuration.
 *
 *  Unset fields take the scenario defaults from default_config(). Unknown keys,
 *  duplicate keys, type mismatches and constraint violations raise ConfigError.
 */
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Re-validate a config built in code; throws ConfigError.
void validate(const RunConfig& cfg);

/// Complete YAML rendering; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& cfg);

} // namespace propreg::harness
