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

// propreg: run estimate scenarios from YAML configs.
//
// Exit status: 0 all verdicts pass, 1 some verdict failed, 2 bad usage or
// config, 3 runtime or I/O failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "harness/config.hpp"
#include "harness/report.hpp"

namespace {

using namespace propreg;
using namespace propreg::harness;

enum Exit { ok = 0, failed = 1, usage = 2, runtime = 3 };

struct Job {
    std::string path;
    RunConfig cfg;
    std::string directory;
};

int run_one(const Job& job) {
    try {
        spdlog::info("{}: scenario {} -> {}", job.path, job.cfg.scenario.scenario, job.directory);
        const auto start = std::chrono::steady_clock::now();
        const auto report = run_scenario(job.cfg.scenario);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_artifacts(report, job.cfg, job.directory);
        for(const auto& v : report.verdicts)
            spdlog::info("  {:<28} {}  {} {} {}", v.name, v.pass ? "PASS" : "FAIL", v.value, v.relation, v.threshold);
        if(!report.trajectory_valid) spdlog::warn("  trajectory invalid: {}", report.breach);
        spdlog::info("{}: {} in {:.1f} s", job.path, report.all_pass() ? "PASS" : "FAIL", secs);
        std::cout << summary_json(report).dump() << "\n";
        return report.all_pass() ? ok : failed;
    } catch(const std::exception& e) {
        spdlog::error("{}: {}", job.path, e.what());
        return runtime;
    }
}

int cmd_run(const std::vector<std::string>& paths, const std::optional<std::string>& out,
            const std::optional<std::uint64_t>& seed, int jobs) {
    std::vector<Job> work;
    for(const auto& p : paths) {
        try {
            auto cfg = load_config(p);
            if(seed) cfg.scenario.seed = *seed;
            std::string dir = out ? *out : cfg.output.directory;
            // Several configs share one root: isolate each run by config stem.
            if(paths.size() > 1) dir = (std::filesystem::path(dir) / std::filesystem::path(p).stem()).string();
            work.push_back({p, std::move(cfg), dir});
        } catch(const ConfigError& e) {
            spdlog::error("{}: {}", p, e.what());
            return usage;
        }
    }
    int worst = ok;
    for(std::size_t i = 0; i < work.size(); i += static_cast<std::size_t>(jobs)) {
        std::vector<std::future<int>> batch;
        for(std::size_t k = i; k < std::min(work.size(), i + static_cast<std::size_t>(jobs)); ++k)
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_one, work[k]));
        for(auto& f : batch) worst = std::max(worst, f.get());
    }
    return worst;
}

int cmd_check(const std::string& path) {
    try {
        const auto cfg = load_config(path);
        fmt::print("{}: ok (scenario {})\n", path, cfg.scenario.scenario);
        fmt::print("{}", render_config(cfg));
        return ok;
    } catch(const ConfigError& e) {
        fmt::print(stderr, "{}: {}\n", path, e.what());
        return usage;
    }
}

} // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_st("propreg"));
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"Propagation-estimate scenarios for time-dependent Schroedinger flows"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Evolve, evaluate the scenario observables and write artifacts");
    std::vector<std::string> configs;
    std::string out_dir;
    std::uint64_t seed = 0;
    int jobs = 1;
    run->add_option("--config", configs, "Run configuration (repeatable)")->required()->check(CLI::ExistingFile);
    auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    auto* seed_opt = run->add_option("--seed", seed, "Seed override");
    run->add_option("--jobs", jobs, "Independent configs run concurrently")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list-scenarios", "Print the scenario catalog");
    bool machine = false;
    list->add_flag("--machine", machine, "JSON listing");

    auto* check = app.add_subcommand("check-config", "Validate a configuration and print it with defaults filled");
    std::string check_path;
    check->add_option("--config", check_path, "Run configuration")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    if(*run)
        return cmd_run(configs, *out_opt ? std::optional(out_dir) : std::nullopt,
                       *seed_opt ? std::optional(seed) : std::nullopt, jobs);
    if(*list) {
        if(machine) fmt::print("{}\n", catalog_json().dump(2));
        else fmt::print("{}", catalog_text());
        return ok;
    }
    return cmd_check(check_path);
}
