// Copyright 2026 The torusflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "torusflow/app.hpp"

#include "torusflow/errors.hpp"
#include "torusflow/io.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <thread>

namespace torusflow {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string snapshot_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06zu.bin", step);
    return buf;
}

}  // namespace

unsigned worker_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TORUSFLOW_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return hw;
}

RunOutcome run_simulation(const SimConfig& cfg, std::ostream* log) {
    RunOutcome out;
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);

    RunHooks hooks;
    if (cfg.write_snapshots) {
        hooks.on_snapshot = [&](std::size_t step, const SimState& s) {
            const std::string name = snapshot_name(step);
            write_snapshot(dir / name, make_snapshot(s, cfg.physics.eps));
            out.files.push_back(name);
        };
    }
    out.history = run(cfg, hooks);
    const History& h = out.history;
    if (log)
        for (const auto& w : h.warnings) *log << "warning: " << w << "\n";

    if (cfg.write_csv) {
        write_timeseries(dir / "run.csv", h.records);
        out.files.push_back("run.csv");
    }
    if (h.status == RunStatus::blowup) {
        write_file_atomic(dir / "blowup.txt", h.error + "\n" + h.dump);
        out.files.push_back("blowup.txt");
        out.exit_code = kExitBlowUp;
        if (log) *log << "blow-up: " << h.error << "\n";
    }

    nlohmann::ordered_json m;
    m["tool"] = "torusflow";
    m["version"] = kVersion;
    m["config"] = to_text(cfg);
    m["resolved"] = {{"K", cfg.resolved_cutoff()}, {"cap_scale", cfg.resolved_cap_scale()}};
    m["start_time"] = started;
    m["end_time"] = utc_now();
    m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m["status"] = h.status == RunStatus::ok ? "ok" : "blowup";
    m["error"] = h.error;
    m["steps"] = h.steps;
    m["final_time"] = h.final_state.t;
    m["warnings"] = h.warnings;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : out.files)
        files.push_back({{"name", f}, {"bytes", fs::file_size(dir / f)}, {"sha256", sha256_file(dir / f)}});
    m["files"] = files;
    write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
    out.files.push_back("manifest.json");
    if (log)
        *log << "steps " << h.steps << ", t = " << h.final_state.t << ", records " << h.records.size() << ", status "
             << (h.status == RunStatus::ok ? "ok" : "blowup") << "\n";
    return out;
}

std::vector<SweepRow> sweep_epsilon(const SimConfig& cfg, const std::vector<double>& eps_list, unsigned threads) {
    if (eps_list.empty()) throw ConfigError("sweep: --eps list is empty");
    std::vector<SimConfig> cases;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        SimConfig c = cfg;
        c.physics.eps = eps_list[i];
        if (!(eps_list[i] >= 2.0 * cfg.grid.spacing()))
            throw ConfigError("sweep: epsilon " + std::to_string(eps_list[i]) + " violates epsilon < 2h");
        c.output_dir = (fs::path(cfg.output_dir) / ("eps_" + std::to_string(i))).string();
        c.validate();
        cases.push_back(std::move(c));
    }

    std::vector<SweepRow> rows(cases.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(cases.size());
    auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) {
            try {
                const SimConfig& c = cases[i];
                const RunOutcome o = run_simulation(c);
                SweepRow& r = rows[i];
                r.eps = c.physics.eps;
                r.exit_code = o.exit_code;
                r.perimeter = c.scenario.perimeter(c.grid.d);
                r.surface = o.history.records.front().surface;
                r.surface_error = std::abs(r.surface - r.perimeter) / r.perimeter;
                r.radius = r.radius_oracle = r.radius_error = std::nan("");
                const bool circle = c.scenario.kind == ScenarioKind::circle && c.grid.d == 2;
                if (circle) r.radius = o.history.records.back().interface_length / kTwoPi;
                if (circle && c.physics.kappa1 == 0.0) {
                    if (auto ro = mcf_circle_oracle(c.scenario.radius, c.physics.kappa2, o.history.final_state.t)) {
                        r.radius_oracle = *ro;
                        r.radius_error = std::abs(r.radius - *ro) / *ro;
                    }
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cases.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
    std::string out = "eps,surface,perimeter,surface_error,radius,radius_oracle,radius_error,exit_code\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%.10g,%.10g,%.6e,%.10g,%.10g,%.6e,%d\n", r.eps, r.surface, r.perimeter,
                      r.surface_error, r.radius, r.radius_oracle, r.radius_error, r.exit_code);
        out += buf;
    }
    return out;
}

}  // namespace torusflow
