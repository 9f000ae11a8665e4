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
#include "torusflow/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace torusflow;

namespace {

SimConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

int cmd_run(const std::string& path, const std::string& out_dir) {
    SimConfig cfg = load_config(path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const RunOutcome o = run_simulation(cfg, &std::cerr);
    std::cout << cfg.output_dir << "\n";
    return o.exit_code;
}

int cmd_validate(const ValidationOptions& opts, const std::string& json_path) {
    const auto results = run_acceptance(opts);
    bool ok = true;
    for (const auto& r : results) {
        std::cout << format_result(r) << "\n";
        ok = ok && r.passed;
    }
    const std::filesystem::path out = json_path.empty() ? opts.work_dir / "validation.json" : std::filesystem::path(json_path);
    write_file_atomic(out, results_json(results));
    std::cout << (ok ? "all criteria passed" : "acceptance failed") << "; report " << out.string() << "\n";
    return ok ? kExitOk : kExitAcceptance;
}

int cmd_sweep(const std::string& path, const std::vector<double>& eps, const std::string& out_dir) {
    SimConfig cfg = load_config(path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const auto rows = sweep_epsilon(cfg, eps, worker_threads());
    const std::string table = format_sweep(rows);
    std::filesystem::create_directories(cfg.output_dir);
    write_file_atomic(std::filesystem::path(cfg.output_dir) / "sweep.csv", table);
    std::cout << table;
    int code = kExitOk;
    for (const auto& r : rows) code = std::max(code, r.exit_code);
    return code;
}

void print_stats(const char* name, const RealArray& f) {
    std::printf("  %-4s min % .6e  max % .6e  mean % .6e\n", name, f.minCoeff(), f.maxCoeff(), f.mean());
}

int cmd_info(const std::string& path) {
    const Snapshot s = read_snapshot(path);
    std::printf("%s\n  d %d  N %d  t %.10g  eps %.10g  bytes %ju\n", path.c_str(), s.grid.d, s.grid.n, s.t, s.eps,
                static_cast<std::uintmax_t>(std::filesystem::file_size(path)));
    print_stats("phi", s.phi.values);
    static const char* names[] = {"u1", "u2", "u3"};
    double ke = 0.0;
    for (int a = 0; a < s.grid.d; ++a) {
        print_stats(names[a], s.u[a]);
        ke += 0.5 * s.u[a].square().mean();
    }
    std::printf("  kinetic %.10g\n", ke);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffuse-interface two-phase non-Newtonian flow on the periodic torus"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config, out_dir, json_path, snapshot;
    std::vector<double> eps;
    ValidationOptions vopts;
    std::string work_dir = vopts.work_dir.string();

    auto* run = app.add_subcommand("run", "Run one simulation");
    run->add_option("config", config, "Config file")->required();
    run->add_option("-o,--output", out_dir, "Override output.directory");

    auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
    validate->add_option("--work-dir", work_dir, "Scratch directory");
    validate->add_option("--only", vopts.only, "Criterion ids")->delimiter(',');
    validate->add_option("--json", json_path, "Report path (default <work-dir>/validation.json)");

    auto* sweep = app.add_subcommand("sweep", "Repeat a run over a list of epsilon values");
    sweep->add_option("config", config, "Config file")->required();
    sweep->add_option("--eps", eps, "Comma-separated epsilon list")->required()->delimiter(',');
    sweep->add_option("-o,--output", out_dir, "Override output.directory");

    auto* info = app.add_subcommand("info", "Describe a snapshot file");
    info->add_option("snapshot", snapshot, "Snapshot file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, out_dir);
        if (*validate) {
            vopts.work_dir = work_dir;
            vopts.progress = &std::cerr;
            return cmd_validate(vopts, json_path);
        }
        if (*sweep) return cmd_sweep(config, eps, out_dir);
        if (*info) return cmd_info(snapshot);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowUp;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
