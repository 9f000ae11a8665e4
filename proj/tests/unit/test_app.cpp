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

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>

using namespace torusflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("torusflow_unit_" + name);
    fs::remove_all(p);
    return p;
}

SimConfig small_run(const fs::path& dir) {
    SimConfig c;
    c.grid.n = 64;
    c.physics.eps = 0.04;
    c.final_time = 0.002;
    c.record_interval = 4;
    c.snapshot_interval = 8;
    c.output_dir = dir.string();
    return c;
}

}  // namespace

TEST_CASE("empty config gives the documented defaults") {
    const SimConfig c = parse_config("");
    CHECK(c.grid.d == 2);
    CHECK(c.grid.n == 256);
    CHECK(c.physics.eps == 0.02);
    CHECK(c.physics.gamma == 0.25);
    CHECK(c.physics.kappa1 == 1.0);
    CHECK(c.physics.kappa2 == 1.0);
    CHECK(c.physics.law == StressLaw{});
    CHECK(c.physics.law.p == 3.0);
    CHECK(c.scenario.kind == ScenarioKind::circle);
    CHECK(c.scenario.radius == 0.25);
    CHECK(c.final_time == 0.02);
    CHECK(c.resolved_cutoff() == 64);
    CHECK(c == SimConfig{});
}

TEST_CASE("config errors name the violated constraint") {
    CHECK_THROWS_WITH_AS(parse_config("grid.N = 64\nphysics.epsilon = 0.001\n"), doctest::Contains("epsilon < 2h"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("scenario.kind = circle\nscenario.radius = 0.6\n"),
                         doctest::Contains("radius exceeds 0.45"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("physics.epsiln = 0.02"), doctest::Contains("physics.epsiln"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("grid.N = 12x"), doctest::Contains("grid.N"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("grid.N = 64\ngrid.N = 128"), doctest::Contains("grid.N"), ConfigError);
    CHECK_THROWS_AS(parse_config("physics.p = 1.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid.K = 200"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario.kind = hexagon"), ConfigError);
    CHECK_THROWS_AS(parse_config("just text"), ConfigError);
}

TEST_CASE("config comments and round trip") {
    const SimConfig c = parse_config(
        "# comment\n"
        "grid.N = 128   # trailing\n"
        "physics.epsilon = 0.03\n"
        "physics.p = 2.5\n"
        "physics.mollifier = grid\n"
        "scenario.kind = polyline\n"
        "scenario.vertices = 0.2,0.2; 0.8,0.25; 0.6,0.7; 0.3,0.75\n"
        "scenario.u0 = modes\n"
        "scenario.u0.modes = 1,2,0,0,0.05; 3,-1,0,0,0.1\n"
        "diagnostics.brakke_test = gaussian_bump\n"
        "diagnostics.bump_center = 0.3, 0.6\n"
        "diagnostics.radii = 0.1, 0.2\n"
        "output.formats = csv\n"
        "seed = 42\n");
    CHECK(c.grid.n == 128);
    CHECK(c.scenario.vertices.size() == 4);
    CHECK(c.scenario.modes.size() == 2);
    CHECK(c.radii.size() == 2);
    CHECK_FALSE(c.write_snapshots);
    CHECK(parse_config(to_text(c)) == c);
    CHECK(parse_config(to_text(SimConfig{})) == SimConfig{});

    SimConfig odd;
    odd.physics.eps = 0.1 / 3.0;
    odd.final_time = 1.0 / 7.0;
    CHECK(parse_config(to_text(odd)) == odd);
}

TEST_CASE("warnings do not block") {
    const SimConfig c = parse_config("physics.p = 2");
    CHECK_FALSE(c.warnings().empty());
}

TEST_CASE("csv layout") {
    const auto& cols = timeseries_columns();
    CHECK(cols == std::vector<std::string>{"t", "kinetic", "surface", "total", "dissipation_visc", "dissipation_ac",
                                           "density_ratio", "discrepancy_max", "phi_min", "phi_max",
                                           "interface_length", "brakke_lhs", "brakke_rhs"});
    EnergyRecord r;
    r.t = 0.1;
    const std::string csv = format_timeseries({r});
    CHECK(csv.substr(0, csv.find('\n')) ==
          "t,kinetic,surface,total,dissipation_visc,dissipation_ac,density_ratio,discrepancy_max,phi_min,phi_max,"
          "interface_length,brakke_lhs,brakke_rhs");
    CHECK(csv.find("0.10000000000000001,") != std::string::npos);
}

TEST_CASE("snapshot encoding") {
    const GridSpec g{2, 16};
    Snapshot s;
    s.grid = g;
    s.t = 0.125;
    s.eps = 0.02;
    s.phi = ScalarField(g, RealArray::LinSpaced(256, -1.0, 1.0));
    s.u = VectorField(g);
    s.u[0].setConstant(1.0 / 3.0);
    s.u[1] = RealArray::LinSpaced(256, 0.0, 1e-300);
    const std::string bytes = encode_snapshot(s);
    REQUIRE(bytes.size() == 64 + 8 * 256 * 3);
    CHECK(bytes.substr(0, 8) == "TORUSFLW");
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);
    CHECK(static_cast<unsigned char>(bytes[16]) == 2);
    CHECK(static_cast<unsigned char>(bytes[24]) == 16);
    for (std::size_t i = 48; i < 64; ++i) CHECK(bytes[i] == 0);
    double t;
    std::memcpy(&t, bytes.data() + 32, 8);
    CHECK(t == 0.125);

    const Snapshot b = decode_snapshot(bytes);
    CHECK(b.grid == g);
    CHECK(std::memcmp(b.phi.values.data(), s.phi.values.data(), 256 * 8) == 0);
    CHECK(std::memcmp(b.u[1].data(), s.u[1].data(), 256 * 8) == 0);

    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS(decode_snapshot(bad));
    CHECK_THROWS(decode_snapshot(bytes.substr(0, bytes.size() - 1)));
}

TEST_CASE("sha256 of a known file") {
    const fs::path dir = scratch("sha");
    fs::create_directories(dir);
    write_file_atomic(dir / "abc.txt", "abc");
    CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK_FALSE(fs::exists(dir / "abc.txt.tmp"));
}

TEST_CASE("run writes outputs, manifest last and deterministic") {
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    const SimConfig ca = small_run(a);
    const RunOutcome oa = run_simulation(ca);
    CHECK(oa.exit_code == kExitOk);
    CHECK(oa.files.back() == "manifest.json");
    CHECK(fs::exists(a / "snap_000000.bin"));
    const std::string csv = read_file(a / "run.csv");
    const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
    CHECK(rows == oa.history.records.size());

    const auto m = nlohmann::json::parse(read_file(a / "manifest.json"));
    CHECK(m["status"] == "ok");
    CHECK(parse_config(m["config"].get<std::string>()) == ca);
    for (const auto& f : m["files"]) CHECK(sha256_file(a / f["name"].get<std::string>()) == f["sha256"]);

    run_simulation(small_run(b));
    CHECK(read_file(b / "run.csv") == csv);

    const Snapshot last = read_snapshot(a / oa.files[oa.files.size() - 3]);
    const Snapshot mem = make_snapshot(oa.history.final_state, ca.physics.eps);
    CHECK(last.t == mem.t);
    CHECK(std::memcmp(last.phi.values.data(), mem.phi.values.data(), 8 * mem.phi.values.size()) == 0);
}

TEST_CASE("blow-up keeps partial outputs") {
    const fs::path dir = scratch("blowup");
    SimConfig c = small_run(dir);
    c.stepping.policy = DtPolicy::fixed;
    c.stepping.dt = 0.05;
    c.final_time = 0.5;
    const RunOutcome o = run_simulation(c);
    CHECK(o.exit_code == kExitBlowUp);
    CHECK(fs::exists(dir / "blowup.txt"));
    CHECK(fs::exists(dir / "run.csv"));
    CHECK(nlohmann::json::parse(read_file(dir / "manifest.json"))["status"] == "blowup");
}

TEST_CASE("epsilon sweep") {
    const fs::path dir = scratch("sweep");
    SimConfig c = small_run(dir);
    c.final_time = 0.0005;
    c.write_snapshots = false;
    CHECK_THROWS_AS(sweep_epsilon(c, {0.04, 0.01}, 2), ConfigError);
    CHECK_FALSE(fs::exists(dir / "eps_0"));
    const auto one = sweep_epsilon(c, {0.05}, 1);
    REQUIRE(one.size() == 1);
    const auto rows = sweep_epsilon(c, {0.08, 0.04}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].surface_error > rows[1].surface_error);
    CHECK(format_sweep(rows).find("eps,surface") == 0);
}

TEST_CASE("thread cap from the environment") {
    ::setenv("TORUSFLOW_THREADS", "3", 1);
    CHECK(worker_threads() == 3);
    ::setenv("TORUSFLOW_THREADS", "zero", 1);
    CHECK(worker_threads() >= 1);
    ::unsetenv("TORUSFLOW_THREADS");
}
