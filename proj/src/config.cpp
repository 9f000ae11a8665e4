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

#include "torusflow/config.hpp"

#include "torusflow/errors.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

namespace torusflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) bad(key, "expected a number, got '" + v + "'");
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    long x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) bad(key, "expected an integer, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const long x = to_long(key, v);
    if (x < -(1L << 30) || x > (1L << 30)) bad(key, "integer out of range");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    bad(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (v.empty()) return out;
    for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
    return out;
}

std::array<double, 3> to_point(const std::string& key, const std::string& v) {
    const auto xs = to_doubles(key, v);
    if (xs.size() < 2 || xs.size() > 3) bad(key, "expected 2 or 3 comma-separated numbers");
    std::array<double, 3> p{0.5, 0.5, 0.5};
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] = xs[i];
    return p;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const double* xs, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (i ? ", " : "") + fmt(xs[i]);
    return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Key {
    const char* name;
    std::function<void(SimConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const SimConfig&)> get;
};

#define TF_DOUBLE(KEY, FIELD)                                                                        \
    Key {                                                                                            \
        KEY, [](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_double(k, v); }, \
            [](const SimConfig& c) { return fmt(c.FIELD); }                                          \
    }

#define TF_INT(KEY, FIELD)                                                                        \
    Key {                                                                                         \
        KEY, [](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = to_int(k, v); }, \
            [](const SimConfig& c) { return std::to_string(c.FIELD); }                            \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        TF_INT("grid.d", grid.d),
        TF_INT("grid.N", grid.n),
        {"grid.K",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.cutoff = v == "auto" ? 0 : to_int(k, v); },
         [](const SimConfig& c) { return c.cutoff == 0 ? std::string("auto") : std::to_string(c.cutoff); }},
        TF_DOUBLE("physics.epsilon", physics.eps),
        TF_DOUBLE("physics.gamma", physics.gamma),
        TF_DOUBLE("physics.kappa1", physics.kappa1),
        TF_DOUBLE("physics.kappa2", physics.kappa2),
        TF_DOUBLE("physics.p", physics.law.p),
        TF_DOUBLE("physics.a_plus", physics.law.a_plus),
        TF_DOUBLE("physics.b_plus", physics.law.b_plus),
        TF_DOUBLE("physics.a_minus", physics.law.a_minus),
        TF_DOUBLE("physics.b_minus", physics.law.b_minus),
        {"physics.mollifier",
         [](SimConfig& c, const std::string&, const std::string& v) { c.physics.mollifier = mollifier_mode_from_string(v); },
         [](const SimConfig& c) { return to_string(c.physics.mollifier); }},
        {"physics.cap_scale",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.cap_scale = v == "auto" ? 0.0 : to_double(k, v); },
         [](const SimConfig& c) { return c.cap_scale == 0.0 ? std::string("auto") : fmt(c.cap_scale); }},
        {"scenario.kind",
         [](SimConfig& c, const std::string&, const std::string& v) { c.scenario.kind = scenario_kind_from_string(v); },
         [](const SimConfig& c) { return to_string(c.scenario.kind); }},
        {"scenario.center",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.scenario.center = to_point(k, v); },
         [](const SimConfig& c) { return fmt_list(c.scenario.center.data(), 3); }},
        TF_DOUBLE("scenario.radius", scenario.radius),
        {"scenario.center2",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.scenario.center2 = to_point(k, v); },
         [](const SimConfig& c) { return fmt_list(c.scenario.center2.data(), 3); }},
        TF_DOUBLE("scenario.radius2", scenario.radius2),
        TF_DOUBLE("scenario.y0", scenario.y0),
        TF_DOUBLE("scenario.y1", scenario.y1),
        {"scenario.vertices",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.scenario.vertices.clear();
             if (v.empty()) return;
             for (const auto& item : split(v, ';')) {
                 const auto xy = to_doubles(k, item);
                 if (xy.size() != 2) bad(k, "each vertex needs 2 comma-separated numbers");
                 c.scenario.vertices.push_back({xy[0], xy[1]});
             }
         },
         [](const SimConfig& c) {
             std::string out;
             for (std::size_t i = 0; i < c.scenario.vertices.size(); ++i)
                 out += (i ? "; " : "") + fmt_list(c.scenario.vertices[i].data(), 2);
             return out;
         }},
        {"scenario.u0",
         [](SimConfig& c, const std::string&, const std::string& v) { c.scenario.u0 = velocity_recipe_from_string(v); },
         [](const SimConfig& c) { return to_string(c.scenario.u0); }},
        TF_DOUBLE("scenario.u0.amplitude", scenario.amplitude),
        TF_INT("scenario.u0.wavenumber", scenario.wavenumber),
        {"scenario.u0.modes",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.scenario.modes.clear();
             if (v.empty()) return;
             for (const auto& item : split(v, ';')) {
                 const auto f = split(item, ',');
                 if (f.size() != 5) bad(k, "each mode is k1, k2, k3, polarization, amplitude");
                 ModeAmplitude m;
                 m.k = {to_int(k, f[0]), to_int(k, f[1]), to_int(k, f[2])};
                 m.polarization = to_int(k, f[3]);
                 m.amplitude = to_double(k, f[4]);
                 c.scenario.modes.push_back(m);
             }
         },
         [](const SimConfig& c) {
             std::string out;
             for (std::size_t i = 0; i < c.scenario.modes.size(); ++i) {
                 const auto& m = c.scenario.modes[i];
                 out += (i ? "; " : "") + std::to_string(m.k[0]) + ", " + std::to_string(m.k[1]) + ", " +
                        std::to_string(m.k[2]) + ", " + std::to_string(m.polarization) + ", " + fmt(m.amplitude);
             }
             return out;
         }},
        {"scenario.u0.velocity",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             const auto xs = to_doubles(k, v);
             if (xs.size() < 2 || xs.size() > 3) bad(k, "expected 2 or 3 comma-separated numbers");
             c.scenario.velocity = {0.0, 0.0, 0.0};
             for (std::size_t i = 0; i < xs.size(); ++i) c.scenario.velocity[i] = xs[i];
         },
         [](const SimConfig& c) { return fmt_list(c.scenario.velocity.data(), 3); }},
        {"stepping.dt_policy",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             if (v == "fixed") c.stepping.policy = DtPolicy::fixed;
             else if (v == "auto") c.stepping.policy = DtPolicy::automatic;
             else bad(k, "must be fixed or auto");
         },
         [](const SimConfig& c) { return std::string(c.stepping.policy == DtPolicy::fixed ? "fixed" : "auto"); }},
        TF_DOUBLE("stepping.dt", stepping.dt),
        TF_DOUBLE("stepping.safety", stepping.safety),
        {"stepping.dealias",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.stepping.dealias = to_bool(k, v); },
         [](const SimConfig& c) { return fmt_bool(c.stepping.dealias); }},
        TF_DOUBLE("stepping.T", final_time),
        TF_INT("diagnostics.record_interval", record_interval),
        {"diagnostics.radii",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.radii = v == "auto" ? std::vector<double>{} : to_doubles(k, v);
         },
         [](const SimConfig& c) { return c.radii.empty() ? std::string("auto") : fmt_list(c.radii.data(), c.radii.size()); }},
        TF_INT("diagnostics.center_stride", center_stride),
        {"diagnostics.brakke_test",
         [](SimConfig& c, const std::string&, const std::string& v) { c.brakke_test.kind = test_function_kind_from_string(v); },
         [](const SimConfig& c) { return to_string(c.brakke_test.kind); }},
        {"diagnostics.bump_center",
         [](SimConfig& c, const std::string& k, const std::string& v) { c.brakke_test.center = to_point(k, v); },
         [](const SimConfig& c) { return fmt_list(c.brakke_test.center.data(), 3); }},
        TF_DOUBLE("diagnostics.bump_width", brakke_test.width),
        TF_DOUBLE("diagnostics.brakke_tol_abs", brakke_tol.abs),
        TF_DOUBLE("diagnostics.brakke_tol_rel", brakke_tol.rel),
        {"output.directory", [](SimConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
         [](const SimConfig& c) { return c.output_dir; }},
        TF_INT("output.snapshot_interval", snapshot_interval),
        {"output.formats",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.write_csv = false;
             c.write_snapshots = false;
             if (v.empty() || v == "none") return;
             for (const auto& f : split(v, ',')) {
                 if (f == "csv") c.write_csv = true;
                 else if (f == "snapshots") c.write_snapshots = true;
                 else bad(k, "unknown format '" + f + "' (csv, snapshots)");
             }
         },
         [](const SimConfig& c) {
             if (c.write_csv && c.write_snapshots) return std::string("csv, snapshots");
             if (c.write_csv) return std::string("csv");
             if (c.write_snapshots) return std::string("snapshots");
             return std::string("none");
         }},
        {"seed", [](SimConfig& c, const std::string& k, const std::string& v) {
             const long s = to_long(k, v);
             if (s < 0) bad(k, "must be >= 0");
             c.seed = static_cast<std::uint64_t>(s);
         },
         [](const SimConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

#undef TF_DOUBLE
#undef TF_INT

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void SimConfig::validate() const {
    grid.validate();
    const double h = grid.spacing();
    const int k = resolved_cutoff();
    require(cutoff >= 0, "grid.K must be >= 1 (or auto)");
    require(k >= 1 && 3 * k <= grid.n, "grid.K must satisfy 1 <= K <= N/3");

    require(physics.eps > 0.0, "physics.epsilon must be > 0");
    require(physics.eps >= 2.0 * h, "physics.epsilon: epsilon < 2h (interface under-resolved)");
    require(physics.gamma > 0.0 && physics.gamma < 0.5, "physics.gamma must lie in (0, 1/2)");
    require(physics.kappa1 >= 0.0 && std::isfinite(physics.kappa1), "physics.kappa1 must be >= 0");
    require(physics.kappa2 > 0.0 && std::isfinite(physics.kappa2), "physics.kappa2 must be > 0");
    physics.law.validate();
    require(physics.law.p >= 2.0, "physics.p must be >= 2");
    mollifier_kernel(grid, physics.eps, physics.gamma, physics.mollifier);
    require(cap_scale >= 0.0, "physics.cap_scale must be > 0 (or auto)");

    scenario.validate(grid.d);
    require(resolved_cap_scale() > 0.0, "physics.cap_scale must be > 0");

    require(stepping.dt > 0.0 && std::isfinite(stepping.dt), "stepping.dt must be > 0");
    require(stepping.safety > 0.0 && stepping.safety <= 1.0, "stepping.safety must lie in (0, 1]");
    require(final_time >= 0.0 && std::isfinite(final_time), "stepping.T must be >= 0");

    require(record_interval >= 1, "diagnostics.record_interval must be >= 1");
    for (double r : radii) require(r > 2.0 * h && r <= 0.5, "diagnostics.radii must lie in (2h, 1/2]");
    require(center_stride >= 1, "diagnostics.center_stride must be >= 1");
    require(brakke_test.width > 0.0, "diagnostics.bump_width must be > 0");
    for (int a = 0; a < grid.d; ++a) {
        const double c = brakke_test.center[static_cast<std::size_t>(a)];
        require(c >= 0.0 && c < 1.0, "diagnostics.bump_center must lie in [0,1)^d");
    }
    require(brakke_tol.abs >= 0.0 && brakke_tol.rel >= 0.0, "diagnostics.brakke_tol_* must be >= 0");

    require(!output_dir.empty(), "output.directory must not be empty");
    require(snapshot_interval >= 0, "output.snapshot_interval must be >= 0");
}

std::vector<std::string> SimConfig::warnings() const {
    std::vector<std::string> out;
    if (!physics.law.admissible(grid.d))
        out.push_back("physics.p = " + fmt(physics.law.p) + " is at or below (d+2)/2; existence theory does not cover it");
    for (auto& w : profile_warnings(scenario, profile(), grid)) out.push_back(std::move(w));
    return out;
}

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
        if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        it->set(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

std::string to_text(const SimConfig& cfg) {
    std::string out;
    for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(cfg) + "\n";
    return out;
}

}  // namespace torusflow
