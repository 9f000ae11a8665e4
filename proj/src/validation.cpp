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

#include "torusflow/validation.hpp"

#include "torusflow/app.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/io.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace torusflow {

namespace fs = std::filesystem;

namespace presets {

SimConfig coupled_circle() { return SimConfig{}; }

SimConfig mcf_circle() {
    SimConfig c;
    c.physics.kappa1 = 0.0;
    c.scenario.u0 = VelocityRecipe::zero;
    c.stepping.policy = DtPolicy::fixed;
    c.stepping.dt = 1.25e-5;  // safety 1/8 of the reaction bound eps^2 / 4
    c.record_interval = 32;
    return c;
}

SimConfig static_stripe() {
    SimConfig c;
    c.grid.n = 128;
    c.scenario.kind = ScenarioKind::stripe;
    c.scenario.u0 = VelocityRecipe::zero;
    c.record_interval = 20;
    return c;
}

SimConfig translating_stripe() {
    SimConfig c = static_stripe();
    c.scenario.u0 = VelocityRecipe::translation;
    c.scenario.velocity = {0.0, 0.5, 0.0};
    return c;
}

}  // namespace presets

namespace {

// Pinned tolerances.
constexpr double kStepEnergySlack = 1e-8;      // per step, relative to E0
constexpr double kEnergyBudget = 1e-3;         // E(T) + dissipation <= (1 + this) E0
constexpr double kRuntimeLimit = 120.0;        // seconds
constexpr double kMcfRadiusTol = 0.03;         // relative
constexpr int kMcfCheckpoints = 5;
constexpr double kStripeLengthDrift = 1e-3;    // relative
constexpr double kNewtonianRateTol = 0.02;     // relative
constexpr double kSurfaceTol = 0.02;           // relative to perimeter
constexpr std::size_t kStressSamples = 10000;
constexpr double kMonotoneFloor = -1e-12;
constexpr double kDivergenceTol = 1e-10;
constexpr double kDensityCap = 2.0;
constexpr double kDensityFluctuation = 0.15;   // (max - min) / min
constexpr BrakkeTolerance kBrakkeTol{1e-2, 0.1};
constexpr double kTranslationBand = 0.05;
constexpr double kCurvatureTol = 0.05;         // relative
constexpr double kConvergenceFactor = 3.0;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RunRecord {
    History history;
    double seconds = 0.0;
};

// Reference runs computed once and shared between criteria.
class RunCache {
public:
    using Job = std::function<RunRecord()>;

    void add(const std::string& name, Job job) {
        if (!jobs_.count(name)) {
            jobs_[name] = std::move(job);
            order_.push_back(name);
        }
    }

    void execute(unsigned threads, std::ostream* progress) {
        std::atomic<std::size_t> next{0};
        std::mutex io;
        std::vector<std::exception_ptr> errors(order_.size());
        auto worker = [&]() {
            for (std::size_t i; (i = next.fetch_add(1)) < order_.size();) {
                try {
                    RunRecord r = jobs_[order_[i]]();
                    std::lock_guard<std::mutex> lock(io);
                    if (progress)
                        *progress << "  run " << order_[i] << ": " << r.history.steps << " steps, "
                                  << fmt("%.1f", r.seconds) << " s" << std::endl;
                    results_[order_[i]] = std::move(r);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(order_.size())));
        std::vector<std::thread> pool;
        for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    const RunRecord& get(const std::string& name) const { return results_.at(name); }
    bool has(const std::string& name) const { return results_.count(name) > 0; }
    const std::vector<std::string>& names() const { return order_; }

private:
    std::map<std::string, Job> jobs_;
    std::map<std::string, RunRecord> results_;
    std::vector<std::string> order_;
};

RunRecord timed_run(const SimConfig& cfg, RunHooks hooks = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord r;
    r.history = run(cfg, hooks);
    r.seconds = seconds_since(t0);
    return r;
}

double l2_norm(const SpectralVector& u) { return std::sqrt(2.0 * kinetic_energy(u)); }

// Stationary Newtonian check: phi = 1, shear u = A sin(2 pi y) e_x, p = 2.
// tau = e(u) gives u_t = lap(u) / 2, so E(t) = E0 exp(-4 pi^2 t).
struct NewtonianResult {
    double observed_rate = 0.0;
    double exact_rate = 0.0;
};

NewtonianResult newtonian_decay() {
    SimConfig cfg;
    cfg.grid.n = 64;
    cfg.physics.eps = 0.04;
    cfg.physics.law = StressLaw{2.0, 1.0, 1.0, 1.0, 1.0};
    cfg.scenario.u0 = VelocityRecipe::shear;
    const ModeSet basis = build_mode_basis(cfg.grid, cfg.resolved_cutoff());
    const Stepper stepper(cfg.physics, basis, true);
    SimState s;
    s.phi = ScalarField(cfg.grid, RealArray::Ones(static_cast<Eigen::Index>(cfg.grid.points())));
    s.u_hat = initial_velocity(cfg.scenario, basis);
    const double e0 = kinetic_energy(s.u_hat);
    const double T = 0.02;
    const int steps = 400;
    for (int n = 0; n < steps; ++n) s = stepper.step(s, T / steps);
    NewtonianResult r;
    r.observed_rate = -std::log(kinetic_energy(s.u_hat) / e0) / T;
    r.exact_rate = 4.0 * kPi * kPi;
    return r;
}

double band_mean_curvature(double radius) {
    SimConfig cfg;
    cfg.scenario.radius = radius;
    const ScalarField phi = initial_phase(cfg.scenario, cfg.profile(), cfg.grid);
    const CurvatureField hc = mean_curvature_field(phi, cfg.physics.eps);
    const ScalarField dens = surface_density(phi, cfg.physics.eps);
    const GridSpec& g = cfg.grid;
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        const auto idx = grid_index(g, p);
        const std::array<double, 3> x{idx[0] * g.spacing(), idx[1] * g.spacing(), 0.0};
        const auto i = static_cast<Eigen::Index>(p);
        if (std::abs(signed_distance(cfg.scenario, g.d, x)) > cfg.physics.eps || !hc.mask(i)) continue;
        const double h = std::hypot(hc.h[0](i), hc.h[1](i));
        num += h * dens.values(i);
        den += dens.values(i);
    }
    return num / den;
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(RunCache&)> plan;
    std::function<CriterionResult(const RunCache&, const fs::path&)> check;
};

CriterionResult result(int id, const char* name, bool ok, std::string detail) {
    return {id, name, ok, std::move(detail), 0.0};
}

void plan_coupled(RunCache& rc) {
    rc.add("coupled_circle", [] { return timed_run(presets::coupled_circle()); });
}

void plan_mcf(RunCache& rc) {
    rc.add("mcf_circle", [] { return timed_run(presets::mcf_circle()); });
}

void plan_stripes(RunCache& rc) {
    rc.add("static_stripe", [] { return timed_run(presets::static_stripe()); });
    rc.add("translating_stripe", [] { return timed_run(presets::translating_stripe()); });
}

SimConfig convergence_config(double dt) {
    SimConfig c = presets::coupled_circle();
    c.stepping.policy = DtPolicy::fixed;
    c.stepping.dt = dt;
    c.final_time = 0.005;
    c.record_interval = 1 << 30;
    return c;
}

constexpr double kConvergenceDt = 1e-5;

void plan_convergence(RunCache& rc) {
    for (int k = 0; k < 3; ++k) {
        const double dt = kConvergenceDt / (1 << k);
        rc.add("convergence_dt" + std::to_string(k), [dt] {
            RunHooks hooks;
            hooks.monitor_every_step = false;
            hooks.full_records = false;
            return timed_run(convergence_config(dt), hooks);
        });
    }
}

CriterionResult check_energy(const RunCache& rc, const fs::path&) {
    const RunRecord& r = rc.get("coupled_circle");
    const History& h = r.history;
    const double e0 = h.step_energy.front();
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_step = 0;
    for (std::size_t n = 1; n < h.step_energy.size(); ++n) {
        const double inc = (h.step_energy[n] - h.step_energy[n - 1]) / e0;
        if (inc > worst) {
            worst = inc;
            worst_step = n;
        }
    }
    const double budget = (h.step_energy.back() + h.accumulated_dissipation) / e0;
    const bool monotone = worst <= kStepEnergySlack;
    const bool balanced = budget <= 1.0 + kEnergyBudget;
    const bool fast = r.seconds <= kRuntimeLimit;
    const bool ok = h.status == RunStatus::ok && monotone && balanced && fast;
    return result(1, "energy_dissipation", ok,
                  fmt("steps=%zu max_step_increase/E0=%.3e (step %zu, limit %.0e) (E(T)+diss)/E0=%.6f (limit %.4f) "
                      "runtime=%.1fs (limit %.0fs)",
                      h.steps, worst, worst_step, kStepEnergySlack, budget, 1.0 + kEnergyBudget, r.seconds,
                      kRuntimeLimit));
}

CriterionResult check_mcf(const RunCache& rc, const fs::path&) {
    const RunRecord& r = rc.get("mcf_circle");
    const SimConfig cfg = presets::mcf_circle();
    const double T = cfg.final_time;
    std::string detail;
    bool ok = r.history.status == RunStatus::ok && r.seconds <= kRuntimeLimit;
    double worst = 0.0;
    int found = 0;
    for (int k = 1; k <= kMcfCheckpoints; ++k) {
        const double tk = T * k / kMcfCheckpoints;
        const EnergyRecord* rec = nullptr;
        for (const auto& e : r.history.records)
            if (std::abs(e.t - tk) <= 1e-12) rec = &e;
        if (!rec) continue;
        ++found;
        const double radius = rec->interface_length / kTwoPi;
        const double oracle = *mcf_circle_oracle(cfg.scenario.radius, cfg.physics.kappa2, rec->t);
        const double err = std::abs(radius - oracle) / oracle;
        worst = std::max(worst, err);
        detail += fmt("t=%.4f R=%.5f oracle=%.5f err=%.2f%%; ", rec->t, radius, oracle, 100.0 * err);
    }
    ok = ok && found == kMcfCheckpoints && worst <= kMcfRadiusTol;
    detail += fmt("worst=%.2f%% (limit %.0f%%) runtime=%.1fs", 100.0 * worst, 100.0 * kMcfRadiusTol, r.seconds);
    return result(2, "mcf_shrinking_circle", ok, detail);
}

CriterionResult check_stationary(const RunCache& rc, const fs::path&) {
    const History& h = rc.get("static_stripe").history;
    const double l0 = h.records.front().interface_length;
    double drift = 0.0;
    for (const auto& e : h.records) drift = std::max(drift, std::abs(e.interface_length - l0) / l0);
    const NewtonianResult nr = newtonian_decay();
    const double rate_err = std::abs(nr.observed_rate - nr.exact_rate) / nr.exact_rate;
    const bool ok = h.status == RunStatus::ok && drift <= kStripeLengthDrift && rate_err <= kNewtonianRateTol;
    return result(3, "stationary_states", ok,
                  fmt("stripe length drift=%.3e (limit %.0e); newtonian decay rate=%.5f exact=%.5f err=%.3f%% "
                      "(limit %.0f%%)",
                      drift, kStripeLengthDrift, nr.observed_rate, nr.exact_rate, 100.0 * rate_err,
                      100.0 * kNewtonianRateTol));
}

CriterionResult check_surface(const RunCache&, const fs::path&) {
    std::string detail;
    bool ok = true;
    for (ScenarioKind kind : {ScenarioKind::circle, ScenarioKind::stripe}) {
        std::vector<double> errs;
        for (double eps : {0.08, 0.04, 0.02}) {
            SimConfig cfg;
            cfg.scenario.kind = kind;
            cfg.physics.eps = eps;
            const ScalarField phi = initial_phase(cfg.scenario, cfg.profile(), cfg.grid);
            const double per = cfg.scenario.perimeter(cfg.grid.d);
            errs.push_back(std::abs(surface_measure(phi, eps) - per) / per);
        }
        const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];
        const bool close = errs[2] <= kSurfaceTol;
        ok = ok && monotone && close;
        detail += fmt("%s errors eps=0.08/0.04/0.02: %.3f%%/%.3f%%/%.3f%% (limit %.0f%% at 0.02, decreasing %s); ",
                      to_string(kind).c_str(), 100 * errs[0], 100 * errs[1], 100 * errs[2], 100 * kSurfaceTol,
                      monotone ? "yes" : "no");
    }
    return result(4, "surface_energy_consistency", ok, detail);
}

CriterionResult check_stress(const RunCache&, const fs::path&) {
    const StressLaw law;
    const AdmissibilityReport rep = validate_stress_law(law, 2, kStressSamples, 20240601);
    const bool finite = std::isfinite(rep.growth_max) && std::isfinite(rep.nu0_lower);
    const bool sound = rep.monotone_min >= kMonotoneFloor && finite && rep.growth_max > 0.0 && rep.nu0_lower > 0.0;
    StressLaw broken = law;
    broken.b_plus = -law.b_plus;
    broken.b_minus = -law.b_minus;
    const AdmissibilityReport bad = validate_stress_law(broken, 2, kStressSamples, 20240601);
    const bool mutation_caught = !bad.monotone_ok;
    return result(5, "stress_admissibility", sound && mutation_caught,
                  fmt("samples=%zu monotone_min=%.3e (floor %.0e) growth_max=%.4f coercive_min=%.4f; "
                      "negated-b mutation monotone_ok=%s",
                      rep.samples, rep.monotone_min, kMonotoneFloor, rep.growth_max, rep.nu0_lower,
                      bad.monotone_ok ? "true" : "false"));
}

CriterionResult check_invariants(const RunCache& rc, const fs::path&) {
    double div = 0.0, above = 0.0;
    std::size_t runs = 0;
    for (const auto& name : rc.names()) {
        if (!rc.has(name)) continue;
        const History& h = rc.get(name).history;
        ++runs;
        div = std::max(div, h.max_div);
        above = std::max(above, h.max_energy_above_cutoff);
        for (const auto& e : h.records) {
            div = std::max(div, e.max_div);
            above = std::max(above, e.energy_above_cutoff);
        }
    }
    const bool ok = runs > 0 && div <= kDivergenceTol && above == 0.0;
    return result(6, "divergence_and_galerkin", ok,
                  fmt("runs=%zu max|div u|=%.3e (limit %.0e) max energy above K=%.3e (must be 0)", runs, div,
                      kDivergenceTol, above));
}

CriterionResult check_density(const RunCache& rc, const fs::path&) {
    const History& h = rc.get("coupled_circle").history;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, t_hi = 0.0;
    for (const auto& e : h.records) {
        lo = std::min(lo, e.density_ratio);
        if (e.density_ratio > hi) {
            hi = e.density_ratio;
            t_hi = e.t;
        }
    }
    const double fluct = (hi - lo) / lo;
    const bool ok = hi <= kDensityCap && fluct <= kDensityFluctuation;
    return result(7, "density_ratio", ok,
                  fmt("D0=%.4f min=%.4f max=%.4f (at t=%.4f, cap %.1f) fluctuation=%.1f%% (limit %.0f%%)",
                      h.records.front().density_ratio, lo, hi, t_hi, kDensityCap, 100 * fluct,
                      100 * kDensityFluctuation));
}

CriterionResult check_brakke(const RunCache& rc, const fs::path&) {
    const auto mcf = brakke_inequality_check(rc.get("mcf_circle").history.records, "const1", kBrakkeTol);
    std::size_t failed = 0, skipped = 0;
    double worst = -std::numeric_limits<double>::infinity(), worst_t = 0.0;
    for (const auto& r : mcf) {
        if (r.skipped) ++skipped;
        else if (!r.passed) ++failed;
        const double margin = r.residual - (kBrakkeTol.abs + kBrakkeTol.rel * std::abs(r.rhs));
        if (!r.skipped && margin > worst) {
            worst = margin;
            worst_t = r.t1;
        }
    }
    const auto tr = brakke_inequality_check(rc.get("translating_stripe").history.records, "const1", kBrakkeTol);
    double lhs_max = 0.0, rhs_max = 0.0;
    std::size_t tr_skipped = 0;
    for (const auto& r : tr) {
        if (r.skipped) {
            ++tr_skipped;
            continue;
        }
        lhs_max = std::max(lhs_max, std::abs(r.lhs));
        rhs_max = std::max(rhs_max, std::abs(r.rhs));
    }
    const bool ok = !mcf.empty() && failed == 0 && skipped == 0 && !tr.empty() && tr_skipped == 0 &&
                    lhs_max <= kTranslationBand && rhs_max <= kTranslationBand;
    return result(8, "brakke_inequality", ok,
                  fmt("circle: %zu pairs, %zu failed, %zu skipped, worst margin %.3e at t=%.4f; translation: %zu pairs, "
                      "max|lhs|=%.3e max|rhs|=%.3e (band %.2f), %zu skipped",
                      mcf.size(), failed, skipped, worst, worst_t, tr.size(), lhs_max, rhs_max, kTranslationBand,
                      tr_skipped));
}

CriterionResult check_curvature(const RunCache&, const fs::path&) {
    std::string detail;
    bool ok = true;
    for (double r : {0.2, 0.25, 0.3}) {
        const double h = band_mean_curvature(r);
        const double err = std::abs(h * r - 1.0);
        ok = ok && err <= kCurvatureTol;
        detail += fmt("R=%.2f |H|=%.4f 1/R=%.4f err=%.2f%%; ", r, h, 1.0 / r, 100 * err);
    }
    detail += fmt("limit %.0f%%", 100 * kCurvatureTol);
    return result(9, "mean_curvature", ok, detail);
}

CriterionResult check_determinism(const RunCache&, const fs::path& work) {
    SimConfig cfg;
    cfg.grid.n = 64;
    cfg.physics.eps = 0.04;
    cfg.final_time = 0.002;
    cfg.record_interval = 5;
    cfg.snapshot_interval = 10;
    std::vector<std::string> csv;
    std::vector<RunOutcome> outcomes;
    for (int k = 0; k < 2; ++k) {
        cfg.output_dir = (work / ("determinism_" + std::to_string(k))).string();
        fs::remove_all(cfg.output_dir);
        outcomes.push_back(run_simulation(cfg));
        csv.push_back(read_file(fs::path(cfg.output_dir) / "run.csv"));
    }
    const bool same_csv = !csv[0].empty() && csv[0] == csv[1];

    const SimState& fin = outcomes[0].history.final_state;
    const Snapshot snap = make_snapshot(fin, cfg.physics.eps);
    const fs::path snap_path = work / "roundtrip.bin";
    write_snapshot(snap_path, snap);
    const Snapshot back = read_snapshot(snap_path);
    auto same_bits = [](const RealArray& a, const RealArray& b) {
        return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
    };
    bool snap_ok = back.grid == snap.grid && std::memcmp(&back.t, &snap.t, sizeof(double)) == 0 &&
                   same_bits(back.phi.values, snap.phi.values);
    for (int a = 0; a < snap.grid.d; ++a) snap_ok = snap_ok && same_bits(back.u[a], snap.u[a]);

    SimConfig varied;
    varied.grid = {2, 128};
    varied.cutoff = 20;
    varied.physics.eps = 0.03;
    varied.physics.law = StressLaw{2.5, 0.7, 1.3, 1.1, 0.1};
    varied.physics.mollifier = MollifierMode::grid;
    varied.scenario.kind = ScenarioKind::polyline;
    varied.scenario.vertices = {{0.2, 0.2}, {0.8, 0.25}, {0.6, 0.7}, {0.3, 0.75}};
    varied.scenario.u0 = VelocityRecipe::modes;
    varied.scenario.modes = {{{1, 2, 0}, 0, 0.05}, {{3, -1, 0}, 0, 1.0 / 3.0}};
    varied.radii = {0.1, 0.2, 0.4};
    varied.brakke_test.kind = TestFunction::Kind::gaussian_bump;
    varied.brakke_test.center = {0.3, 0.6, 0.5};
    varied.write_snapshots = false;
    varied.seed = 42;
    bool cfg_ok = true;
    for (const SimConfig& c : {SimConfig{}, varied, cfg}) cfg_ok = cfg_ok && parse_config(to_text(c)) == c;
    const auto manifest = nlohmann::json::parse(read_file(fs::path(cfg.output_dir) / "manifest.json"));
    cfg_ok = cfg_ok && parse_config(manifest.at("config").get<std::string>()) == cfg;

    return result(10, "determinism_and_io", same_csv && snap_ok && cfg_ok,
                  fmt("csv identical=%s (%zu bytes) snapshot bitwise=%s config round-trip=%s",
                      same_csv ? "yes" : "no", csv[0].size(), snap_ok ? "yes" : "no", cfg_ok ? "yes" : "no"));
}

CriterionResult check_convergence(const RunCache& rc, const fs::path&) {
    double un[3], mu[3];
    bool ran = true;
    for (int k = 0; k < 3; ++k) {
        const History& h = rc.get("convergence_dt" + std::to_string(k)).history;
        ran = ran && h.status == RunStatus::ok;
        un[k] = l2_norm(h.final_state.u_hat);
        mu[k] = h.records.back().surface;
    }
    const double ru = std::abs(un[0] - un[1]) / std::abs(un[1] - un[2]);
    const double rm = std::abs(mu[0] - mu[1]) / std::abs(mu[1] - mu[2]);
    const bool ok = ran && ru >= kConvergenceFactor && rm >= kConvergenceFactor;
    return result(11, "self_convergence", ok,
                  fmt("dt=%.2e/%.2e/%.2e T=%.4f: |u| diffs %.3e, %.3e ratio=%.3f; mu diffs %.3e, %.3e ratio=%.3f "
                      "(limit %.1f; observed orders %.2f, %.2f)",
                      kConvergenceDt, kConvergenceDt / 2, kConvergenceDt / 4, convergence_config(1.0).final_time,
                      std::abs(un[0] - un[1]), std::abs(un[1] - un[2]), ru, std::abs(mu[0] - mu[1]),
                      std::abs(mu[1] - mu[2]), rm, kConvergenceFactor, std::log2(ru), std::log2(rm)));
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "energy_dissipation", plan_coupled, check_energy},
        {2, "mcf_shrinking_circle", plan_mcf, check_mcf},
        {3, "stationary_states", plan_stripes, check_stationary},
        {4, "surface_energy_consistency", [](RunCache&) {}, check_surface},
        {5, "stress_admissibility", [](RunCache&) {}, check_stress},
        {6, "divergence_and_galerkin",
         [](RunCache& rc) {
             plan_coupled(rc);
             plan_mcf(rc);
             plan_stripes(rc);
             plan_convergence(rc);
         },
         check_invariants},
        {7, "density_ratio", plan_coupled, check_density},
        {8, "brakke_inequality", [](RunCache& rc) { plan_mcf(rc), plan_stripes(rc); }, check_brakke},
        {9, "mean_curvature", [](RunCache&) {}, check_curvature},
        {10, "determinism_and_io", [](RunCache&) {}, check_determinism},
        {11, "self_convergence", plan_convergence, check_convergence},
    };
    return all;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const ValidationOptions& opts) {
    fs::create_directories(opts.work_dir);
    std::vector<const Criterion*> selected;
    for (const auto& c : criteria())
        if (opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), c.id) != opts.only.end())
            selected.push_back(&c);
    for (int id : opts.only)
        if (id < 1 || id > static_cast<int>(criteria().size()))
            throw ConfigError("unknown criterion " + std::to_string(id));

    RunCache cache;
    for (const auto* c : selected) c->plan(cache);
    if (opts.progress) *opts.progress << "reference runs: " << cache.names().size() << std::endl;
    cache.execute(opts.threads ? opts.threads : worker_threads(), opts.progress);

    std::vector<CriterionResult> out;
    for (const auto* c : selected) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = c->check(cache, opts.work_dir);
        } catch (const std::exception& e) {
            r = result(c->id, c->name, false, std::string("error: ") + e.what());
        }
        r.seconds = seconds_since(t0);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return fmt("criterion %2d %-28s %s %7.1fs  ", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds) +
           r.detail;
}

std::string results_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results)
        arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds},
                       {"detail", r.detail}});
    return arr.dump(2) + "\n";
}

}  // namespace torusflow
