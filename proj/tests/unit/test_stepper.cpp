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
#include "torusflow/stepper.hpp"

#include <doctest.h>

#include <cmath>

using namespace torusflow;

namespace {

ScalarField sample(const GridSpec& g, auto fn) {
    ScalarField f(g);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const auto i = grid_index(g, p);
        f.values(static_cast<Eigen::Index>(p)) = fn(i[0] * g.spacing(), i[1] * g.spacing());
    }
    return f;
}

ScalarField constant(const GridSpec& g, double c) {
    return ScalarField(g, RealArray::Constant(static_cast<Eigen::Index>(g.points()), c));
}

double max_abs(const SpectralVector& v) {
    double m = 0.0;
    for (int a = 0; a < v.grid.d; ++a) m = std::max(m, v[a].abs().maxCoeff());
    return m;
}

SpectralVector low_mode_velocity(const GridSpec& g) {
    Scenario s;
    s.u0 = VelocityRecipe::modes;
    s.modes = {{{1, 1, 0}, 0, 0.3}, {{1, 3, 0}, 0, 0.2}, {{1, -3, 0}, 0, 0.1}, {{1, -1, 0}, 0, 0.25}};
    return initial_velocity(s, build_mode_basis(g, 4));
}

}  // namespace

TEST_CASE("capillary tensor") {
    const GridSpec g{2, 64};
    const MollifierKernel none = mollifier_kernel(g, 0.05, 0.25, MollifierMode::none);
    const SymTensorField zero = capillary_tensor(constant(g, 0.3), none, 0.05, 1.0);
    for (const auto& e : zero.entries) CHECK(e.abs().maxCoeff() == 0.0);

    const double eps = 0.05;
    const ScalarField phi = sample(g, [&](double, double y) { return std::tanh((0.25 - std::abs(y - 0.5)) / eps); });
    const SymTensorField t = capillary_tensor(phi, none, eps, 1.0);
    CHECK(t(0, 0).abs().maxCoeff() < 1e-12);
    CHECK(t(0, 1).abs().maxCoeff() < 1e-12);
    const VectorField gp = gradient(phi);
    CHECK((t(1, 1) - eps / sigma_const() * gp[1].square()).abs().maxCoeff() < 1e-12);

    const MollifierKernel wide = mollifier_kernel(g, eps, 0.25, MollifierMode::interface);
    const SymTensorField tm = capillary_tensor(phi, wide, eps, 1.0);
    CHECK(integrate(g, tm(1, 1)) == doctest::Approx(integrate(g, t(1, 1))).epsilon(1e-12));
}

TEST_CASE("momentum right-hand side oracles") {
    const GridSpec g{2, 64};
    const ModeSet basis = build_mode_basis(g, 16);
    PhysicsParams phys;
    phys.eps = 0.05;
    const MollifierKernel kern = mollifier_kernel(g, phys.eps, phys.gamma, phys.mollifier);
    SimState s;
    s.u_hat = SpectralVector(g);
    s.phi = constant(g, 1.0);
    CHECK(max_abs(momentum_rhs(s, phys, basis, kern)) == 0.0);

    phys.mollifier = MollifierMode::none;
    const MollifierKernel none = mollifier_kernel(g, phys.eps, phys.gamma, phys.mollifier);
    s.phi = sample(g, [&](double, double y) { return std::tanh((0.25 - std::abs(y - 0.5)) / phys.eps); });
    CHECK(max_abs(momentum_rhs(s, phys, basis, none)) <= 1e-8);
}

TEST_CASE("newtonian stress term is the halved laplacian") {
    const GridSpec g{2, 32};
    StressLaw law{2.0, 1.0, 1.0, 1.0, 1.0};
    Scenario sc;
    sc.u0 = VelocityRecipe::modes;
    sc.modes = {{{1, 2, 0}, 0, 0.4}};
    const SpectralVector u = initial_velocity(sc, build_mode_basis(g, 8));
    const SpectralVector a = stress_term(u, constant(g, 0.2), law, 8);
    const double factor = -2.0 * kPi * kPi * 5.0;
    for (int c = 0; c < 2; ++c) CHECK((a[c] - factor * u[c]).abs().maxCoeff() < 1e-10);
}

TEST_CASE("capillary work cancels the transport work") {
    const GridSpec g{2, 64};
    const double eps = 0.1;
    const ScalarField phi = sample(g, [](double x, double y) {
        return 0.6 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y) + 0.3 * std::cos(kTwoPi * 2 * y);
    });
    const SpectralVector u = low_mode_velocity(g);
    const MollifierKernel kern = mollifier_kernel(g, eps, 0.25, MollifierMode::interface);

    auto imbalance = [&](double sign) {
        const SpectralVector d = capillary_force(phi, kern, eps, sign, 16);
        double work = 0.0;
        for (int a = 0; a < 2; ++a) work += spectral_inner(g, d[a], u[a]);
        const VectorField v = inverse(mollify(u, kern));
        const VectorField gp = gradient(phi);
        const ScalarField lap = laplacian(phi);
        // transport changes the surface energy by (1/sigma) int (-eps lap phi + W'/eps)(-v . grad phi)
        RealArray rate = RealArray::Zero(static_cast<Eigen::Index>(g.points()));
        for (int a = 0; a < 2; ++a) rate -= v[a] * gp[a];
        const RealArray mu = -eps * lap.values + phi.values.unaryExpr([](double p) { return w_prime(p); }) / eps;
        const double transport = integrate(g, mu * rate) / sigma_const();
        return std::pair{work + transport, std::abs(work)};
    };
    const auto [ok, scale] = imbalance(1.0);
    CHECK(scale > 1e-3);
    CHECK(std::abs(ok) < 1e-10 * scale);
    const auto [broken, _] = imbalance(-1.0);
    CHECK(std::abs(broken) > 1.0 * scale);
}

TEST_CASE("allen-cahn step equilibria") {
    const GridSpec g{2, 32};
    PhysicsParams phys;
    phys.eps = 0.1;
    const MollifierKernel kern = mollifier_kernel(g, phys.eps, phys.gamma, phys.mollifier);
    const SpectralVector zero(g);
    CHECK((ac_step(constant(g, 1.0), zero, phys, kern, 1e-3).values - 1.0).abs().maxCoeff() < 1e-15);
    CHECK(ac_step(constant(g, 0.0), zero, phys, kern, 1e-3).values.abs().maxCoeff() == 0.0);
}

TEST_CASE("stable dt bounds") {
    PhysicsParams phys;
    phys.eps = 0.04;
    phys.kappa1 = 0.0;
    StepParams stp;
    stp.safety = 0.5;
    for (int n : {128, 256}) {
        SimState s;
        s.u_hat = SpectralVector({2, n});
        Scenario c;
        s.phi = initial_phase(c, {phys.eps, 0.1, 0.25}, {2, n});
        const DtBounds b = stable_dt(s, phys, stp, n / 4);
        CHECK(b.reaction == doctest::Approx(4e-4));
        CHECK(b.dt == doctest::Approx(2e-4));
    }
    phys.kappa1 = 1.0;
    SimState s;
    const GridSpec g{2, 256};
    s.phi = constant(g, 1.0);
    Scenario sc;
    sc.u0 = VelocityRecipe::translation;
    sc.velocity = {1.0, 0.0, 0.0};
    s.u_hat = initial_velocity(sc, build_mode_basis(g, 64));
    const DtBounds b = stable_dt(s, phys, stp, 64);
    CHECK(b.advection == doctest::Approx(1.0 / 512).epsilon(1e-6));
    CHECK(b.advection > b.reaction);
    CHECK(b.dt == doctest::Approx(0.5 * std::min({b.reaction, b.advection, b.viscous})));
    CHECK(b.dt <= 2e-4);
}

TEST_CASE("global equilibrium is preserved by a step") {
    const GridSpec g{2, 32};
    const ModeSet basis = build_mode_basis(g, 8);
    PhysicsParams phys;
    phys.eps = 0.1;
    const Stepper st(phys, basis);
    SimState s;
    s.u_hat = SpectralVector(g);
    s.phi = constant(g, 1.0);
    const SimState n = st.step(s, 0.01);
    CHECK(n.t == doctest::Approx(0.01));
    CHECK((n.phi.values - 1.0).abs().maxCoeff() < 1e-15);
    CHECK(max_abs(n.u_hat) == 0.0);
}

TEST_CASE("run contract") {
    SimConfig cfg;
    cfg.grid.n = 64;
    cfg.physics.eps = 0.04;
    cfg.final_time = 0.0;
    History h0 = run(cfg);
    CHECK(h0.records.size() == 1);
    CHECK(h0.steps == 0);

    cfg.final_time = 0.002;
    cfg.stepping.policy = DtPolicy::fixed;
    cfg.stepping.dt = 1e-4;
    cfg.record_interval = 5;
    const History h = run(cfg);
    CHECK(h.status == RunStatus::ok);
    CHECK(h.steps == 20);
    CHECK(h.records.size() == 20 / 5 + 1);
    CHECK(h.max_div < 1e-10);
    CHECK(h.max_energy_above_cutoff == 0.0);
    for (std::size_t n = 1; n < h.step_energy.size(); ++n)
        CHECK(h.step_energy[n] <= h.step_energy[n - 1] + 1e-8 * h.step_energy[0]);

    cfg.stepping.dt = 0.05;
    cfg.final_time = 0.5;
    const History hb = run(cfg);
    CHECK(hb.status == RunStatus::blowup);
    CHECK_FALSE(hb.error.empty());
    CHECK(hb.steps < 10);
}

TEST_CASE("flipped capillary sign breaks the energy budget") {
    // Weak curvature flow and low viscosity so capillary work dominates.
    SimConfig cfg;
    cfg.grid.n = 64;
    cfg.physics.eps = 0.04;
    cfg.physics.kappa2 = 0.01;
    cfg.physics.law = StressLaw{3.0, 0.1, 0.1, 0.1, 0.1};
    cfg.scenario.kind = ScenarioKind::polyline;
    cfg.scenario.vertices = {{0.25, 0.3}, {0.75, 0.3}, {0.75, 0.7}, {0.25, 0.7}};
    cfg.scenario.u0 = VelocityRecipe::zero;
    cfg.final_time = 0.02;
    auto budget = [&](double sign) {
        cfg.physics.capillary_sign = sign;
        RunHooks hooks;
        hooks.full_records = false;
        const History h = run(cfg, hooks);
        return (h.step_energy.back() + h.accumulated_dissipation) / h.step_energy.front();
    };
    CHECK(budget(1.0) <= 1.001);
    CHECK(budget(-1.0) > 1.01);
}

TEST_CASE("fluid stays at rest without capillary forcing") {
    SimConfig cfg;
    cfg.grid.n = 64;
    cfg.physics.eps = 0.04;
    cfg.physics.kappa1 = 0.0;
    cfg.scenario.u0 = VelocityRecipe::zero;
    cfg.final_time = 0.002;
    const History h = run(cfg);
    CHECK(max_abs(h.final_state.u_hat) == 0.0);
}

TEST_CASE("shrinking circle radius at t = 0.01") {
    SimConfig cfg;
    cfg.grid.n = 128;
    cfg.physics.kappa1 = 0.0;
    cfg.scenario.u0 = VelocityRecipe::zero;
    cfg.final_time = 0.01;
    cfg.record_interval = 1 << 20;
    const History h = run(cfg);
    const double r = extract_interface(h.final_state.phi).length() / kTwoPi;
    CHECK(std::abs(r - std::sqrt(0.0625 - 0.02)) <= 3 * cfg.physics.eps);
}
