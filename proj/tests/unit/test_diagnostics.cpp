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

#include "torusflow/diagnostics.hpp"
#include "torusflow/phase_init.hpp"

#include <doctest.h>

#include <cmath>

using namespace torusflow;

namespace {

const GridSpec kFine{2, 256};

ScalarField sample(const GridSpec& g, auto fn) {
    ScalarField f(g);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const auto i = grid_index(g, p);
        f.values(static_cast<Eigen::Index>(p)) = fn(i[0] * g.spacing(), i[1] * g.spacing());
    }
    return f;
}

ScalarField scenario_phase(ScenarioKind kind, double eps = 0.02, const GridSpec& g = kFine) {
    Scenario s;
    s.kind = kind;
    return initial_phase(s, {eps, default_cap_scale(s, 2), 0.25}, g);
}

ScalarField constant(const GridSpec& g, double c) {
    return ScalarField(g, RealArray::Constant(static_cast<Eigen::Index>(g.points()), c));
}

}  // namespace

TEST_CASE("surface measure") {
    CHECK(surface_measure(constant(kFine, 1.0), 0.02) == 0.0);
    CHECK(surface_measure(constant(kFine, -1.0), 0.02) == 0.0);
    CHECK(surface_measure(scenario_phase(ScenarioKind::circle), 0.02) == doctest::Approx(kPi / 2).epsilon(0.02));
    CHECK(surface_measure(scenario_phase(ScenarioKind::stripe), 0.02) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("surface error decreases with epsilon") {
    for (ScenarioKind kind : {ScenarioKind::circle, ScenarioKind::stripe}) {
        Scenario s;
        s.kind = kind;
        double prev = 1e9;
        for (double eps : {0.08, 0.04, 0.02}) {
            const double err = std::abs(surface_measure(scenario_phase(kind, eps), eps) - s.perimeter(2));
            CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("discrepancy") {
    const double eps = 0.03;
    CHECK(discrepancy_field(constant(kFine, 0.0), eps).values.maxCoeff() == doctest::Approx(-1.0 / (2 * eps)));
    const ScalarField stripe = sample(kFine, [&](double, double y) { return std::tanh((0.25 - std::abs(y - 0.5)) / eps); });
    const ScalarField d = discrepancy_field(stripe, eps);
    for (std::size_t p = 0; p < kFine.points(); ++p) {
        const double y = grid_index(kFine, p)[1] * kFine.spacing();
        if (std::abs(std::abs(y - 0.5) - 0.25) < 0.1) CHECK(std::abs(d.values(static_cast<Eigen::Index>(p))) < 1e-6 / eps);
    }
}

TEST_CASE("density ratio") {
    const auto radii = default_radii(kFine);
    CHECK(radii.front() == doctest::Approx(4.0 / 256));
    CHECK(radii.back() == doctest::Approx(0.5));
    CHECK(density_ratio(constant(kFine, 1.0), 0.02, radii) == 1.0);
    CHECK(density_ratio(scenario_phase(ScenarioKind::stripe), 0.02, {0.0625, 0.125}) ==
          doctest::Approx(1.0).epsilon(0.1));
    CHECK(density_ratio(scenario_phase(ScenarioKind::circle), 0.02, {0.5}) == doctest::Approx(kPi / 2).epsilon(0.1));
    const ScalarField c = scenario_phase(ScenarioKind::circle);
    CHECK(density_ratio(c, 0.02, {0.125, 0.5}) >= density_ratio(c, 0.02, {0.5}));
}

TEST_CASE("mean curvature of circles") {
    for (double R : {0.2, 0.25, 0.3}) {
        Scenario s;
        s.radius = R;
        const ScalarField phi = initial_phase(s, {0.02, default_cap_scale(s, 2), 0.25}, kFine);
        const CurvatureField hc = mean_curvature_field(phi, 0.02);
        const ScalarField dens = surface_density(phi, 0.02);
        double num = 0.0, den = 0.0;
        for (std::size_t p = 0; p < kFine.points(); ++p) {
            const auto i = static_cast<Eigen::Index>(p);
            const auto idx = grid_index(kFine, p);
            const double dist = signed_distance(s, 2, {idx[0] / 256.0, idx[1] / 256.0, 0.0});
            if (!hc.mask(i) || std::abs(dist) > 0.02) continue;
            num += std::hypot(hc.h[0](i), hc.h[1](i)) * dens.values(i);
            den += dens.values(i);
        }
        CHECK(num / den == doctest::Approx(1.0 / R).epsilon(0.05));
    }
}

TEST_CASE("brakke functional oracles") {
    // Equilibrium profiles; the capped initial profile is not in equipartition.
    const double eps = 0.02;
    const ScalarField circle = sample(kFine, [&](double x, double y) {
        return std::tanh((0.25 - std::hypot(x - 0.5, y - 0.5)) / eps);
    });
    const ScalarField stripe = sample(kFine, [&](double, double y) { return std::tanh((0.25 - std::abs(y - 0.5)) / eps); });
    const TestFunction one;
    const ScalarField test = one.evaluate(kFine);
    const MollifierKernel kern = mollifier_kernel(kFine, eps, 0.25, MollifierMode::interface);
    const SpectralVector zero(kFine);
    const BrakkeValue circ = brakke_functional(circle, zero, eps, 1.0, test, kern);
    CHECK(circ.valid);
    CHECK(circ.value == doctest::Approx(-kTwoPi / 0.25).epsilon(0.1));

    CHECK(std::abs(brakke_functional(stripe, zero, eps, 1.0, test, kern).value) <= 0.05);
    Scenario tr;
    tr.u0 = VelocityRecipe::translation;
    tr.velocity = {0.0, 0.5, 0.0};
    const SpectralVector u = initial_velocity(tr, build_mode_basis(kFine, 64));
    CHECK(std::abs(brakke_functional(stripe, u, eps, 1.0, test, kern).value) <= 0.05);

    const BrakkeValue flat = brakke_functional(constant(kFine, 1.0), zero, eps, 1.0, test, kern);
    CHECK(flat.value == 0.0);
}

TEST_CASE("brakke inequality from records") {
    std::vector<EnergyRecord> recs(3);
    for (int i = 0; i < 3; ++i) recs[static_cast<std::size_t>(i)].t = 0.01 * i;
    recs[0].brakke_mu = 1.0;
    recs[0].brakke_b = -10.0;
    recs[1].brakke_mu = 0.9;
    recs[1].brakke_b = -12.0;
    recs[2].brakke_mu = 0.95;
    recs[2].brakke_b = -10.0;
    recs[2].brakke_valid = false;
    const auto r = brakke_inequality_check(recs, "const1", {1e-2, 0.1});
    REQUIRE(r.size() == 2);
    CHECK(r[0].lhs == doctest::Approx(-0.1));
    CHECK(r[0].rhs == doctest::Approx(-0.11));
    CHECK(r[0].passed);
    CHECK(r[1].skipped);
    recs[2].brakke_valid = true;
    CHECK_FALSE(brakke_inequality_check(recs, "const1", {1e-2, 0.1})[1].passed);
}

TEST_CASE("interface extraction") {
    CHECK(extract_interface(constant(kFine, 1.0)).loops.empty());

    const InterfaceCurve c = extract_interface(scenario_phase(ScenarioKind::circle));
    REQUIRE(c.loops.size() == 1);
    CHECK(c.length() == doctest::Approx(kPi / 2).epsilon(0.01));
    CHECK_FALSE(c.loops[0].wraps);
    std::size_t close = 0;
    for (double k : c.loops[0].curvature) close += std::abs(k - 4.0) <= 0.2;
    CHECK(close >= c.loops[0].curvature.size() * 9 / 10);

    const InterfaceCurve s = extract_interface(scenario_phase(ScenarioKind::stripe));
    REQUIRE(s.loops.size() == 2);
    for (const auto& l : s.loops) {
        CHECK(l.wraps);
        CHECK(l.length() == doctest::Approx(1.0).epsilon(1e-3));
        for (double k : l.curvature) CHECK(std::abs(k) <= 0.1);
    }
}

TEST_CASE("korn ratio") {
    const GridSpec g{2, 64};
    VectorField c(g);
    c[0].setConstant(0.7);
    c[1].setConstant(-0.2);
    CHECK(korn_ratio(c, 2.5) == doctest::Approx(1.0).epsilon(1e-12));

    VectorField shear(g);
    shear[0] = sample(g, [](double, double y) { return std::sin(kTwoPi * y); }).values;
    const double pi2 = kPi * kPi;
    CHECK(korn_ratio(shear, 2.0) == doctest::Approx((0.5 + 2 * pi2) / (pi2 + 4 / pi2)).epsilon(1e-4));
    CHECK(korn_ratio(shear, 2.0) == doctest::Approx(1.9698).epsilon(1e-4));

    const double m = korn_ratio_sampler({2, 32}, 2.5, 100, 3);
    CHECK(std::isfinite(m));
    CHECK(m < 50.0);
}

TEST_CASE("circle oracle") {
    CHECK(*mcf_circle_oracle(0.25, 1.0, 0.0) == 0.25);
    CHECK(*mcf_circle_oracle(0.25, 1.0, 0.01) == doctest::Approx(0.20616).epsilon(1e-5));
    CHECK(*mcf_circle_oracle(0.25, 1.0, 0.03125) == 0.0);
    CHECK_FALSE(mcf_circle_oracle(0.25, 1.0, 0.04).has_value());
}

TEST_CASE("energies and dissipation") {
    const GridSpec g{2, 64};
    Scenario s;
    const SpectralVector u = initial_velocity(s, build_mode_basis(g, 16));
    CHECK(kinetic_energy(u) == doctest::Approx(0.0025).epsilon(1e-12));
    const StressLaw newton{2.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(viscous_dissipation(constant(g, 1.0), u, newton) == doctest::Approx(0.01 * kPi * kPi).epsilon(1e-12));
    CHECK(allen_cahn_dissipation(constant(g, 1.0), 0.05) == 0.0);
}
