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
#include "torusflow/errors.hpp"
#include "torusflow/phase_init.hpp"

#include <doctest.h>

#include <cmath>

using namespace torusflow;

TEST_CASE("smooth cap") {
    CHECK(smooth_cap(0.1) == 0.1);
    CHECK(smooth_cap(0.25) == 0.25);
    CHECK(smooth_cap(0.7) == 0.5);
    CHECK(smooth_cap(-0.7) == -0.5);
    CHECK(smooth_cap(0.375) == doctest::Approx(0.40625).epsilon(1e-15));
    double prev = smooth_cap(-1.0);
    for (int i = -1000; i <= 1000; ++i) {
        const double s = i / 1000.0;
        CHECK(smooth_cap(s) >= prev);
        CHECK(smooth_cap(-s) == -smooth_cap(s));
        prev = smooth_cap(s);
    }
    const double h = 1e-7;
    CHECK((smooth_cap(0.25 + h) - smooth_cap(0.25 - h)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK((smooth_cap(0.5 + h) - smooth_cap(0.5 - h)) / (2 * h) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("signed distances") {
    Scenario c;
    CHECK(signed_distance(c, 2, {0.5, 0.5, 0.0}) == doctest::Approx(0.25));
    CHECK(signed_distance(c, 2, {0.75, 0.5, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(signed_distance(c, 2, {0.0, 0.5, 0.0}) == doctest::Approx(-0.25));

    Scenario s;
    s.kind = ScenarioKind::stripe;
    CHECK(signed_distance(s, 2, {0.1, 0.5, 0.0}) == doctest::Approx(0.25));
    CHECK(signed_distance(s, 2, {0.9, 0.5, 0.0}) == doctest::Approx(0.25));
    CHECK(signed_distance(s, 2, {0.3, 0.0, 0.0}) == doctest::Approx(-0.25));
    CHECK(signed_distance(s, 2, {0.3, 0.9, 0.0}) == doctest::Approx(-0.15));

    Scenario two;
    two.kind = ScenarioKind::two_circles;
    two.center = {0.3, 0.3, 0.5};
    two.radius = 0.15;
    two.center2 = {0.7, 0.7, 0.5};
    two.radius2 = 0.1;
    CHECK(signed_distance(two, 2, {0.7, 0.7, 0.0}) == doctest::Approx(0.1));
    CHECK(signed_distance(two, 2, {0.3, 0.3, 0.0}) == doctest::Approx(0.15));
}

TEST_CASE("polyline square distance and self intersection") {
    Scenario sq;
    sq.kind = ScenarioKind::polyline;
    sq.vertices = {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}};
    sq.validate(2);
    CHECK(signed_distance(sq, 2, {0.5, 0.5, 0.0}) == doctest::Approx(0.25));
    CHECK(signed_distance(sq, 2, {0.5, 0.3, 0.0}) == doctest::Approx(0.05));
    CHECK(signed_distance(sq, 2, {0.5, 0.2, 0.0}) == doctest::Approx(-0.05));
    CHECK(sq.perimeter(2) == doctest::Approx(2.0));

    Scenario bow = sq;
    bow.vertices = {{0.25, 0.25}, {0.75, 0.75}, {0.75, 0.25}, {0.25, 0.75}};
    CHECK_THROWS_AS(bow.validate(2), ConfigError);
}

TEST_CASE("initial phase profile") {
    const GridSpec g{2, 256};
    Scenario c;
    const ProfileParams prm{0.02, default_cap_scale(c, 2), 0.25};
    CHECK(prm.b == doctest::Approx(0.1));
    const ScalarField phi = initial_phase(c, prm, g);
    CHECK(phi.values.abs().maxCoeff() <= 1.0);
    // (0.75, 0.5) lies on the circle, (0.7, 0.5) is 0.05 inside.
    CHECK(phi.values(static_cast<Eigen::Index>(grid_linear(g, {192, 128, 0}))) == 0.0);
    CHECK(phi.values(static_cast<Eigen::Index>(grid_linear(g, {128 + 51, 128, 0}))) ==
          doctest::Approx(std::tanh(0.1 * smooth_cap((0.25 - 51.0 / 256) / 0.1) / 0.02)));
    CHECK(std::tanh(0.1 * smooth_cap(0.5) / 0.02) == doctest::Approx(0.98661).epsilon(1e-5));
    CHECK(phi.values(0) == doctest::Approx(-std::tanh(2.5)).epsilon(1e-15));
}

TEST_CASE("initial energy against perimeter") {
    const GridSpec g{2, 256};
    const ModeSet basis = build_mode_basis(g, 64);
    Scenario c;
    c.u0 = VelocityRecipe::zero;
    const ScalarField pc = initial_phase(c, {0.02, default_cap_scale(c, 2), 0.25}, g);
    const InitialEnergyReport rc = initial_energy_check(pc, initial_velocity(c, basis), 0.02, 1.0, c);
    CHECK(rc.discrete == doctest::Approx(kPi / 2).epsilon(0.02));
    CHECK_FALSE(rc.exceeds);

    Scenario s;
    s.kind = ScenarioKind::stripe;
    const ScalarField ps = initial_phase(s, {0.02, default_cap_scale(s, 2), 0.25}, g);
    const InitialEnergyReport rs = initial_energy_check(ps, initial_velocity(s, basis), 0.02, 1.0, s);
    CHECK(rs.kinetic == doctest::Approx(0.0025).epsilon(1e-12));
    CHECK(rs.discrete == doctest::Approx(2.0025).epsilon(0.02));
}

TEST_CASE("initial velocity recipes") {
    const GridSpec g{2, 32};
    const ModeSet basis = build_mode_basis(g, 8);
    Scenario s;
    s.u0 = VelocityRecipe::zero;
    CHECK(kinetic_energy(initial_velocity(s, basis)) == 0.0);

    s.u0 = VelocityRecipe::shear;
    const VectorField u = inverse(initial_velocity(s, basis));
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double y = grid_index(g, p)[1] * g.spacing();
        CHECK(u[0](static_cast<Eigen::Index>(p)) == doctest::Approx(0.1 * std::sin(kTwoPi * y)).epsilon(1e-12));
    }

    s.u0 = VelocityRecipe::modes;
    s.modes = {{{1, 1, 0}, 0, 0.2}, {{12, 0, 0}, 0, 1.0}};
    std::vector<std::string> warnings;
    const SpectralVector uh = initial_velocity(s, basis, &warnings);
    CHECK(warnings.size() == 1);
    CHECK(max_divergence(uh) < 1e-10);
    CHECK(energy_above(uh, 8) == 0.0);
}

TEST_CASE("scenario guards") {
    Scenario c;
    c.radius = 0.6;
    CHECK_THROWS_WITH_AS(c.validate(2), doctest::Contains("radius exceeds 0.45"), ConfigError);
}
