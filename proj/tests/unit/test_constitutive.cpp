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

#include "torusflow/constitutive.hpp"

#include <doctest.h>

#include <cmath>

using namespace torusflow;

namespace {

Eigen::Matrix2d sym2(double a, double b, double c) {
    Eigen::Matrix2d s;
    s << a, b, b, c;
    return s;
}

}  // namespace

TEST_CASE("double well values and derivatives") {
    CHECK(w_eval(0.0) == 0.5);
    CHECK(w_eval(1.0) == 0.0);
    CHECK(w_eval(-1.0) == 0.0);
    for (double x : {-1.3, -0.7, 0.0, 0.2, 0.9, 1.1}) {
        const double h = 1e-6;
        CHECK(w_prime(x) == doctest::Approx((w_eval(x + h) - w_eval(x - h)) / (2 * h)).epsilon(1e-8));
        CHECK(w_second(x) == doctest::Approx((w_prime(x + h) - w_prime(x - h)) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("profile constant by quadrature") {
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + (i + 0.5) * 2.0 / n;
        s += std::sqrt(2.0 * w_eval(x)) * 2.0 / n;
    }
    CHECK(s == doctest::Approx(sigma_const()).epsilon(1e-8));
}

TEST_CASE("carreau stress") {
    const StressLaw law;
    CHECK(tau_phase(Eigen::Matrix2d::Zero().eval(), Phase::plus, law).norm() == 0.0);
    const Eigen::Matrix2d s = sym2(0.3, -0.4, 1.2);
    const Eigen::Matrix2d t = tau_phase(s, Phase::plus, law);
    CHECK((t - t.transpose()).norm() == 0.0);
    CHECK((t - std::sqrt(1.0 + s.squaredNorm()) * s).norm() < 1e-14);

    StressLaw newton = law;
    newton.p = 2.0;
    CHECK((tau_phase(s, Phase::minus, newton) - s).norm() == 0.0);

    for (double p : {2.5, 3.0, 4.0, 5.5})
        CHECK(carreau_factor(0.7, 1.3, 0.4, p) == doctest::Approx(std::pow(1.3 + 0.4 * 0.7, (p - 2) / 2)).epsilon(1e-14));
}

TEST_CASE("phase blend") {
    StressLaw law;
    law.a_minus = 2.0;
    law.b_minus = 0.5;
    const Eigen::Matrix2d s = sym2(0.5, 0.1, -0.2);
    const Eigen::Matrix2d tp = tau_phase(s, Phase::plus, law), tm = tau_phase(s, Phase::minus, law);
    CHECK((tau_blend(1.0, s, law) - tp).norm() < 1e-15);
    CHECK((tau_blend(0.0, s, law) - 0.5 * (tp + tm)).norm() < 1e-15);
    CHECK((tau_blend(1.05, s, law) - tp).norm() < 1e-15);
    CHECK((tau_blend(-1.2, s, law) - tm).norm() < 1e-15);
    CHECK_THROWS_AS(tau_phase(Eigen::Matrix2d{{0.0, 1.0}, {0.0, 0.0}}, Phase::plus, law), UsageError);
}

TEST_CASE("tangent bound dominates the directional derivative") {
    const double a = 1.0, b = 1.0;
    for (double p : {2.0, 3.0, 4.5})
        for (double n2 : {0.0, 0.5, 3.0, 40.0}) {
            const double s = std::sqrt(n2), h = 1e-6;
            const double slope = ((s + h) * carreau_factor((s + h) * (s + h), a, b, p) -
                                  (s - h) * carreau_factor((s - h) * (s - h), a, b, p)) /
                                 (2 * h);
            CHECK(carreau_tangent_bound(n2, a, b, p) >= slope * (1 - 1e-6));
        }
}

TEST_CASE("stress law admissibility and its mutation") {
    const StressLaw law;
    const AdmissibilityReport r = validate_stress_law(law, 2, 10000, 5);
    CHECK(r.ok());
    CHECK(r.samples == 10000);
    CHECK(r.monotone_min >= -1e-12);
    CHECK(r.nu0_lower > 0.0);

    StressLaw bad = law;
    bad.b_plus = bad.b_minus = -1.0;
    const AdmissibilityReport rb = validate_stress_law(bad, 2, 10000, 5);
    CHECK_FALSE(rb.monotone_ok);

    const AdmissibilityReport r3 = validate_stress_law(law, 3, 2000, 6);
    CHECK(r3.ok());
}

TEST_CASE("law parameter checks") {
    StressLaw law;
    law.a_minus = 0.0;
    CHECK_THROWS_AS(law.validate(), ConfigError);
    CHECK(StressLaw{}.admissible(2));
    CHECK_FALSE(StressLaw{2.0}.admissible(2));
}
