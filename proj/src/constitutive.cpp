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

#include <limits>
#include <random>

namespace torusflow {

namespace {

Eigen::MatrixXd random_symmetric(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> log_mag(std::log(1e-3), std::log(1e3));
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
    m = (m + m.transpose()).eval() / 2.0;
    const double norm = m.norm();
    if (norm == 0.0) m(0, 0) = 1.0;
    return m / m.norm() * std::exp(log_mag(rng));
}

Eigen::Matrix3d pad(const Eigen::MatrixXd& m) {
    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

}  // namespace

AdmissibilityReport validate_stress_law(const StressLaw& law, int d, std::size_t samples, std::uint64_t seed) {
    if (samples < 1000) throw ConfigError("validate_stress_law needs at least 1000 samples");
    if (d != 2 && d != 3) throw ConfigError("dimension must be 2 or 3");
    std::mt19937_64 rng(seed);
    AdmissibilityReport rep;
    rep.samples = samples;
    rep.nu0_lower = std::numeric_limits<double>::infinity();
    rep.growth_max = 0.0;
    rep.monotone_min = std::numeric_limits<double>::infinity();
    bool finite = true;

    for (std::size_t i = 0; i < samples; ++i) {
        const Eigen::MatrixXd s = random_symmetric(d, rng);
        const Eigen::MatrixXd t = random_symmetric(d, rng);
        for (Phase ph : {Phase::plus, Phase::minus}) {
            const Eigen::MatrixXd ts = tau_phase(s, ph, law);
            const Eigen::MatrixXd tt = tau_phase(t, ph, law);
            const double ns = s.norm();

            const double growth = ts.norm() / (1.0 + std::pow(ns, law.p - 1.0));
            const double monotone = (ts - tt).cwiseProduct(s - t).sum();
            if (!std::isfinite(growth) || !std::isfinite(monotone)) finite = false;
            if (std::isfinite(growth)) rep.growth_max = std::max(rep.growth_max, growth);
            if (ns >= 1.0) {
                const double coercive = ts.cwiseProduct(s).sum() / std::pow(ns, law.p);
                if (!std::isfinite(coercive)) finite = false;
                else rep.nu0_lower = std::min(rep.nu0_lower, coercive);
            }
            if (!std::isfinite(monotone) || monotone < rep.monotone_min) {
                rep.monotone_min = std::isfinite(monotone) ? monotone : -std::numeric_limits<double>::infinity();
                rep.worst_s = pad(s);
                rep.worst_t = pad(t);
                rep.worst_phase = ph;
            }
        }
    }
    rep.monotone_ok = finite && rep.monotone_min >= -1e-12;
    rep.growth_ok = finite && std::isfinite(rep.growth_max) && rep.growth_max > 0.0;
    rep.coercive_ok = finite && std::isfinite(rep.nu0_lower) && rep.nu0_lower > 0.0;
    return rep;
}

}  // namespace torusflow
