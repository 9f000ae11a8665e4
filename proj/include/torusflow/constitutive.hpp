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

#ifndef TORUSFLOW_CONSTITUTIVE_HPP
#define TORUSFLOW_CONSTITUTIVE_HPP

#include "torusflow/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace torusflow {

// Double-well potential W(phi) = (1 - phi^2)^2 / 2.

template <typename Scalar>
constexpr Scalar w_eval(Scalar phi) {
    const Scalar q = Scalar(1) - phi * phi;
    return q * q / Scalar(2);
}

template <typename Scalar>
constexpr Scalar w_prime(Scalar phi) {
    return Scalar(-2) * phi * (Scalar(1) - phi * phi);
}

template <typename Scalar>
constexpr Scalar w_second(Scalar phi) {
    return Scalar(6) * phi * phi - Scalar(2);
}

/// Profile energy constant: integral of sqrt(2W) over [-1, 1], which is
/// the integral of (1 - s^2), i.e. 4/3.
constexpr double sigma_const() { return 4.0 / 3.0; }

enum class Phase { plus, minus };

/// Per-phase Carreau coefficients. tau(s) = (a + b|s|^2)^((p-2)/2) s.
template <typename Scalar>
struct CarreauLaw {
    Scalar p = Scalar(3);
    Scalar a_plus = Scalar(1);
    Scalar b_plus = Scalar(1);
    Scalar a_minus = Scalar(1);
    Scalar b_minus = Scalar(1);

    Scalar a(Phase ph) const { return ph == Phase::plus ? a_plus : a_minus; }
    Scalar b(Phase ph) const { return ph == Phase::plus ? b_plus : b_minus; }

    /// Throws ConfigError if a coefficient is non-positive or p < 1.
    /// Admissibility in the sense p > (d+2)/2 is reported by `admissible`.
    void validate() const {
        if (!(a_plus > 0 && b_plus > 0 && a_minus > 0 && b_minus > 0))
            throw ConfigError("physics.a_plus, b_plus, a_minus, b_minus must be > 0");
        if (!(p >= Scalar(1))) throw ConfigError("physics.p must be >= 1");
    }
    bool admissible(int d) const { return p > Scalar(d + 2) / Scalar(2); }

    bool operator==(const CarreauLaw&) const = default;
};

using StressLaw = CarreauLaw<double>;

/// Carreau viscosity factor (a + b|s|^2)^((p-2)/2) given |s|^2.
template <typename Scalar>
Scalar carreau_factor(Scalar norm2, Scalar a, Scalar b, Scalar p) {
    if (p == Scalar(2)) return Scalar(1);
    using std::pow;
    using std::sqrt;
    const Scalar base = a + b * norm2;
    if (p == Scalar(3)) return sqrt(base);
    if (p == Scalar(4)) return base;
    return pow(base, (p - Scalar(2)) / Scalar(2));
}

/// Largest eigenvalue of the tangent modulus of tau at |s|^2 = norm2.
template <typename Scalar>
Scalar carreau_tangent_bound(Scalar norm2, Scalar a, Scalar b, Scalar p) {
    if (p == Scalar(2)) return Scalar(1);
    const Scalar g = carreau_factor(norm2, a, b, p);
    const Scalar along = g * (a + (p - Scalar(1)) * b * norm2) / (a + b * norm2);
    return std::max(g, along);
}

template <typename Derived>
typename Derived::PlainObject symmetrize_checked(const Eigen::MatrixBase<Derived>& s) {
    using Scalar = typename Derived::Scalar;
    const Scalar asym = (s - s.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-10)) throw UsageError("tau_phase: input tensor is not symmetric");
    return (s + s.transpose()) / Scalar(2);
}

template <typename Derived>
typename Derived::PlainObject tau_phase(const Eigen::MatrixBase<Derived>& s, Phase ph,
                                        const CarreauLaw<typename Derived::Scalar>& law) {
    const auto sym = symmetrize_checked(s);
    const auto factor = carreau_factor(sym.squaredNorm(), law.a(ph), law.b(ph), law.p);
    return factor * sym;
}

/// Phase-weighted stress ((1+phi)/2) tau+ + ((1-phi)/2) tau-, with phi
/// clamped to [-1, 1] so the weights stay convex.
template <typename Derived>
typename Derived::PlainObject tau_blend(typename Derived::Scalar phi, const Eigen::MatrixBase<Derived>& s,
                                        const CarreauLaw<typename Derived::Scalar>& law) {
    using Scalar = typename Derived::Scalar;
    const Scalar c = std::clamp(phi, Scalar(-1), Scalar(1));
    const auto sym = symmetrize_checked(s);
    const Scalar n2 = sym.squaredNorm();
    const Scalar wp = (Scalar(1) + c) / Scalar(2);
    const Scalar wm = (Scalar(1) - c) / Scalar(2);
    const Scalar factor = wp * carreau_factor(n2, law.a_plus, law.b_plus, law.p) +
                          wm * carreau_factor(n2, law.a_minus, law.b_minus, law.p);
    return factor * sym;
}

/// Pointwise blended factor, for inner loops that already hold a symmetric s.
template <typename Scalar>
Scalar blend_factor(Scalar phi, Scalar norm2, const CarreauLaw<Scalar>& law) {
    const Scalar c = std::clamp(phi, Scalar(-1), Scalar(1));
    return (Scalar(1) + c) / Scalar(2) * carreau_factor(norm2, law.a_plus, law.b_plus, law.p) +
           (Scalar(1) - c) / Scalar(2) * carreau_factor(norm2, law.a_minus, law.b_minus, law.p);
}

struct AdmissibilityReport {
    double nu0_lower = 0.0;     // min tau(s):s / |s|^p over samples with |s| >= 1
    double growth_max = 0.0;    // max |tau(s)| / (1 + |s|^(p-1))
    double monotone_min = 0.0;  // min (tau(s) - tau(t)):(s - t)
    bool growth_ok = false;
    bool coercive_ok = false;
    bool monotone_ok = false;
    std::size_t samples = 0;
    Eigen::Matrix3d worst_s = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d worst_t = Eigen::Matrix3d::Zero();
    Phase worst_phase = Phase::plus;

    bool ok() const { return growth_ok && coercive_ok && monotone_ok; }
};

/// Sample random symmetric pairs with |s| log-uniform in [1e-3, 1e3] and
/// measure the coercivity, growth and monotonicity conditions on both
/// phases. Deterministic for a given seed. Requires samples >= 1000.
AdmissibilityReport validate_stress_law(const StressLaw& law, int d, std::size_t samples, std::uint64_t seed);

}  // namespace torusflow

#endif  // TORUSFLOW_CONSTITUTIVE_HPP
