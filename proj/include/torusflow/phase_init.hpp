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

#ifndef TORUSFLOW_PHASE_INIT_HPP
#define TORUSFLOW_PHASE_INIT_HPP

#include "torusflow/spectral.hpp"

#include <string>
#include <vector>

namespace torusflow {

enum class ScenarioKind { circle, stripe, two_circles, polyline };
enum class VelocityRecipe { zero, shear, modes, translation };

std::string to_string(ScenarioKind kind);
std::string to_string(VelocityRecipe recipe);
ScenarioKind scenario_kind_from_string(const std::string& name);
VelocityRecipe velocity_recipe_from_string(const std::string& name);

/// One term of the `modes` velocity recipe: amplitude times the unit-norm
/// cosine basis field of wavevector k and the given polarization.
struct ModeAmplitude {
    Wavevector k{1, 0, 0};
    int polarization = 0;
    double amplitude = 0.0;

    bool operator==(const ModeAmplitude&) const = default;
};

/// Initial geometry of the + phase and initial velocity recipe.
///
/// circle: disc (ball in 3-D) of `radius` at `center`.
/// stripe: slab y0 < x_1 < y1 (x_1 is the second coordinate).
/// two_circles: union of two discs.
/// polyline: closed polygon with `vertices` (2-D only), + phase inside.
struct Scenario {
    ScenarioKind kind = ScenarioKind::circle;
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double radius = 0.25;
    std::array<double, 3> center2{0.75, 0.75, 0.5};
    double radius2 = 0.1;
    double y0 = 0.25;
    double y1 = 0.75;
    std::vector<std::array<double, 2>> vertices;

    VelocityRecipe u0 = VelocityRecipe::shear;
    double amplitude = 0.1;
    int wavenumber = 1;
    std::vector<ModeAmplitude> modes;
    std::array<double, 3> velocity{0.0, 0.0, 0.0};

    /// Throws ConfigError on invalid geometry for dimension d.
    void validate(int d) const;
    /// Distance from the boundary to its nearest focal or medial point.
    double reach(int d) const;
    /// Total boundary measure (length in 2-D, area in 3-D).
    double perimeter(int d) const;
    /// Largest boundary curvature magnitude (0 for flat pieces).
    double max_curvature(int d) const;

    bool operator==(const Scenario&) const = default;
};

struct ProfileParams {
    double eps = 0.02;
    double b = 0.1;
    double gamma = 0.25;
};

/// b = min(reach / 2, 0.1).
double default_cap_scale(const Scenario& scn, int d);

/// Signed distance to the + phase boundary (positive inside) in the torus metric.
double signed_distance(const Scenario& scn, int d, const std::array<double, 3>& x);

/// Odd, monotone, C^1 cap: s on [0, 1/4], 1/2 beyond 1/2, cubic Hermite between.
double smooth_cap(double s);

/// phi0 = tanh(b h(d(x)/b) / eps). Requires eps >= 2h.
ScalarField initial_phase(const Scenario& scn, const ProfileParams& prm, const GridSpec& grid);

/// Recipe -> Leray projection -> Galerkin truncation. Recipe modes above the
/// cutoff are dropped and reported in `warnings`.
SpectralVector initial_velocity(const Scenario& scn, const ModeSet& basis, std::vector<std::string>* warnings = nullptr);

/// Non-fatal advisories about resolution margins of a scenario/profile pair.
std::vector<std::string> profile_warnings(const Scenario& scn, const ProfileParams& prm, const GridSpec& grid);

struct InitialEnergyReport {
    double surface = 0.0;    // sigma-normalized diffuse energy mu_0(Omega)
    double kinetic = 0.0;    // (1/2) ||u0||^2
    double discrete = 0.0;   // kappa1 * surface + kinetic
    double analytic = 0.0;   // kappa1 * perimeter + kinetic
    double perimeter = 0.0;
    bool exceeds = false;    // discrete > 1.05 analytic
};

InitialEnergyReport initial_energy_check(const ScalarField& phi0, const SpectralVector& u0, double eps, double kappa1,
                                         const Scenario& scn);

}  // namespace torusflow

#endif  // TORUSFLOW_PHASE_INIT_HPP
