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

#ifndef TORUSFLOW_DIAGNOSTICS_HPP
#define TORUSFLOW_DIAGNOSTICS_HPP

#include "torusflow/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torusflow {

/// Per-record diagnostics of a run.
struct EnergyRecord {
    double t = 0.0;
    double kinetic = 0.0;           // (1/2) int |u|^2
    double surface = 0.0;           // mu_t(Omega), sigma-normalized
    double total = 0.0;             // kinetic + kappa1 * surface
    double dissipation_visc = 0.0;  // int tau(phi, e(u)) : e(u)
    double dissipation_ac = 0.0;    // (eps/sigma) int (lap phi - W'/eps^2)^2
    double density_ratio = 1.0;
    double discrepancy_max = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
    double interface_length = 0.0;  // 2-D contour length, NaN in 3-D
    double brakke_lhs = 0.0;        // mu_t(test) - mu_{t_prev}(test)
    double brakke_rhs = 0.0;        // trapezoid of B over [t_prev, t]
    double brakke_mu = 0.0;         // mu_t(test)
    double brakke_b = 0.0;          // B(mu_t, u, test)
    bool brakke_valid = true;
    double max_div = 0.0;
    double energy_above_cutoff = 0.0;
};

/// sigma-normalized density (eps |grad phi|^2 / 2 + W(phi)/eps) / sigma.
ScalarField surface_density(const ScalarField& phi, double eps);

/// (1/sigma) int weight (eps |grad phi|^2 / 2 + W(phi)/eps) dx.
double surface_measure(const ScalarField& phi, double eps, const ScalarField* weight = nullptr);

/// eps |grad phi|^2 / 2 - W(phi)/eps.
ScalarField discrepancy_field(const ScalarField& phi, double eps);

/// {4h 2^m} intersected with (2h, 1/2].
std::vector<double> default_radii(const GridSpec& grid);

/// max over sampled balls B_r(x) of mu(B_r(x)) / (omega_{d-1} r^{d-1}),
/// floored at 1. Centers are every `center_stride`-th grid point per axis.
double density_ratio(const ScalarField& phi, double eps, const std::vector<double>& radii, int center_stride = 4);

struct CurvatureField {
    VectorField h;
    Eigen::Array<bool, Eigen::Dynamic, 1> mask;
    double floor = 0.0;
};

/// H = -[(lap phi - W'(phi)/eps^2) / |grad phi|] grad phi / |grad phi| on
/// points with |grad phi| >= floor. A negative floor selects 0.05 max|grad phi|.
CurvatureField mean_curvature_field(const ScalarField& phi, double eps, double floor = -1.0);

/// Non-negative test function for localized Brakke checks.
struct TestFunction {
    enum class Kind { const1, gaussian_bump };
    Kind kind = Kind::const1;
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double width = 0.1;

    ScalarField evaluate(const GridSpec& grid) const;
    bool operator==(const TestFunction&) const = default;
};

std::string to_string(TestFunction::Kind kind);
TestFunction::Kind test_function_kind_from_string(const std::string& name);

struct BrakkeValue {
    double value = 0.0;
    double coverage = 0.0;  // fraction of mu-mass on the curvature mask
    bool valid = false;     // coverage >= 0.95
};

/// int (-test H + grad test) . (kappa2 H + ((u*zeta).n) n) dmu over the curvature mask.
BrakkeValue brakke_functional(const ScalarField& phi, const SpectralVector& u_hat, double eps, double kappa2,
                              const ScalarField& test, const MollifierKernel& kern);

struct BrakkeReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string test_name;
    std::string reason;
};

struct BrakkeTolerance {
    double abs = 1e-2;
    double rel = 0.1;

    bool operator==(const BrakkeTolerance&) const = default;
};

/// Consecutive-record Brakke residuals from the mu(test) and B columns.
std::vector<BrakkeReport> brakke_inequality_check(const std::vector<EnergyRecord>& records, const std::string& test_name,
                                                  BrakkeTolerance tol = {});

/// A stored state on the record grid of a run.
struct Frame {
    double t = 0.0;
    ScalarField phi;
    SpectralVector u_hat;
};

/// Recompute mu(test) and B on stored frames and check consecutive pairs.
std::vector<BrakkeReport> brakke_inequality_check(const std::vector<Frame>& frames, const TestFunction& test,
                                                  const PhysicsParams& phys, BrakkeTolerance tol = {});

/// Closed polyline on the phi = 0 level set. Vertices are unwrapped, so a
/// loop that winds around the torus ends one period away from its start.
struct InterfaceLoop {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<double> curvature;
    bool wraps = false;

    double length() const;
};

struct InterfaceCurve {
    std::vector<InterfaceLoop> loops;

    double length() const;
};

/// Marching squares on the periodic grid (2-D only).
InterfaceCurve extract_interface(const ScalarField& phi);

/// ||v||^p_{W^{1,p}} / (||e(v)||^p_{L^p} + ||v||^p_{L^1}).
double korn_ratio(const VectorField& v, double p);

/// Max Korn ratio over seeded random band-limited fields.
double korn_ratio_sampler(const GridSpec& grid, double p, int samples, std::uint64_t seed);

/// sqrt(R0^2 - 2 kappa2 t); nullopt past the extinction time.
std::optional<double> mcf_circle_oracle(double r0, double kappa2, double t);

/// int tau(phi, e(u)) : e(u).
double viscous_dissipation(const ScalarField& phi, const SpectralVector& u_hat, const StressLaw& law);

/// (eps/sigma) int (lap phi - W'(phi)/eps^2)^2.
double allen_cahn_dissipation(const ScalarField& phi, double eps);

double kinetic_energy(const SpectralVector& u_hat);

struct RecordOptions {
    std::vector<double> radii;  // empty: default_radii
    int center_stride = 4;
    TestFunction test;
    /// false skips density ratio, interface extraction and Brakke terms.
    bool full = true;
};

/// All record columns for a state; Brakke lhs/rhs are left to the caller.
EnergyRecord measure_state(const SimState& state, const PhysicsParams& phys, const MollifierKernel& kern,
                           int cutoff, const RecordOptions& opts);

}  // namespace torusflow

#endif  // TORUSFLOW_DIAGNOSTICS_HPP
