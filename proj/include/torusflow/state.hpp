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

#ifndef TORUSFLOW_STATE_HPP
#define TORUSFLOW_STATE_HPP

#include "torusflow/constitutive.hpp"
#include "torusflow/spectral.hpp"

namespace torusflow {

/// Truncated divergence-free velocity coefficients, grid phase field, clock.
struct SimState {
    SpectralVector u_hat;
    ScalarField phi;
    double t = 0.0;
};

struct PhysicsParams {
    double eps = 0.02;
    double gamma = 0.25;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    StressLaw law;
    MollifierMode mollifier = MollifierMode::interface;
    /// Test hook: -1 flips the sign of the capillary force.
    double capillary_sign = 1.0;
    /// Test hook: false drops the viscous stress term entirely.
    bool stress_enabled = true;

    bool operator==(const PhysicsParams&) const = default;
};

enum class DtPolicy { fixed, automatic };

struct StepParams {
    double dt = 1e-5;
    DtPolicy policy = DtPolicy::automatic;
    double safety = 0.5;
    bool dealias = true;

    bool operator==(const StepParams&) const = default;
};

}  // namespace torusflow

#endif  // TORUSFLOW_STATE_HPP
