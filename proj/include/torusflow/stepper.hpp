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

#ifndef TORUSFLOW_STEPPER_HPP
#define TORUSFLOW_STEPPER_HPP

#include "torusflow/config.hpp"
#include "torusflow/diagnostics.hpp"
#include "torusflow/state.hpp"

#include <functional>
#include <string>
#include <vector>

namespace torusflow {

/// (kappa1 eps / sigma) (grad phi (x) grad phi) * zeta.
SymTensorField capillary_tensor(const ScalarField& phi, const MollifierKernel& kern, double eps, double kappa1);

/// -P_K div(capillary tensor), Leray-projected and truncated.
SpectralVector capillary_force(const ScalarField& phi, const MollifierKernel& kern, double eps, double kappa1, int cutoff);

/// P_K div tau(phi, e(u)).
SpectralVector stress_term(const SpectralVector& u_hat, const ScalarField& phi, const StressLaw& law, int cutoff);

/// -P_K (u . grad u). With `dealias` the product is filtered to |k_a| <= N/3.
SpectralVector advection_term(const SpectralVector& u_hat, int cutoff, bool dealias = true);

/// Stress + advection + capillary terms of the Galerkin momentum equation.
SpectralVector momentum_rhs(const SimState& state, const PhysicsParams& phys, const ModeSet& basis,
                            const MollifierKernel& kern, bool dealias = true);

/// One IMEX Euler step of the transported Allen-Cahn equation; the
/// diffusion is inverted exactly in Fourier space.
ScalarField ac_step(const ScalarField& phi, const SpectralVector& u_hat, const PhysicsParams& phys,
                    const MollifierKernel& kern, double dt);

/// Fields of one state shared by the dt bound, the step and the energy
/// monitor, so each is transformed once.
struct StateFields {
    SpectralScalar phi_hat;
    VectorField grad_phi;
    VectorField u;
    std::vector<std::vector<RealArray>> grad_u;  // grad_u[a][b] = d_b u_a
};

StateFields state_fields(const SimState& state);

struct DtBounds {
    double reaction = 0.0;   // eps^2 / (4 kappa2)
    double advection = 0.0;  // h / (2 max|u| + 1e-12)
    double viscous = 0.0;    // 1 / (pi^2 nu_t K^2), inf when the fluid is dormant
    double dt = 0.0;         // safety * min
};

/// Automatic step size. Throws BlowUpError when dt < 1e-12.
DtBounds stable_dt(const SimState& state, const PhysicsParams& phys, const StepParams& stp, int cutoff);
DtBounds stable_dt(const SimState& state, const StateFields& fields, const PhysicsParams& phys, const StepParams& stp,
                   int cutoff);

/// Momentum cannot change when there is no capillary coupling and u = 0.
bool fluid_dormant(const SimState& state, const PhysicsParams& phys);

/// Lie splitting: Heun on the momentum equation with phi frozen, then
/// ac_step with the updated velocity.
class Stepper {
public:
    Stepper(const PhysicsParams& phys, const ModeSet& basis, bool dealias = true);

    const MollifierKernel& kernel() const { return kern_; }
    const ModeSet& basis() const { return basis_; }
    const PhysicsParams& physics() const { return phys_; }

    SimState step(const SimState& state, double dt) const;
    SimState step(const SimState& state, const StateFields& fields, double dt) const;
    /// Heun update of u alone with phi frozen.
    SpectralVector momentum_step(const SimState& state, double dt) const;
    SpectralVector momentum_step(const SimState& state, const StateFields& fields, double dt) const;

private:
    PhysicsParams phys_;
    ModeSet basis_;
    MollifierKernel kern_;
    bool dealias_;
};

SimState step(const SimState& state, const PhysicsParams& phys, const StepParams& stp, const ModeSet& basis);

/// Initial state of a configuration.
SimState initial_state(const SimConfig& cfg, std::vector<std::string>* warnings = nullptr);

enum class RunStatus { ok, blowup };

struct History {
    std::vector<EnergyRecord> records;
    std::vector<Frame> frames;           // filled when RunHooks::keep_frames
    std::vector<double> step_times;      // t after each step, starting with t0
    std::vector<double> step_energy;     // total energy at each entry of step_times
    std::vector<double> step_dissipation;  // dissipation rate at each entry of step_times
    /// Sum over steps of dt times the dissipation rate at the end of the step.
    double accumulated_dissipation = 0.0;
    double max_div = 0.0;                // over every step
    double max_energy_above_cutoff = 0.0;
    double max_abs_phi = 0.0;
    double min_dt = 0.0;
    std::size_t steps = 0;
    RunStatus status = RunStatus::ok;
    std::string error;
    std::string dump;
    std::vector<std::string> warnings;
    SimState final_state;
};

struct RunHooks {
    bool keep_frames = false;
    /// Energy and dissipation after every step (needed for the energy audit).
    bool monitor_every_step = true;
    /// Full record diagnostics (density ratio, interface, Brakke); when false
    /// only energies and invariants are recorded.
    bool full_records = true;
    std::function<void(std::size_t step, const SimState&)> on_snapshot;
};

/// Initialize, then step to cfg.final_time. Blow-up truncates the history
/// and sets status; other errors propagate.
History run(const SimConfig& cfg, const RunHooks& hooks = {});

}  // namespace torusflow

#endif  // TORUSFLOW_STEPPER_HPP
