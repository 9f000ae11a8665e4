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

#include "torusflow/stepper.hpp"

#include "torusflow/errors.hpp"

#include <limits>
#include <sstream>

namespace torusflow {

namespace {

bool all_finite(const SpectralVector& v) {
    for (const auto& c : v.components)
        if (!c.isFinite().all()) return false;
    return true;
}

std::string state_dump(const SimState& s, const char* where) {
    std::ostringstream out;
    out << "where=" << where << " t=" << s.t;
    if (s.phi.values.size() > 0) out << " phi_min=" << s.phi.values.minCoeff() << " phi_max=" << s.phi.values.maxCoeff();
    double umax = 0.0;
    for (const auto& c : s.u_hat.components) umax = std::max(umax, c.abs().maxCoeff());
    out << " max|u_hat|=" << umax;
    return out.str();
}

// 2/3-rule box filter: keep |k_a| <= n/3 on every axis.
void dealias_filter(SpectralVector& v) {
    const Fft& fft = fft_for(v.grid);
    const double limit = v.grid.n / 3.0;
    RealArray keep = RealArray::Ones(static_cast<Eigen::Index>(v.grid.modes()));
    for (int a = 0; a < v.grid.d; ++a) keep *= (fft.wavenumber(a).abs() <= limit).cast<double>();
    for (auto& c : v.components) c *= keep;
}

using Jacobian = std::vector<std::vector<RealArray>>;

void velocity_fields(const SpectralVector& u_hat, VectorField& u, Jacobian& grad) {
    const Fft& fft = fft_for(u_hat.grid);
    const int d = u_hat.grid.d;
    u = inverse(u_hat);
    grad.assign(static_cast<std::size_t>(d), std::vector<RealArray>(static_cast<std::size_t>(d)));
    for (int a = 0; a < d; ++a) {
        const SpectralVector g = gradient(SpectralScalar(u_hat.grid, u_hat[a]));
        for (int b = 0; b < d; ++b) grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = fft.inverse(g[b]);
    }
}

RealArray strain_norm2(const Jacobian& grad, int d) {
    RealArray n2 = RealArray::Zero(grad[0][0].size());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const RealArray e = 0.5 * (grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                                       grad[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
            n2 += e.square();
        }
    return n2;
}

SymTensorField stress_from_gradient(const Jacobian& grad, const ScalarField& phi, const StressLaw& law) {
    const GridSpec& grid = phi.grid;
    const int d = grid.d;
    SymTensorField tau(grid);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            tau(a, b) = 0.5 * (grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                               grad[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
    RealArray n2 = RealArray::Zero(static_cast<Eigen::Index>(grid.points()));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) n2 += tau(a, b).square();
    RealArray factor(n2.size());
    for (Eigen::Index i = 0; i < n2.size(); ++i) factor(i) = blend_factor(phi.values(i), n2(i), law);
    for (auto& e : tau.entries) e *= factor;
    return tau;
}

SpectralVector advection_from_gradient(const VectorField& u, const Jacobian& grad, bool dealias) {
    const GridSpec& grid = u.grid;
    const int d = grid.d;
    VectorField prod(grid);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) prod[a] += u[b] * grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    SpectralVector out = forward(prod);
    if (dealias) dealias_filter(out);
    for (auto& c : out.components) c = -c;
    return out;
}

SpectralVector project(const SpectralVector& v, int cutoff) { return truncate_to(leray_project(v), cutoff); }

SymTensorField capillary_from_gradient(const VectorField& g, double eps, double kappa1) {
    const int d = g.grid.d;
    const double scale = kappa1 * eps / sigma_const();
    SymTensorField t(g.grid);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) t(a, b) = scale * g[a] * g[b];
    return t;
}

SpectralVector capillary_force_from_gradient(const VectorField& g, const MollifierKernel& kern, double eps,
                                             double kappa1, int cutoff) {
    SpectralVector div = mollified_divergence(capillary_from_gradient(g, eps, kappa1), kern);
    for (auto& c : div.components) c = -c;
    return project(div, cutoff);
}

SpectralVector rhs_from_fields(const VectorField& u, const Jacobian& grad, const ScalarField& phi,
                               const PhysicsParams& phys, int cutoff, const SpectralVector* capillary, bool dealias) {
    SpectralVector total = advection_from_gradient(u, grad, dealias);
    if (phys.stress_enabled) {
        const SpectralVector a = divergence(stress_from_gradient(grad, phi, phys.law));
        for (int c = 0; c < u.grid.d; ++c) total[c] += a[c];
    }
    total = project(total, cutoff);
    if (capillary)
        for (int c = 0; c < u.grid.d; ++c) total[c] += (*capillary)[c];
    if (!all_finite(total)) throw BlowUpError("non-finite momentum right-hand side", "momentum_rhs");
    return total;
}

ScalarField ac_step_with_gradient(const ScalarField& phi, const VectorField& grad, const SpectralVector& u_hat,
                                  const PhysicsParams& phys, const MollifierKernel& kern, double dt) {
    const GridSpec& grid = phi.grid;
    const Fft& fft = fft_for(grid);
    const VectorField vel = inverse(mollify(u_hat, kern));
    RealArray transport = RealArray::Zero(phi.values.size());
    for (int a = 0; a < grid.d; ++a) transport += vel[a] * grad[a];
    const double inv_eps2 = 1.0 / (phys.eps * phys.eps);
    const RealArray& p = phi.values;
    const RealArray reaction = -2.0 * p * (1.0 - p.square());  // W'(phi)
    const RealArray explicit_part = p - dt * transport - dt * phys.kappa2 * inv_eps2 * reaction;
    const RealArray denom = 1.0 + phys.kappa2 * dt * 4.0 * kPi * kPi * fft.k_squared();
    ScalarField next(grid, fft.inverse(fft.forward(explicit_part) / denom));
    if (!next.values.isFinite().all() || next.values.abs().maxCoeff() > 1.1) {
        std::ostringstream msg;
        msg << "phase field left [-1.1, 1.1]: max|phi| = " << next.values.abs().maxCoeff();
        throw BlowUpError(msg.str(), "ac_step");
    }
    return next;
}

}  // namespace

StateFields state_fields(const SimState& state) {
    StateFields f;
    f.phi_hat = forward(state.phi);
    f.grad_phi = inverse(gradient(f.phi_hat));
    velocity_fields(state.u_hat, f.u, f.grad_u);
    return f;
}

SymTensorField capillary_tensor(const ScalarField& phi, const MollifierKernel& kern, double eps, double kappa1) {
    return mollify(capillary_from_gradient(gradient(phi), eps, kappa1), kern);
}

SpectralVector capillary_force(const ScalarField& phi, const MollifierKernel& kern, double eps, double kappa1, int cutoff) {
    return capillary_force_from_gradient(gradient(phi), kern, eps, kappa1, cutoff);
}

SpectralVector stress_term(const SpectralVector& u_hat, const ScalarField& phi, const StressLaw& law, int cutoff) {
    VectorField u;
    Jacobian grad;
    velocity_fields(u_hat, u, grad);
    return project(divergence(stress_from_gradient(grad, phi, law)), cutoff);
}

SpectralVector advection_term(const SpectralVector& u_hat, int cutoff, bool dealias) {
    VectorField u;
    Jacobian grad;
    velocity_fields(u_hat, u, grad);
    return project(advection_from_gradient(u, grad, dealias), cutoff);
}

SpectralVector momentum_rhs(const SimState& state, const PhysicsParams& phys, const ModeSet& basis,
                            const MollifierKernel& kern, bool dealias) {
    SpectralVector cap = capillary_force(state.phi, kern, phys.eps, phys.kappa1, basis.cutoff);
    for (auto& c : cap.components) c *= phys.capillary_sign;
    VectorField u;
    Jacobian grad;
    velocity_fields(state.u_hat, u, grad);
    try {
        return rhs_from_fields(u, grad, state.phi, phys, basis.cutoff, &cap, dealias);
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.what(), state_dump(state, "momentum_rhs"));
    }
}

ScalarField ac_step(const ScalarField& phi, const SpectralVector& u_hat, const PhysicsParams& phys,
                    const MollifierKernel& kern, double dt) {
    return ac_step_with_gradient(phi, gradient(phi), u_hat, phys, kern, dt);
}

bool fluid_dormant(const SimState& state, const PhysicsParams& phys) {
    if (phys.kappa1 != 0.0) return false;
    for (const auto& c : state.u_hat.components)
        if ((c != std::complex<double>(0.0)).any()) return false;
    return true;
}

DtBounds stable_dt(const SimState& state, const PhysicsParams& phys, const StepParams& stp, int cutoff) {
    return stable_dt(state, state_fields(state), phys, stp, cutoff);
}

DtBounds stable_dt(const SimState& state, const StateFields& fields, const PhysicsParams& phys, const StepParams& stp,
                   int cutoff) {
    const GridSpec& grid = state.phi.grid;
    const double inf = std::numeric_limits<double>::infinity();
    DtBounds b;
    b.reaction = phys.eps * phys.eps / (4.0 * phys.kappa2);
    b.advection = inf;
    b.viscous = inf;
    if (!fluid_dormant(state, phys)) {
        RealArray speed2 = RealArray::Zero(static_cast<Eigen::Index>(grid.points()));
        for (int a = 0; a < grid.d; ++a) speed2 += fields.u[a].square();
        b.advection = grid.spacing() / (2.0 * std::sqrt(speed2.maxCoeff()) + 1e-12);
        if (phys.stress_enabled) {
            const double n2max = strain_norm2(fields.grad_u, grid.d).maxCoeff();
            const auto& law = phys.law;
            // The tangent bound is non-decreasing in |s| for p >= 2.
            const double nu = std::max(carreau_tangent_bound(n2max, law.a_plus, law.b_plus, law.p),
                                       carreau_tangent_bound(n2max, law.a_minus, law.b_minus, law.p));
            b.viscous = 1.0 / (kPi * kPi * nu * static_cast<double>(cutoff) * cutoff);
        }
    }
    b.dt = stp.safety * std::min({b.reaction, b.advection, b.viscous});
    if (!(b.dt >= 1e-12)) throw BlowUpError("time step collapsed below 1e-12 (velocity runaway)", state_dump(state, "stable_dt"));
    return b;
}

Stepper::Stepper(const PhysicsParams& phys, const ModeSet& basis, bool dealias)
    : phys_(phys),
      basis_(basis),
      kern_(mollifier_kernel(basis.grid, phys.eps, phys.gamma, phys.mollifier)),
      dealias_(dealias) {}

SpectralVector Stepper::momentum_step(const SimState& state, double dt) const {
    return momentum_step(state, state_fields(state), dt);
}

SpectralVector Stepper::momentum_step(const SimState& state, const StateFields& fields, double dt) const {
    if (fluid_dormant(state, phys_)) return state.u_hat;
    SpectralVector cap;
    const SpectralVector* cap_ptr = nullptr;
    if (phys_.kappa1 != 0.0) {
        cap = capillary_force_from_gradient(fields.grad_phi, kern_, phys_.eps, phys_.kappa1, basis_.cutoff);
        for (auto& c : cap.components) c *= phys_.capillary_sign;
        cap_ptr = &cap;
    }
    const int d = state.u_hat.grid.d;
    try {
        const SpectralVector f0 =
            rhs_from_fields(fields.u, fields.grad_u, state.phi, phys_, basis_.cutoff, cap_ptr, dealias_);
        SpectralVector u1 = state.u_hat;
        for (int a = 0; a < d; ++a) u1[a] += dt * f0[a];
        VectorField u1_grid;
        Jacobian u1_grad;
        velocity_fields(u1, u1_grid, u1_grad);
        const SpectralVector f1 = rhs_from_fields(u1_grid, u1_grad, state.phi, phys_, basis_.cutoff, cap_ptr, dealias_);
        SpectralVector next = state.u_hat;
        for (int a = 0; a < d; ++a) next[a] += 0.5 * dt * (f0[a] + f1[a]);
        return next;
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.what(), state_dump(state, "momentum_step"));
    }
}

SimState Stepper::step(const SimState& state, double dt) const { return step(state, state_fields(state), dt); }

SimState Stepper::step(const SimState& state, const StateFields& fields, double dt) const {
    SimState next;
    next.u_hat = momentum_step(state, fields, dt);
    try {
        next.phi = ac_step_with_gradient(state.phi, fields.grad_phi, next.u_hat, phys_, kern_, dt);
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.what(), state_dump(state, "ac_step"));
    }
    next.t = state.t + dt;
    return next;
}

SimState step(const SimState& state, const PhysicsParams& phys, const StepParams& stp, const ModeSet& basis) {
    const Stepper stepper(phys, basis, stp.dealias);
    const StateFields fields = state_fields(state);
    const double dt = stp.policy == DtPolicy::fixed ? stp.dt : stable_dt(state, fields, phys, stp, basis.cutoff).dt;
    return stepper.step(state, fields, dt);
}

SimState initial_state(const SimConfig& cfg, std::vector<std::string>* warnings) {
    const ModeSet basis = build_mode_basis(cfg.grid, cfg.resolved_cutoff());
    SimState s;
    s.phi = initial_phase(cfg.scenario, cfg.profile(), cfg.grid);
    s.u_hat = initial_velocity(cfg.scenario, basis, warnings);
    s.t = 0.0;
    return s;
}

namespace {

struct StepMonitor {
    double energy = 0.0;
    double dissipation = 0.0;  // visc + kappa1 kappa2 * AC dissipation rate
};

// Same quantities as kinetic_energy, surface_measure, viscous_dissipation and
// allen_cahn_dissipation, computed from already transformed fields.
StepMonitor monitor(const SimState& s, const StateFields& f, const PhysicsParams& phys) {
    const GridSpec& grid = s.phi.grid;
    const RealArray& p = s.phi.values;
    const double eps = phys.eps;
    RealArray g2 = RealArray::Zero(p.size());
    for (int a = 0; a < grid.d; ++a) g2 += f.grad_phi[a].square();
    const RealArray dens = (eps * g2 / 2.0 + 0.5 * (1.0 - p.square()).square() / eps) / sigma_const();
    StepMonitor m;
    m.energy = kinetic_energy(s.u_hat) + phys.kappa1 * integrate(grid, dens);

    double visc = 0.0;
    if (phys.stress_enabled && !fluid_dormant(s, phys)) {
        const RealArray n2 = strain_norm2(f.grad_u, grid.d);
        RealArray integrand(n2.size());
        for (Eigen::Index i = 0; i < n2.size(); ++i) integrand(i) = blend_factor(p(i), n2(i), phys.law) * n2(i);
        visc = integrate(grid, integrand);
    }
    const RealArray lap = inverse(laplacian(f.phi_hat)).values;
    const RealArray chem = lap + 2.0 * p * (1.0 - p.square()) / (eps * eps);
    const double ac = eps / sigma_const() * integrate(grid, RealArray(chem.square()));
    m.dissipation = visc + phys.kappa1 * phys.kappa2 * ac;
    return m;
}

}  // namespace

History run(const SimConfig& cfg, const RunHooks& hooks) {
    cfg.validate();
    History hist;
    hist.warnings = cfg.warnings();
    const int cutoff = cfg.resolved_cutoff();
    const ModeSet basis = build_mode_basis(cfg.grid, cutoff);
    const Stepper stepper(cfg.physics, basis, cfg.stepping.dealias);
    SimState state = initial_state(cfg, &hist.warnings);

    RecordOptions ropts;
    ropts.radii = cfg.radii;
    ropts.center_stride = cfg.center_stride;
    ropts.test = cfg.brakke_test;
    ropts.full = hooks.full_records;

    const double T = cfg.final_time;
    const bool fixed = cfg.stepping.policy == DtPolicy::fixed;
    const std::size_t fixed_steps =
        fixed ? static_cast<std::size_t>(std::ceil(T / cfg.stepping.dt - 1e-9)) : 0;
    const auto ri = static_cast<std::size_t>(std::max(1, cfg.record_interval));
    const auto si = static_cast<std::size_t>(std::max(0, cfg.snapshot_interval));

    auto record = [&](const SimState& s) {
        EnergyRecord rec = measure_state(s, cfg.physics, stepper.kernel(), cutoff, ropts);
        if (!hist.records.empty()) {
            const EnergyRecord& prev = hist.records.back();
            rec.brakke_lhs = rec.brakke_mu - prev.brakke_mu;
            rec.brakke_rhs = 0.5 * (rec.t - prev.t) * (rec.brakke_b + prev.brakke_b);
        }
        hist.records.push_back(rec);
        if (hooks.keep_frames) hist.frames.push_back({s.t, s.phi, s.u_hat});
    };

    StateFields fields = state_fields(state);
    StepMonitor mon;
    if (hooks.monitor_every_step) mon = monitor(state, fields, cfg.physics);
    hist.step_times.push_back(state.t);
    hist.step_energy.push_back(mon.energy);
    hist.step_dissipation.push_back(mon.dissipation);
    hist.max_div = max_divergence(state.u_hat);
    hist.max_energy_above_cutoff = energy_above(state.u_hat, cutoff);
    hist.max_abs_phi = state.phi.values.abs().maxCoeff();
    hist.min_dt = std::numeric_limits<double>::infinity();
    record(state);
    if (hooks.on_snapshot) hooks.on_snapshot(0, state);

    std::size_t n = 0;
    try {
        while (fixed ? n < fixed_steps : state.t < T * (1.0 - 1e-12)) {
            double dt;
            if (fixed) {
                const double t_next = std::min(static_cast<double>(n + 1) * cfg.stepping.dt, T);
                dt = t_next - state.t;
            } else {
                dt = std::min(stable_dt(state, fields, cfg.physics, cfg.stepping, cutoff).dt, T - state.t);
            }
            state = stepper.step(state, fields, dt);
            if (fixed) state.t = std::min(static_cast<double>(n + 1) * cfg.stepping.dt, T);
            ++n;
            fields = state_fields(state);
            hist.min_dt = std::min(hist.min_dt, dt);
            hist.max_div = std::max(hist.max_div, max_divergence(state.u_hat));
            hist.max_energy_above_cutoff = std::max(hist.max_energy_above_cutoff, energy_above(state.u_hat, cutoff));
            hist.max_abs_phi = std::max(hist.max_abs_phi, state.phi.values.abs().maxCoeff());
            if (hooks.monitor_every_step) {
                mon = monitor(state, fields, cfg.physics);
                hist.accumulated_dissipation += dt * mon.dissipation;
            }
            hist.step_times.push_back(state.t);
            hist.step_energy.push_back(mon.energy);
            hist.step_dissipation.push_back(mon.dissipation);
            const bool last = fixed ? n == fixed_steps : state.t >= T * (1.0 - 1e-12);
            if (n % ri == 0 || last) record(state);
            if (hooks.on_snapshot && ((si > 0 && n % si == 0) || last)) hooks.on_snapshot(n, state);
        }
    } catch (const BlowUpError& e) {
        hist.status = RunStatus::blowup;
        hist.error = e.what();
        hist.dump = e.dump();
    }
    hist.steps = n;
    hist.final_state = state;
    return hist;
}

}  // namespace torusflow
