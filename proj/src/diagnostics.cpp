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

#include <limits>
#include <random>

namespace torusflow {

namespace {

RealArray grad_norm2(const VectorField& g) {
    RealArray n2 = RealArray::Zero(g[0].size());
    for (const auto& c : g.components) n2 += c.square();
    return n2;
}

RealArray w_array(const RealArray& p) { return 0.5 * (1.0 - p.square()).square(); }
RealArray w_prime_array(const RealArray& p) { return -2.0 * p * (1.0 - p.square()); }

double sphere_constant(int d) { return d == 2 ? 2.0 : kPi; }

}  // namespace

ScalarField surface_density(const ScalarField& phi, double eps) {
    const RealArray g2 = grad_norm2(gradient(phi));
    return {phi.grid, (eps * g2 / 2.0 + w_array(phi.values) / eps) / sigma_const()};
}

double surface_measure(const ScalarField& phi, double eps, const ScalarField* weight) {
    const ScalarField dens = surface_density(phi, eps);
    if (!weight) return integrate(phi.grid, dens.values);
    if (!(weight->grid == phi.grid)) throw UsageError("surface_measure: weight grid mismatch");
    return integrate(phi.grid, RealArray(dens.values * weight->values));
}

ScalarField discrepancy_field(const ScalarField& phi, double eps) {
    const RealArray g2 = grad_norm2(gradient(phi));
    return {phi.grid, eps * g2 / 2.0 - w_array(phi.values) / eps};
}

std::vector<double> default_radii(const GridSpec& grid) {
    std::vector<double> radii;
    for (double r = 4.0 * grid.spacing(); r <= 0.5 + 1e-12; r *= 2.0)
        if (r > 2.0 * grid.spacing()) radii.push_back(std::min(r, 0.5));
    return radii;
}

double density_ratio(const ScalarField& phi, double eps, const std::vector<double>& radii, int center_stride) {
    const GridSpec& grid = phi.grid;
    const Fft& fft = fft_for(grid);
    if (center_stride < 1) throw UsageError("density_ratio: center_stride must be >= 1");
    const ComplexArray mu_hat = fft.forward(surface_density(phi, eps).values);
    const double h = grid.spacing();
    const double omega = sphere_constant(grid.d);
    double best = 1.0;
    for (double r : radii) {
        if (!(r > 2.0 * h && r <= 0.5 + 1e-12)) throw UsageError("density_ratio: radii must lie in (2h, 1/2]");
        RealArray ball = RealArray::Zero(static_cast<Eigen::Index>(grid.points()));
        for (std::size_t p = 0; p < grid.points(); ++p) {
            const auto idx = grid_index(grid, p);
            double r2 = 0.0;
            for (int a = 0; a < grid.d; ++a) {
                const double dx = wrap_delta(idx[static_cast<std::size_t>(a)] * h);
                r2 += dx * dx;
            }
            if (r2 <= r * r * (1.0 + 1e-12)) ball(static_cast<Eigen::Index>(p)) = 1.0;
        }
        // mass(x) = int_{B_r(x)} mu: periodic convolution of mu with the ball indicator.
        const RealArray mass = fft.inverse(mu_hat * fft.forward(ball));
        const double norm = omega * std::pow(r, grid.d - 1);
        for (std::size_t p = 0; p < grid.points(); ++p) {
            const auto idx = grid_index(grid, p);
            bool on_stride = true;
            for (int a = 0; a < grid.d; ++a) on_stride = on_stride && idx[static_cast<std::size_t>(a)] % center_stride == 0;
            if (on_stride) best = std::max(best, mass(static_cast<Eigen::Index>(p)) / norm);
        }
    }
    return best;
}

CurvatureField mean_curvature_field(const ScalarField& phi, double eps, double floor) {
    const GridSpec& grid = phi.grid;
    const SpectralScalar phi_hat = forward(phi);
    const VectorField g = inverse(gradient(phi_hat));
    const RealArray lap = inverse(laplacian(phi_hat)).values;
    const RealArray gn = grad_norm2(g).sqrt();
    CurvatureField out;
    out.floor = floor >= 0.0 ? floor : 0.05 * gn.maxCoeff();
    out.mask = (gn >= out.floor) && (gn > 0.0);
    out.h = VectorField(grid);
    const RealArray chem = lap - w_prime_array(phi.values) / (eps * eps);
    const RealArray safe = out.mask.select(gn, 1.0);
    const RealArray scale = out.mask.select(-chem / safe.square(), 0.0);
    for (int a = 0; a < grid.d; ++a) out.h[a] = scale * g[a];
    return out;
}

std::string to_string(TestFunction::Kind kind) { return kind == TestFunction::Kind::const1 ? "const1" : "gaussian_bump"; }

TestFunction::Kind test_function_kind_from_string(const std::string& name) {
    if (name == "const1") return TestFunction::Kind::const1;
    if (name == "gaussian_bump") return TestFunction::Kind::gaussian_bump;
    throw ConfigError("diagnostics.brakke_test must be const1 or gaussian_bump");
}

ScalarField TestFunction::evaluate(const GridSpec& grid) const {
    ScalarField f(grid);
    if (kind == Kind::const1) {
        f.values.setOnes();
        return f;
    }
    const double h = grid.spacing();
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto idx = grid_index(grid, p);
        double r2 = 0.0;
        for (int a = 0; a < grid.d; ++a) {
            const double dx = wrap_delta(idx[static_cast<std::size_t>(a)] * h - center[static_cast<std::size_t>(a)]);
            r2 += dx * dx;
        }
        f.values(static_cast<Eigen::Index>(p)) = std::exp(-r2 / (2.0 * width * width));
    }
    return f;
}

BrakkeValue brakke_functional(const ScalarField& phi, const SpectralVector& u_hat, double eps, double kappa2,
                              const ScalarField& test, const MollifierKernel& kern) {
    const GridSpec& grid = phi.grid;
    if (!(test.grid == grid) || !(u_hat.grid == grid)) throw UsageError("brakke_functional: grid mismatch");
    if (test.values.minCoeff() < 0.0) throw UsageError("brakke_functional: test function must be non-negative");
    BrakkeValue out;
    const VectorField g = gradient(phi);
    const RealArray gn = grad_norm2(g).sqrt();
    if (gn.maxCoeff() == 0.0) {
        out.coverage = 1.0;
        out.valid = true;
        return out;
    }
    const CurvatureField hc = mean_curvature_field(phi, eps);
    const RealArray mu = surface_density(phi, eps).values;
    const VectorField um = inverse(mollify(u_hat, kern));
    const VectorField gt = gradient(test);
    const RealArray safe = hc.mask.select(gn, 1.0);

    RealArray un = RealArray::Zero(mu.size());  // (u*zeta) . n
    for (int a = 0; a < grid.d; ++a) un += um[a] * g[a] / safe;
    RealArray integrand = RealArray::Zero(mu.size());
    for (int a = 0; a < grid.d; ++a) {
        const RealArray left = -test.values * hc.h[a] + gt[a];
        const RealArray right = kappa2 * hc.h[a] + un * g[a] / safe;
        integrand += left * right;
    }
    integrand = hc.mask.select(integrand * mu, 0.0);
    out.value = integrate(grid, integrand);
    const double total = pairwise_sum(mu);
    out.coverage = total > 0.0 ? pairwise_sum(RealArray(hc.mask.select(mu, 0.0))) / total : 1.0;
    out.valid = out.coverage >= 0.95;
    return out;
}

namespace {

BrakkeReport make_report(double t1, double t2, double lhs, double rhs, const std::string& name, BrakkeTolerance tol) {
    BrakkeReport r;
    r.t1 = t1;
    r.t2 = t2;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    r.test_name = name;
    r.passed = std::isfinite(r.residual) && r.residual <= tol.abs + tol.rel * std::abs(rhs);
    return r;
}

BrakkeReport skipped_report(double t1, double t2, const std::string& name) {
    BrakkeReport r;
    r.t1 = t1;
    r.t2 = t2;
    r.test_name = name;
    r.skipped = true;
    r.reason = "Brakke functional invalid: curvature mask covers < 95% of the surface measure";
    return r;
}

}  // namespace

std::vector<BrakkeReport> brakke_inequality_check(const std::vector<EnergyRecord>& records, const std::string& test_name,
                                                  BrakkeTolerance tol) {
    std::vector<BrakkeReport> out;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& a = records[k - 1];
        const auto& b = records[k];
        if (!a.brakke_valid || !b.brakke_valid) {
            out.push_back(skipped_report(a.t, b.t, test_name));
            continue;
        }
        const double lhs = b.brakke_mu - a.brakke_mu;
        const double rhs = 0.5 * (b.t - a.t) * (a.brakke_b + b.brakke_b);
        out.push_back(make_report(a.t, b.t, lhs, rhs, test_name, tol));
    }
    return out;
}

std::vector<BrakkeReport> brakke_inequality_check(const std::vector<Frame>& frames, const TestFunction& test,
                                                  const PhysicsParams& phys, BrakkeTolerance tol) {
    std::vector<EnergyRecord> recs;
    if (frames.empty()) return {};
    const GridSpec& grid = frames.front().phi.grid;
    const MollifierKernel kern = mollifier_kernel(grid, phys.eps, phys.gamma, phys.mollifier);
    const ScalarField tf = test.evaluate(grid);
    for (const auto& f : frames) {
        EnergyRecord r;
        r.t = f.t;
        r.brakke_mu = surface_measure(f.phi, phys.eps, &tf);
        const BrakkeValue b = brakke_functional(f.phi, f.u_hat, phys.eps, phys.kappa2, tf, kern);
        r.brakke_b = b.value;
        r.brakke_valid = b.valid;
        recs.push_back(r);
    }
    return brakke_inequality_check(recs, to_string(test.kind), tol);
}

double korn_ratio(const VectorField& v, double p) {
    const GridSpec& grid = v.grid;
    const int d = grid.d;
    RealArray v2 = RealArray::Zero(static_cast<Eigen::Index>(grid.points()));
    for (int a = 0; a < d; ++a) v2 += v[a].square();
    RealArray g2 = RealArray::Zero(v2.size());
    for (int a = 0; a < d; ++a) g2 += grad_norm2(gradient(ScalarField(grid, v[a])));
    const SymTensorField e = sym_gradient(v);
    RealArray e2 = RealArray::Zero(v2.size());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) e2 += e(a, b).square();
    const double num = integrate(grid, RealArray(v2.pow(p / 2.0))) + integrate(grid, RealArray(g2.pow(p / 2.0)));
    const double l1 = integrate(grid, RealArray(v2.sqrt()));
    const double den = integrate(grid, RealArray(e2.pow(p / 2.0))) + std::pow(l1, p);
    return num / den;
}

double korn_ratio_sampler(const GridSpec& grid, double p, int samples, std::uint64_t seed) {
    if (samples < 10) throw UsageError("korn_ratio_sampler: samples must be >= 10");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> wave(-4, 4);
    const double h = grid.spacing();
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        VectorField v(grid);
        for (int a = 0; a < grid.d; ++a) v[a].setConstant(normal(rng));
        for (int term = 0; term < 6; ++term) {
            const Wavevector k{wave(rng), wave(rng), grid.d == 3 ? wave(rng) : 0};
            std::array<double, 3> ca{}, sa{};
            for (int a = 0; a < grid.d; ++a) {
                ca[static_cast<std::size_t>(a)] = normal(rng);
                sa[static_cast<std::size_t>(a)] = normal(rng);
            }
            for (std::size_t pt = 0; pt < grid.points(); ++pt) {
                const auto idx = grid_index(grid, pt);
                double phase = 0.0;
                for (int a = 0; a < grid.d; ++a) phase += k[static_cast<std::size_t>(a)] * idx[static_cast<std::size_t>(a)] * h;
                const double c = std::cos(kTwoPi * phase), sn = std::sin(kTwoPi * phase);
                for (int a = 0; a < grid.d; ++a)
                    v[a](static_cast<Eigen::Index>(pt)) += ca[static_cast<std::size_t>(a)] * c + sa[static_cast<std::size_t>(a)] * sn;
            }
        }
        best = std::max(best, korn_ratio(v, p));
    }
    return best;
}

std::optional<double> mcf_circle_oracle(double r0, double kappa2, double t) {
    const double r2 = r0 * r0 - 2.0 * kappa2 * t;
    if (r2 < -1e-15) return std::nullopt;
    return std::sqrt(std::max(r2, 0.0));
}

double viscous_dissipation(const ScalarField& phi, const SpectralVector& u_hat, const StressLaw& law) {
    const SymTensorField e = sym_gradient(u_hat);
    const int d = phi.grid.d;
    RealArray n2 = RealArray::Zero(phi.values.size());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) n2 += e(a, b).square();
    RealArray integrand(n2.size());
    for (Eigen::Index i = 0; i < n2.size(); ++i) integrand(i) = blend_factor(phi.values(i), n2(i), law) * n2(i);
    return integrate(phi.grid, integrand);
}

double allen_cahn_dissipation(const ScalarField& phi, double eps) {
    const RealArray lap = laplacian(phi).values;
    const RealArray chem = lap - w_prime_array(phi.values) / (eps * eps);
    return eps / sigma_const() * integrate(phi.grid, RealArray(chem.square()));
}

double kinetic_energy(const SpectralVector& u_hat) {
    double e = 0.0;
    for (const auto& c : u_hat.components) e += 0.5 * spectral_inner(u_hat.grid, c, c);
    return e;
}

EnergyRecord measure_state(const SimState& state, const PhysicsParams& phys, const MollifierKernel& kern, int cutoff,
                           const RecordOptions& opts) {
    EnergyRecord r;
    const GridSpec& grid = state.phi.grid;
    r.t = state.t;
    r.kinetic = kinetic_energy(state.u_hat);
    r.surface = surface_measure(state.phi, phys.eps);
    r.total = r.kinetic + phys.kappa1 * r.surface;
    r.dissipation_visc = phys.stress_enabled ? viscous_dissipation(state.phi, state.u_hat, phys.law) : 0.0;
    r.dissipation_ac = allen_cahn_dissipation(state.phi, phys.eps);
    r.discrepancy_max = discrepancy_field(state.phi, phys.eps).values.maxCoeff();
    r.phi_min = state.phi.values.minCoeff();
    r.phi_max = state.phi.values.maxCoeff();
    r.max_div = max_divergence(state.u_hat);
    r.energy_above_cutoff = energy_above(state.u_hat, cutoff);
    r.interface_length = std::numeric_limits<double>::quiet_NaN();
    r.density_ratio = std::numeric_limits<double>::quiet_NaN();
    if (!opts.full) return r;
    r.density_ratio = density_ratio(state.phi, phys.eps, opts.radii.empty() ? default_radii(grid) : opts.radii,
                                    opts.center_stride);
    if (grid.d == 2) r.interface_length = extract_interface(state.phi).length();
    const ScalarField tf = opts.test.evaluate(grid);
    r.brakke_mu = surface_measure(state.phi, phys.eps, &tf);
    const BrakkeValue b = brakke_functional(state.phi, state.u_hat, phys.eps, phys.kappa2, tf, kern);
    r.brakke_b = b.value;
    r.brakke_valid = b.valid;
    return r;
}

}  // namespace torusflow
