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

#include "torusflow/spectral.hpp"

#include "torusflow/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>

namespace torusflow {

namespace {

// i 2 pi k_a, zero on the Nyquist plane of axis a.
ComplexArray derivative_multiplier(const Fft& fft, int axis) {
    const RealArray& k = fft.wavenumber(axis);
    const auto& nyq = fft.nyquist(axis);
    ComplexArray m(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) m(i) = nyq(i) ? std::complex<double>(0.0) : std::complex<double>(0.0, kTwoPi * k(i));
    return m;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw UsageError(std::string(where) + ": grid mismatch");
}

bool canonical(const Wavevector& k, int d) {
    for (int a = 0; a < d; ++a) {
        if (k[static_cast<std::size_t>(a)] > 0) return true;
        if (k[static_cast<std::size_t>(a)] < 0) return false;
    }
    return false;
}

}  // namespace

ModeSet build_mode_basis(const GridSpec& grid, int cutoff) {
    grid.validate();
    if (cutoff < 1 || 3 * cutoff > grid.n) throw ConfigError("grid.K must satisfy 1 <= K <= N/3");
    ModeSet set;
    set.grid = grid;
    set.cutoff = cutoff;
    const int d = grid.d;
    const int zmax = d == 3 ? cutoff : 0;
    for (int i = -cutoff; i <= cutoff; ++i)
        for (int j = -cutoff; j <= cutoff; ++j)
            for (int l = -zmax; l <= zmax; ++l) {
                const Wavevector k{i, j, l};
                if (i * i + j * j + l * l > cutoff * cutoff) continue;
                if (canonical(k, d)) set.modes.push_back(k);
            }
    std::sort(set.modes.begin(), set.modes.end(), [](const Wavevector& a, const Wavevector& b) {
        const int na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        const int nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
        if (na != nb) return na < nb;
        return a < b;
    });
    return set;
}

std::vector<Eigen::Vector3d> ModeSet::polarization_vectors(const Wavevector& k) const {
    const Eigen::Vector3d kv(k[0], k[1], k[2]);
    if (grid.d == 2) return {Eigen::Vector3d(-kv.y(), kv.x(), 0.0).normalized()};
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(k[static_cast<std::size_t>(a)]) < std::abs(k[static_cast<std::size_t>(axis)])) axis = a;
    const Eigen::Vector3d e1 = kv.cross(Eigen::Vector3d::Unit(axis)).normalized();
    const Eigen::Vector3d e2 = kv.normalized().cross(e1);
    return {e1, e2};
}

VectorField ModeSet::basis_field(std::size_t j) const {
    if (j >= size()) throw UsageError("basis_field: index out of range");
    VectorField field(grid);
    const int d = grid.d;
    if (j < static_cast<std::size_t>(d)) {
        field[static_cast<int>(j)].setOnes();
        return field;
    }
    const std::size_t rel = j - static_cast<std::size_t>(d);
    const std::size_t per_mode = 2 * polarizations();
    const Wavevector& k = modes[rel / per_mode];
    const std::size_t within = rel % per_mode;
    const Eigen::Vector3d pol = polarization_vectors(k)[within / 2];
    const bool use_cos = (within % 2) == 0;
    const double h = grid.spacing();
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto idx = grid_index(grid, p);
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += k[static_cast<std::size_t>(a)] * idx[static_cast<std::size_t>(a)] * h;
        const double s = std::sqrt(2.0) * (use_cos ? std::cos(kTwoPi * phase) : std::sin(kTwoPi * phase));
        for (int a = 0; a < d; ++a) field[a](static_cast<Eigen::Index>(p)) = s * pol(a);
    }
    return field;
}

SpectralVector leray_project(const SpectralVector& v) {
    const Fft& fft = fft_for(v.grid);
    const int d = v.grid.d;
    // Nyquist components of k are dropped, matching the derivative, so the
    // result stays Hermitian and has zero discrete divergence.
    std::vector<RealArray> k(static_cast<std::size_t>(d));
    RealArray k2 = RealArray::Zero(static_cast<Eigen::Index>(v.grid.modes()));
    for (int a = 0; a < d; ++a) {
        k[static_cast<std::size_t>(a)] = fft.nyquist(a).select(0.0, fft.wavenumber(a));
        k2 += k[static_cast<std::size_t>(a)].square();
    }
    ComplexArray kdotv = ComplexArray::Zero(k2.size());
    for (int b = 0; b < d; ++b) kdotv += k[static_cast<std::size_t>(b)] * v[b];
    const RealArray inv_k2 = (k2 > 0.0).select(k2.inverse(), 0.0);
    SpectralVector out = v;
    for (int a = 0; a < d; ++a) out[a] -= k[static_cast<std::size_t>(a)] * inv_k2 * kdotv;
    return out;
}

VectorField leray_project(const VectorField& v) { return inverse(leray_project(forward(v))); }

SpectralVector truncate_to(const SpectralVector& v, int cutoff) {
    const RealArray keep = (fft_for(v.grid).k_squared() <= static_cast<double>(cutoff) * cutoff).cast<double>();
    SpectralVector out = v;
    for (auto& c : out.components) c *= keep;
    return out;
}

SpectralVector galerkin_truncate(const SpectralVector& v, const ModeSet& basis) {
    require_same_grid(v.grid, basis.grid, "galerkin_truncate");
    return truncate_to(v, basis.cutoff);
}

VectorField galerkin_truncate(const VectorField& v, const ModeSet& basis) { return inverse(galerkin_truncate(forward(v), basis)); }

double energy_above(const SpectralVector& v, int cutoff) {
    const Fft& fft = fft_for(v.grid);
    const RealArray above = (fft.k_squared() > static_cast<double>(cutoff) * cutoff).cast<double>();
    double e = 0.0;
    for (const auto& c : v.components) e += 0.5 * pairwise_sum(RealArray(above * fft.multiplicity() * c.abs2()));
    return e;
}

SpectralVector gradient(const SpectralScalar& f) {
    const Fft& fft = fft_for(f.grid);
    SpectralVector g(f.grid);
    for (int a = 0; a < f.grid.d; ++a) g[a] = derivative_multiplier(fft, a) * f.coeffs;
    return g;
}

VectorField gradient(const ScalarField& f) { return inverse(gradient(forward(f))); }

SpectralScalar divergence(const SpectralVector& v) {
    const Fft& fft = fft_for(v.grid);
    SpectralScalar out(v.grid);
    for (int a = 0; a < v.grid.d; ++a) out.coeffs += derivative_multiplier(fft, a) * v[a];
    return out;
}

ScalarField divergence(const VectorField& v) { return inverse(divergence(forward(v))); }

SpectralScalar laplacian(const SpectralScalar& f) {
    const Fft& fft = fft_for(f.grid);
    return {f.grid, f.coeffs * (-4.0 * kPi * kPi * fft.k_squared())};
}

ScalarField laplacian(const ScalarField& f) { return inverse(laplacian(forward(f))); }

SymTensorField sym_gradient(const SpectralVector& u) {
    const Fft& fft = fft_for(u.grid);
    const int d = u.grid.d;
    std::vector<ComplexArray> mult;
    for (int a = 0; a < d; ++a) mult.push_back(derivative_multiplier(fft, a));
    SymTensorField e(u.grid);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            const ComplexArray c = a == b ? ComplexArray(mult[static_cast<std::size_t>(a)] * u[a])
                                          : ComplexArray(0.5 * (mult[static_cast<std::size_t>(b)] * u[a] + mult[static_cast<std::size_t>(a)] * u[b]));
            e(a, b) = fft.inverse(c);
        }
    return e;
}

SymTensorField sym_gradient(const VectorField& u) { return sym_gradient(forward(u)); }

SpectralVector divergence(const SymTensorField& t) {
    const Fft& fft = fft_for(t.grid);
    const int d = t.grid.d;
    std::vector<ComplexArray> mult;
    for (int a = 0; a < d; ++a) mult.push_back(derivative_multiplier(fft, a));
    std::vector<ComplexArray> hat;
    for (const auto& e : t.entries) hat.push_back(fft.forward(e));
    SpectralVector out(t.grid);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            out[a] += mult[static_cast<std::size_t>(b)] * hat[static_cast<std::size_t>(SymTensorField::slot(d, a, b))];
    return out;
}

double max_divergence(const SpectralVector& v) {
    const SpectralScalar div = divergence(v);
    return fft_for(v.grid).inverse(div.coeffs).abs().maxCoeff();
}

std::string to_string(MollifierMode mode) {
    switch (mode) {
        case MollifierMode::theory: return "theory";
        case MollifierMode::interface: return "interface";
        case MollifierMode::grid: return "grid";
        case MollifierMode::none: return "none";
    }
    return "interface";
}

MollifierMode mollifier_mode_from_string(const std::string& name) {
    if (name == "theory") return MollifierMode::theory;
    if (name == "interface") return MollifierMode::interface;
    if (name == "grid") return MollifierMode::grid;
    if (name == "none") return MollifierMode::none;
    throw ConfigError("physics.mollifier must be one of theory, interface, grid, none");
}

MollifierKernel mollifier_kernel(const GridSpec& grid, double eps, double gamma, MollifierMode mode) {
    grid.validate();
    if (!(gamma > 0.0 && gamma < 0.5)) throw ConfigError("physics.gamma must lie in (0, 1/2)");
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("physics.epsilon must lie in (0, 1]");
    const double h = grid.spacing();
    MollifierKernel kern;
    kern.grid = grid;
    kern.mode = mode;
    kern.samples = RealArray::Zero(static_cast<Eigen::Index>(grid.points()));
    switch (mode) {
        case MollifierMode::theory: kern.width = std::pow(eps, gamma / grid.d); break;
        case MollifierMode::interface: kern.width = eps; break;
        case MollifierMode::grid: kern.width = 4.0 * h; break;
        case MollifierMode::none: kern.width = 0.0; break;
    }
    if (mode == MollifierMode::none) {
        kern.samples(0) = 1.0 / grid.cell_volume();
        kern.hat = ComplexArray::Ones(static_cast<Eigen::Index>(grid.modes()));
        return kern;
    }
    if (kern.width < 2.0 * h) throw ConfigError("mollifier width below 2h: kernel unresolvable");

    const double w = kern.width;
    const int images = static_cast<int>(std::ceil(w));
    const int d = grid.d;
    const int zr = d == 3 ? images : 0;
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto idx = grid_index(grid, p);
        double acc = 0.0;
        for (int s0 = -images; s0 <= images; ++s0)
            for (int s1 = -images; s1 <= images; ++s1)
                for (int s2 = -zr; s2 <= zr; ++s2) {
                    const std::array<int, 3> shift{s0, s1, s2};
                    double r2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const double x = wrap_delta(idx[static_cast<std::size_t>(a)] * h) + shift[static_cast<std::size_t>(a)];
                        r2 += x * x;
                    }
                    r2 /= w * w;
                    if (r2 < 1.0) acc += std::exp(-1.0 / (1.0 - r2));
                }
        kern.samples(static_cast<Eigen::Index>(p)) = acc;
    }
    kern.samples /= integrate(grid, kern.samples);
    // The kernel is even, so its transform is real; drop round-off imaginary parts.
    kern.hat = fft_for(grid).forward(kern.samples).real().cast<std::complex<double>>();
    return kern;
}

ScalarField mollify(const ScalarField& f, const MollifierKernel& kern) {
    require_same_grid(f.grid, kern.grid, "mollify");
    if (kern.mode == MollifierMode::none) return f;
    const Fft& fft = fft_for(f.grid);
    return {f.grid, fft.inverse(fft.forward(f.values) * kern.hat)};
}

VectorField mollify(const VectorField& v, const MollifierKernel& kern) {
    VectorField out = v;
    for (int a = 0; a < v.grid.d; ++a) out[a] = mollify(ScalarField(v.grid, v[a]), kern).values;
    return out;
}

SymTensorField mollify(const SymTensorField& t, const MollifierKernel& kern) {
    SymTensorField out = t;
    for (auto& e : out.entries) e = mollify(ScalarField(t.grid, e), kern).values;
    return out;
}

SpectralVector mollify(const SpectralVector& v, const MollifierKernel& kern) {
    require_same_grid(v.grid, kern.grid, "mollify");
    SpectralVector out = v;
    if (kern.mode == MollifierMode::none) return out;
    for (auto& c : out.components) c *= kern.hat;
    return out;
}

SpectralVector mollified_divergence(const SymTensorField& t, const MollifierKernel& kern) {
    require_same_grid(t.grid, kern.grid, "mollified_divergence");
    const Fft& fft = fft_for(t.grid);
    const int d = t.grid.d;
    std::vector<ComplexArray> hat;
    for (const auto& e : t.entries) {
        hat.push_back(fft.forward(e));
        if (kern.mode != MollifierMode::none) hat.back() *= kern.hat;
    }
    SpectralVector out(t.grid);
    for (int a = 0; a < d; ++a) {
        const ComplexArray mult = derivative_multiplier(fft, a);
        for (int b = 0; b < d; ++b) out[b] += mult * hat[static_cast<std::size_t>(SymTensorField::slot(d, a, b))];
    }
    return out;
}

}  // namespace torusflow
