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

#ifndef TORUSFLOW_SPECTRAL_HPP
#define TORUSFLOW_SPECTRAL_HPP

#include "torusflow/fft.hpp"
#include "torusflow/grid.hpp"

#include <string>
#include <vector>

namespace torusflow {

using Wavevector = std::array<int, 3>;

/// Truncated divergence-free Fourier basis.
///
/// `modes` holds one representative per conjugate pair (first non-zero
/// component positive), sorted by |k| and then lexicographically. The basis
/// fields are enumerated as: the d constant fields e_a, then per mode and
/// per polarization a cosine field followed by a sine field, each scaled to
/// unit L^2 norm.
struct ModeSet {
    GridSpec grid;
    int cutoff = 1;
    std::vector<Wavevector> modes;

    std::size_t polarizations() const { return static_cast<std::size_t>(grid.d - 1); }
    std::size_t size() const { return static_cast<std::size_t>(grid.d) + 2 * polarizations() * modes.size(); }

    /// Unit polarization vectors orthogonal to k, in a fixed order.
    std::vector<Eigen::Vector3d> polarization_vectors(const Wavevector& k) const;

    /// Materialize the j-th basis field on the grid.
    VectorField basis_field(std::size_t j) const;
};

ModeSet build_mode_basis(const GridSpec& grid, int cutoff);

/// Spectral Leray projector (I - k k^T / |k|^2); the mean is kept.
SpectralVector leray_project(const SpectralVector& v);
VectorField leray_project(const VectorField& v);

/// Zero every coefficient with |k| > cutoff.
SpectralVector galerkin_truncate(const SpectralVector& v, const ModeSet& basis);
VectorField galerkin_truncate(const VectorField& v, const ModeSet& basis);
SpectralVector truncate_to(const SpectralVector& v, int cutoff);

/// Sum of (1/2)|c_k|^2 over coefficients with |k| > cutoff.
double energy_above(const SpectralVector& v, int cutoff);

// Spectral differential operators. Odd derivatives drop the Nyquist plane.
SpectralVector gradient(const SpectralScalar& f);
VectorField gradient(const ScalarField& f);
SpectralScalar divergence(const SpectralVector& v);
ScalarField divergence(const VectorField& v);
SpectralScalar laplacian(const SpectralScalar& f);
ScalarField laplacian(const ScalarField& f);
/// e(u) = (grad u + grad u^T) / 2 on the grid.
SymTensorField sym_gradient(const SpectralVector& u);
SymTensorField sym_gradient(const VectorField& u);
/// (div T)_a = sum_b d_b T_ab.
SpectralVector divergence(const SymTensorField& t);

/// Max over grid points of |div v|.
double max_divergence(const SpectralVector& v);

enum class MollifierMode { theory, interface, grid, none };

std::string to_string(MollifierMode mode);
MollifierMode mollifier_mode_from_string(const std::string& name);

/// Periodized, unit-mass smoothing kernel built from the standard bump
/// exp(-1/(1-|x|^2)) on the unit ball, rescaled to `width`.
struct MollifierKernel {
    GridSpec grid;
    MollifierMode mode = MollifierMode::interface;
    double width = 0.0;
    RealArray samples;
    ComplexArray hat;
};

/// Widths: theory eps^(gamma/d), interface eps, grid 4h, none a discrete delta.
MollifierKernel mollifier_kernel(const GridSpec& grid, double eps, double gamma, MollifierMode mode);

ScalarField mollify(const ScalarField& f, const MollifierKernel& kern);
VectorField mollify(const VectorField& v, const MollifierKernel& kern);
SymTensorField mollify(const SymTensorField& t, const MollifierKernel& kern);
SpectralVector mollify(const SpectralVector& v, const MollifierKernel& kern);

/// div(t * zeta) evaluated in Fourier space.
SpectralVector mollified_divergence(const SymTensorField& t, const MollifierKernel& kern);

}  // namespace torusflow

#endif  // TORUSFLOW_SPECTRAL_HPP
