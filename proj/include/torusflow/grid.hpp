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

#ifndef TORUSFLOW_GRID_HPP
#define TORUSFLOW_GRID_HPP

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace torusflow {

using RealArray = Eigen::ArrayXd;
using ComplexArray = Eigen::ArrayXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform periodic lattice on the unit torus T^d.
///
/// Grid points are stored row-major: axis 0 varies slowest, the last axis
/// fastest. Point (i0, i1[, i2]) sits at x = (i0, i1[, i2]) * h.
struct GridSpec {
    int d = 2;
    int n = 256;

    double spacing() const { return 1.0 / n; }
    double cell_volume() const { return std::pow(spacing(), d); }
    std::size_t points() const {
        std::size_t p = 1;
        for (int a = 0; a < d; ++a) p *= static_cast<std::size_t>(n);
        return p;
    }
    /// Number of stored half-complex Fourier coefficients.
    std::size_t modes() const { return points() / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1); }

    /// Throws ConfigError unless d in {2,3}, n >= 16 and n even.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Grid point coordinates of a linear index.
inline std::array<int, 3> grid_index(const GridSpec& g, std::size_t linear) {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = g.d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(linear % static_cast<std::size_t>(g.n));
        linear /= static_cast<std::size_t>(g.n);
    }
    return idx;
}

inline std::size_t grid_linear(const GridSpec& g, const std::array<int, 3>& idx) {
    std::size_t linear = 0;
    for (int a = 0; a < g.d; ++a) {
        int i = idx[a] % g.n;
        if (i < 0) i += g.n;
        linear = linear * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(i);
    }
    return linear;
}

/// Shortest signed displacement on the unit circle, in [-1/2, 1/2).
inline double wrap_delta(double dx) { return dx - std::floor(dx + 0.5); }

struct ScalarField {
    GridSpec grid;
    RealArray values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), values(RealArray::Zero(static_cast<Eigen::Index>(g.points()))) {}
    ScalarField(const GridSpec& g, RealArray v) : grid(g), values(std::move(v)) {}
};

struct VectorField {
    GridSpec grid;
    std::vector<RealArray> components;

    VectorField() = default;
    explicit VectorField(const GridSpec& g)
        : grid(g), components(static_cast<std::size_t>(g.d), RealArray::Zero(static_cast<Eigen::Index>(g.points()))) {}

    const RealArray& operator[](int a) const { return components[static_cast<std::size_t>(a)]; }
    RealArray& operator[](int a) { return components[static_cast<std::size_t>(a)]; }
};

/// Symmetric d x d tensor per grid point, upper-triangular storage
/// ordered (0,0), (0,1), ..., (0,d-1), (1,1), ..., (d-1,d-1).
struct SymTensorField {
    GridSpec grid;
    std::vector<RealArray> entries;

    SymTensorField() = default;
    explicit SymTensorField(const GridSpec& g)
        : grid(g),
          entries(static_cast<std::size_t>(g.d * (g.d + 1) / 2), RealArray::Zero(static_cast<Eigen::Index>(g.points()))) {}

    static int slot(int d, int a, int b) {
        if (a > b) std::swap(a, b);
        return a * d - a * (a - 1) / 2 + (b - a);
    }
    const RealArray& operator()(int a, int b) const { return entries[static_cast<std::size_t>(slot(grid.d, a, b))]; }
    RealArray& operator()(int a, int b) { return entries[static_cast<std::size_t>(slot(grid.d, a, b))]; }
};

/// Fourier coefficients in half-complex layout, normalized so that
/// f(x) = sum_k c_k exp(2 pi i k.x).
struct SpectralScalar {
    GridSpec grid;
    ComplexArray coeffs;

    SpectralScalar() = default;
    explicit SpectralScalar(const GridSpec& g) : grid(g), coeffs(ComplexArray::Zero(static_cast<Eigen::Index>(g.modes()))) {}
    SpectralScalar(const GridSpec& g, ComplexArray c) : grid(g), coeffs(std::move(c)) {}
};

struct SpectralVector {
    GridSpec grid;
    std::vector<ComplexArray> components;

    SpectralVector() = default;
    explicit SpectralVector(const GridSpec& g)
        : grid(g), components(static_cast<std::size_t>(g.d), ComplexArray::Zero(static_cast<Eigen::Index>(g.modes()))) {}

    const ComplexArray& operator[](int a) const { return components[static_cast<std::size_t>(a)]; }
    ComplexArray& operator[](int a) { return components[static_cast<std::size_t>(a)]; }
};

/// Pairwise (tree) summation; the order is fixed by the length alone so
/// results are bitwise reproducible.
double pairwise_sum(std::span<const double> values);

inline double pairwise_sum(const RealArray& values) {
    return pairwise_sum(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// Grid quadrature of a field over the torus.
inline double integrate(const GridSpec& g, const RealArray& values) { return pairwise_sum(values) * g.cell_volume(); }

}  // namespace torusflow

#endif  // TORUSFLOW_GRID_HPP
