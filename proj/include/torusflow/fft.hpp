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

#ifndef TORUSFLOW_FFT_HPP
#define TORUSFLOW_FFT_HPP

#include "torusflow/grid.hpp"

#include <memory>

namespace torusflow {

/// Real-to-complex transform pair for one grid, plus the wavevector tables
/// of its half-complex layout (last axis stores k = 0 .. n/2).
///
/// Plans are built with FFTW_ESTIMATE so that the arithmetic is identical
/// from run to run. Execution is thread-safe.
class Fft {
public:
    explicit Fft(const GridSpec& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    const GridSpec& grid() const { return grid_; }

    /// Coefficients normalized by 1/n^d.
    ComplexArray forward(const RealArray& values) const;
    RealArray inverse(const ComplexArray& coeffs) const;

    /// Signed integer wavenumber along `axis` for every stored coefficient.
    const RealArray& wavenumber(int axis) const { return k_[static_cast<std::size_t>(axis)]; }
    /// |k|^2 in integer units.
    const RealArray& k_squared() const { return k2_; }
    /// Multiplicity of each stored coefficient in the full spectrum (1 or 2).
    const RealArray& multiplicity() const { return weight_; }
    /// 1 where the coefficient sits on the Nyquist plane of `axis`.
    const Eigen::Array<bool, Eigen::Dynamic, 1>& nyquist(int axis) const { return nyq_[static_cast<std::size_t>(axis)]; }

private:
    struct Plans;
    GridSpec grid_;
    std::unique_ptr<Plans> plans_;
    std::vector<RealArray> k_;
    RealArray k2_;
    RealArray weight_;
    std::vector<Eigen::Array<bool, Eigen::Dynamic, 1>> nyq_;
};

/// Process-wide cached transform for a grid.
const Fft& fft_for(const GridSpec& grid);

inline SpectralScalar forward(const ScalarField& f) { return {f.grid, fft_for(f.grid).forward(f.values)}; }
inline ScalarField inverse(const SpectralScalar& s) { return {s.grid, fft_for(s.grid).inverse(s.coeffs)}; }
SpectralVector forward(const VectorField& v);
VectorField inverse(const SpectralVector& s);

/// <f, g>_{L^2} from coefficients (Parseval on the half-complex layout).
double spectral_inner(const GridSpec& grid, const ComplexArray& f, const ComplexArray& g);

}  // namespace torusflow

#endif  // TORUSFLOW_FFT_HPP
