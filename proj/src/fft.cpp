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

#include "torusflow/fft.hpp"

#include "torusflow/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <new>
#include <mutex>

namespace torusflow {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void GridSpec::validate() const {
    if (d != 2 && d != 3) throw ConfigError("grid.d must be 2 or 3");
    if (n < 16) throw ConfigError("grid.N must be >= 16");
    if (n % 2 != 0) throw ConfigError("grid.N must be even");
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 64;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct Fft::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

Fft::Fft(const GridSpec& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
    grid_.validate();
    const int d = grid_.d;
    const int n = grid_.n;
    const auto points = static_cast<Eigen::Index>(grid_.points());
    const auto modes = static_cast<Eigen::Index>(grid_.modes());

    std::array<int, 3> dims{n, n, n};
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        double* rbuf = fftw_alloc_real(static_cast<std::size_t>(points));
        fftw_complex* cbuf = fftw_alloc_complex(static_cast<std::size_t>(modes));
        const unsigned flags = FFTW_ESTIMATE;
        plans_->r2c = fftw_plan_dft_r2c(d, dims.data(), rbuf, cbuf, flags);
        plans_->c2r = fftw_plan_dft_c2r(d, dims.data(), cbuf, rbuf, flags | FFTW_DESTROY_INPUT);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
    if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("FFTW planning failed");

    const int half = n / 2 + 1;
    k_.assign(static_cast<std::size_t>(d), RealArray::Zero(modes));
    nyq_.assign(static_cast<std::size_t>(d), Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(modes, false));
    k2_ = RealArray::Zero(modes);
    weight_ = RealArray::Zero(modes);
    for (Eigen::Index m = 0; m < modes; ++m) {
        std::array<int, 3> idx{0, 0, 0};
        auto rest = m;
        idx[static_cast<std::size_t>(d - 1)] = static_cast<int>(rest % half);
        rest /= half;
        for (int a = d - 2; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = static_cast<int>(rest % n);
            rest /= n;
        }
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            const int k = (a == d - 1) ? i : (i <= n / 2 ? i : i - n);
            k_[static_cast<std::size_t>(a)](m) = k;
            nyq_[static_cast<std::size_t>(a)](m) = (std::abs(k) == n / 2);
            k2 += static_cast<double>(k) * k;
        }
        k2_(m) = k2;
        const int last = idx[static_cast<std::size_t>(d - 1)];
        weight_(m) = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    }
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
    if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

namespace {

// Per-thread FFTW-aligned scratch so plans can use SIMD codelets.
struct Scratch {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    std::size_t points = 0;
    std::size_t modes = 0;

    ~Scratch() {
        fftw_free(real);
        fftw_free(cplx);
    }

    void reserve(std::size_t p, std::size_t m) {
        if (p > points) {
            fftw_free(real);
            real = fftw_alloc_real(p);
            points = p;
        }
        if (m > modes) {
            fftw_free(cplx);
            cplx = fftw_alloc_complex(m);
            modes = m;
        }
        if (!real || !cplx) throw std::bad_alloc();
    }
};

Scratch& scratch(std::size_t points, std::size_t modes) {
    thread_local Scratch s;
    s.reserve(points, modes);
    return s;
}

}  // namespace

ComplexArray Fft::forward(const RealArray& values) const {
    if (values.size() != static_cast<Eigen::Index>(grid_.points())) throw UsageError("forward: field size does not match grid");
    Scratch& buf = scratch(grid_.points(), grid_.modes());
    std::copy(values.data(), values.data() + values.size(), buf.real);
    fftw_execute_dft_r2c(plans_->r2c, buf.real, buf.cplx);
    ComplexArray out(static_cast<Eigen::Index>(grid_.modes()));
    const auto* c = reinterpret_cast<const std::complex<double>*>(buf.cplx);
    const double scale = 1.0 / static_cast<double>(grid_.points());
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = c[i] * scale;
    return out;
}

RealArray Fft::inverse(const ComplexArray& coeffs) const {
    if (coeffs.size() != static_cast<Eigen::Index>(grid_.modes())) throw UsageError("inverse: coefficient size does not match grid");
    Scratch& buf = scratch(grid_.points(), grid_.modes());
    std::copy(coeffs.data(), coeffs.data() + coeffs.size(), reinterpret_cast<std::complex<double>*>(buf.cplx));
    fftw_execute_dft_c2r(plans_->c2r, buf.cplx, buf.real);
    return Eigen::Map<const RealArray>(buf.real, static_cast<Eigen::Index>(grid_.points()));
}

const Fft& fft_for(const GridSpec& grid) {
    static std::mutex cache_mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[{grid.d, grid.n}];
    if (!slot) slot = std::make_unique<Fft>(grid);
    return *slot;
}

SpectralVector forward(const VectorField& v) {
    SpectralVector s;
    s.grid = v.grid;
    const Fft& fft = fft_for(v.grid);
    for (const auto& c : v.components) s.components.push_back(fft.forward(c));
    return s;
}

VectorField inverse(const SpectralVector& s) {
    VectorField v;
    v.grid = s.grid;
    const Fft& fft = fft_for(s.grid);
    for (const auto& c : s.components) v.components.push_back(fft.inverse(c));
    return v;
}

double spectral_inner(const GridSpec& grid, const ComplexArray& f, const ComplexArray& g) {
    const RealArray terms = fft_for(grid).multiplicity() * (f * g.conjugate()).real();
    return pairwise_sum(terms);
}

}  // namespace torusflow
