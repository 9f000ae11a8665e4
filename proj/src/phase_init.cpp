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

#include "torusflow/phase_init.hpp"

#include "torusflow/diagnostics.hpp"
#include "torusflow/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace torusflow {

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::circle: return "circle";
        case ScenarioKind::stripe: return "stripe";
        case ScenarioKind::two_circles: return "two_circles";
        case ScenarioKind::polyline: return "polyline";
    }
    return "circle";
}

std::string to_string(VelocityRecipe recipe) {
    switch (recipe) {
        case VelocityRecipe::zero: return "zero";
        case VelocityRecipe::shear: return "shear";
        case VelocityRecipe::modes: return "modes";
        case VelocityRecipe::translation: return "translation";
    }
    return "zero";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    if (name == "circle") return ScenarioKind::circle;
    if (name == "stripe") return ScenarioKind::stripe;
    if (name == "two_circles") return ScenarioKind::two_circles;
    if (name == "polyline") return ScenarioKind::polyline;
    throw ConfigError("scenario.kind must be one of circle, stripe, two_circles, polyline");
}

VelocityRecipe velocity_recipe_from_string(const std::string& name) {
    if (name == "zero") return VelocityRecipe::zero;
    if (name == "shear") return VelocityRecipe::shear;
    if (name == "modes") return VelocityRecipe::modes;
    if (name == "translation") return VelocityRecipe::translation;
    throw ConfigError("scenario.u0 must be one of zero, shear, modes, translation");
}

namespace {

using Point = std::array<double, 3>;

double torus_distance(const Point& x, const Point& c, int d) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
        const double dx = wrap_delta(x[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(a)]);
        r2 += dx * dx;
    }
    return std::sqrt(r2);
}

double circle_reach(double r) { return std::min(r, (1.0 - 2.0 * r) / 2.0); }

// Distance from p to segment [a, b] in the plane.
double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + s * ab)).norm();
}

int winding_number(const Eigen::Vector2d& p, const std::vector<std::array<double, 2>>& v) {
    int wn = 0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d a(v[i][0], v[i][1]);
        const Eigen::Vector2d b(v[(i + 1) % n][0], v[(i + 1) % n][1]);
        const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y());
        if (a.y() <= p.y()) {
            if (b.y() > p.y() && cross > 0) ++wn;
        } else if (b.y() <= p.y() && cross < 0) {
            --wn;
        }
    }
    return wn;
}

bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                    const Eigen::Vector2d& q2) {
    auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
        const double v = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        return (v > 0) - (v < 0);
    };
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

double polyline_signed_distance(const Scenario& scn, const Point& x) {
    const auto& v = scn.vertices;
    const std::size_t n = v.size();
    double best = std::numeric_limits<double>::infinity();
    bool inside = false;
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) {
            const Eigen::Vector2d p(x[0] + sx, x[1] + sy);
            for (std::size_t i = 0; i < n; ++i) {
                const Eigen::Vector2d a(v[i][0], v[i][1]);
                const Eigen::Vector2d b(v[(i + 1) % n][0], v[(i + 1) % n][1]);
                best = std::min(best, segment_distance(p, a, b));
            }
            if (winding_number(p, v) != 0) inside = true;
        }
    return inside ? best : -best;
}

double polyline_length(const Scenario& scn) {
    double len = 0.0;
    const auto& v = scn.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        len += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    return len;
}

}  // namespace

void Scenario::validate(int d) const {
    auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
    switch (kind) {
        case ScenarioKind::circle:
            if (!(radius > 0.0)) throw ConfigError("scenario.radius must be > 0");
            if (radius >= 0.45) throw ConfigError("scenario.radius exceeds 0.45");
            break;
        case ScenarioKind::two_circles: {
            if (!(radius > 0.0 && radius2 > 0.0)) throw ConfigError("scenario.radius and scenario.radius2 must be > 0");
            if (radius >= 0.45 || radius2 >= 0.45) throw ConfigError("scenario.radius exceeds 0.45");
            const double gap = torus_distance(center, center2, d) - radius - radius2;
            if (gap <= 0.0) throw ConfigError("scenario two_circles: discs overlap");
            break;
        }
        case ScenarioKind::stripe:
            if (!(y1 > y0) || !(y1 - y0 < 1.0)) throw ConfigError("scenario stripe needs y0 < y1 < y0 + 1");
            break;
        case ScenarioKind::polyline: {
            if (d != 2) throw ConfigError("scenario polyline requires grid.d = 2");
            if (vertices.size() < 3) throw ConfigError("scenario.vertices needs at least 3 points");
            for (const auto& p : vertices)
                if (!in_unit(p[0]) || !in_unit(p[1])) throw ConfigError("scenario.vertices must lie in [0,1)^2");
            const std::size_t n = vertices.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                    const Eigen::Vector2d p1(vertices[i][0], vertices[i][1]);
                    const Eigen::Vector2d p2(vertices[(i + 1) % n][0], vertices[(i + 1) % n][1]);
                    const Eigen::Vector2d q1(vertices[j][0], vertices[j][1]);
                    const Eigen::Vector2d q2(vertices[(j + 1) % n][0], vertices[(j + 1) % n][1]);
                    if (segments_cross(p1, p2, q1, q2))
                        throw ConfigError("scenario polyline self-intersects: winding number ill-defined");
                }
            break;
        }
    }
    for (int a = 0; a < d; ++a)
        if (!in_unit(center[static_cast<std::size_t>(a)])) throw ConfigError("scenario.center must lie in [0,1)^d");
    if (u0 == VelocityRecipe::shear && wavenumber < 1) throw ConfigError("scenario.u0.wavenumber must be >= 1");
}

double Scenario::reach(int d) const {
    switch (kind) {
        case ScenarioKind::circle: return circle_reach(radius);
        case ScenarioKind::stripe: return std::min((y1 - y0) / 2.0, (1.0 - (y1 - y0)) / 2.0);
        case ScenarioKind::two_circles: {
            const double gap = torus_distance(center, center2, d) - radius - radius2;
            return std::min({circle_reach(radius), circle_reach(radius2), gap / 2.0});
        }
        case ScenarioKind::polyline: {
            // Half the smallest distance between non-adjacent edges.
            const std::size_t n = vertices.size();
            double best = 0.5;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i || j == (i + 1) % n || (j + 1) % n == i) continue;
                    const Eigen::Vector2d p(vertices[i][0], vertices[i][1]);
                    const Eigen::Vector2d a(vertices[j][0], vertices[j][1]);
                    const Eigen::Vector2d b(vertices[(j + 1) % n][0], vertices[(j + 1) % n][1]);
                    best = std::min(best, segment_distance(p, a, b) / 2.0);
                }
            return best;
        }
    }
    return 0.0;
}

double Scenario::perimeter(int d) const {
    auto sphere = [d](double r) { return d == 2 ? kTwoPi * r : 4.0 * kPi * r * r; };
    switch (kind) {
        case ScenarioKind::circle: return sphere(radius);
        case ScenarioKind::two_circles: return sphere(radius) + sphere(radius2);
        case ScenarioKind::stripe: return 2.0;
        case ScenarioKind::polyline: return polyline_length(*this);
    }
    return 0.0;
}

double Scenario::max_curvature(int d) const {
    const double dims = d - 1;
    switch (kind) {
        case ScenarioKind::circle: return dims / radius;
        case ScenarioKind::two_circles: return dims / std::min(radius, radius2);
        case ScenarioKind::stripe: return 0.0;
        case ScenarioKind::polyline: return 0.0;
    }
    return 0.0;
}

double default_cap_scale(const Scenario& scn, int d) { return std::min(scn.reach(d) / 2.0, 0.1); }

double signed_distance(const Scenario& scn, int d, const std::array<double, 3>& x) {
    switch (scn.kind) {
        case ScenarioKind::circle: return scn.radius - torus_distance(x, scn.center, d);
        case ScenarioKind::two_circles:
            return std::max(scn.radius - torus_distance(x, scn.center, d), scn.radius2 - torus_distance(x, scn.center2, d));
        case ScenarioKind::stripe: {
            const double width = scn.y1 - scn.y0;
            const double u = x[1] - scn.y0 - std::floor(x[1] - scn.y0);
            if (u < width) return std::min(u, width - u);
            return -std::min(u - width, 1.0 - u);
        }
        case ScenarioKind::polyline: return polyline_signed_distance(scn, x);
    }
    return 0.0;
}

double smooth_cap(double s) {
    if (s < 0.0) return -smooth_cap(-s);
    if (s <= 0.25) return s;
    if (s >= 0.5) return 0.5;
    // Hermite data h(1/4) = 1/4, h'(1/4) = 1, h(1/2) = 1/2, h'(1/2) = 0.
    const double t = (s - 0.25) * 4.0;
    return 0.25 + 0.25 * t + 0.25 * t * t - 0.25 * t * t * t;
}

ScalarField initial_phase(const Scenario& scn, const ProfileParams& prm, const GridSpec& grid) {
    grid.validate();
    scn.validate(grid.d);
    if (prm.eps < 2.0 * grid.spacing()) throw ConfigError("epsilon < 2h: interface under-resolved");
    if (!(prm.b > 0.0)) throw ConfigError("cap scale b must be > 0");
    ScalarField phi(grid);
    const double h = grid.spacing();
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto idx = grid_index(grid, p);
        const std::array<double, 3> x{idx[0] * h, idx[1] * h, idx[2] * h};
        const double dist = signed_distance(scn, grid.d, x);
        phi.values(static_cast<Eigen::Index>(p)) = std::tanh(prm.b * smooth_cap(dist / prm.b) / prm.eps);
    }
    return phi;
}

std::vector<std::string> profile_warnings(const Scenario& scn, const ProfileParams& prm, const GridSpec& grid) {
    std::vector<std::string> out;
    std::ostringstream msg;
    if (prm.eps > prm.b / 10.0) {
        msg << "epsilon " << prm.eps << " exceeds b/10 = " << prm.b / 10.0 << "; profile plateau is tanh(b/(2 eps)) = "
            << std::tanh(prm.b / (2.0 * prm.eps));
        out.push_back(msg.str());
        msg.str("");
    }
    if (prm.b > scn.reach(grid.d)) {
        msg << "cap scale b " << prm.b << " exceeds boundary reach " << scn.reach(grid.d);
        out.push_back(msg.str());
        msg.str("");
    }
    if (prm.eps * scn.max_curvature(grid.d) > 0.2) {
        msg << "epsilon * max curvature = " << prm.eps * scn.max_curvature(grid.d) << " > 0.2";
        out.push_back(msg.str());
    }
    return out;
}

SpectralVector initial_velocity(const Scenario& scn, const ModeSet& basis, std::vector<std::string>* warnings) {
    const GridSpec& grid = basis.grid;
    const int d = grid.d;
    VectorField u(grid);
    const double h = grid.spacing();
    switch (scn.u0) {
        case VelocityRecipe::zero: break;
        case VelocityRecipe::shear:
            if (scn.wavenumber > basis.cutoff && warnings)
                warnings->push_back("shear wavenumber above cutoff K; mode dropped");
            for (std::size_t p = 0; p < grid.points(); ++p) {
                const auto idx = grid_index(grid, p);
                u[0](static_cast<Eigen::Index>(p)) = scn.amplitude * std::sin(kTwoPi * scn.wavenumber * idx[1] * h);
            }
            break;
        case VelocityRecipe::translation:
            for (int a = 0; a < d; ++a) u[a].setConstant(scn.velocity[static_cast<std::size_t>(a)]);
            break;
        case VelocityRecipe::modes:
            for (const auto& m : scn.modes) {
                double k2 = 0.0;
                for (int a = 0; a < d; ++a) k2 += static_cast<double>(m.k[static_cast<std::size_t>(a)]) * m.k[static_cast<std::size_t>(a)];
                if (k2 > static_cast<double>(basis.cutoff) * basis.cutoff) {
                    if (warnings) warnings->push_back("recipe mode above cutoff K dropped");
                    continue;
                }
                if (k2 == 0.0) {
                    if (m.polarization < 0 || m.polarization >= d) throw ConfigError("mode polarization out of range");
                    u[m.polarization] += m.amplitude;
                    continue;
                }
                const auto pols = basis.polarization_vectors(m.k);
                if (m.polarization < 0 || m.polarization >= static_cast<int>(pols.size()))
                    throw ConfigError("mode polarization out of range");
                const Eigen::Vector3d pol = pols[static_cast<std::size_t>(m.polarization)];
                for (std::size_t p = 0; p < grid.points(); ++p) {
                    const auto idx = grid_index(grid, p);
                    double phase = 0.0;
                    for (int a = 0; a < d; ++a) phase += m.k[static_cast<std::size_t>(a)] * idx[static_cast<std::size_t>(a)] * h;
                    const double s = m.amplitude * std::sqrt(2.0) * std::cos(kTwoPi * phase);
                    for (int a = 0; a < d; ++a) u[a](static_cast<Eigen::Index>(p)) += s * pol(a);
                }
            }
            break;
    }
    return galerkin_truncate(leray_project(forward(u)), basis);
}

InitialEnergyReport initial_energy_check(const ScalarField& phi0, const SpectralVector& u0, double eps, double kappa1,
                                         const Scenario& scn) {
    if (!(phi0.grid == u0.grid)) throw UsageError("initial_energy_check: grid mismatch");
    InitialEnergyReport rep;
    rep.surface = surface_measure(phi0, eps);
    rep.kinetic = kinetic_energy(u0);
    rep.perimeter = scn.perimeter(phi0.grid.d);
    rep.discrete = kappa1 * rep.surface + rep.kinetic;
    rep.analytic = kappa1 * rep.perimeter + rep.kinetic;
    rep.exceeds = rep.discrete > 1.05 * rep.analytic;
    return rep;
}

}  // namespace torusflow
