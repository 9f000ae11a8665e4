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

#include <unordered_map>

namespace torusflow {

namespace {

Eigen::Vector2d wrap_vec(const Eigen::Vector2d& v) { return {wrap_delta(v.x()), wrap_delta(v.y())}; }

// Crossing edges are keyed by 2 * (i N + j) + {0: edge along axis 0, 1: along axis 1}.
struct Marcher {
    const GridSpec& grid;
    const RealArray& f;
    int n;

    double at(int i, int j) const {
        i = (i % n + n) % n;
        j = (j % n + n) % n;
        return f(static_cast<Eigen::Index>(i) * n + j);
    }

    long key(int i, int j, int axis) const {
        i = (i % n + n) % n;
        j = (j % n + n) % n;
        return 2L * (static_cast<long>(i) * n + j) + axis;
    }

    Eigen::Vector2d point(long k) const {
        const int axis = static_cast<int>(k % 2);
        const long cell = k / 2;
        const int i = static_cast<int>(cell / n);
        const int j = static_cast<int>(cell % n);
        const double a = at(i, j);
        const double b = axis == 0 ? at(i + 1, j) : at(i, j + 1);
        const double s = a / (a - b);
        const double h = grid.spacing();
        return axis == 0 ? Eigen::Vector2d((i + s) * h, j * h) : Eigen::Vector2d(i * h, (j + s) * h);
    }
};

double circumcurvature(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    const Eigen::Vector2d ab = b - a, bc = c - b, ac = c - a;
    const double den = ab.norm() * bc.norm() * ac.norm();
    if (den <= 0.0) return 0.0;
    return 2.0 * std::abs(ab.x() * ac.y() - ab.y() * ac.x()) / den;
}

void estimate_curvature(InterfaceLoop& loop, double span) {
    const auto& v = loop.vertices;
    const std::size_t m = v.size();
    loop.curvature.assign(m, 0.0);
    if (m < 3) return;
    std::vector<Eigen::Vector2d> seg(m);  // seg[i] = v[i+1] - v[i] on the torus
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        seg[i] = wrap_vec(v[(i + 1) % m] - v[i]);
        total += seg[i].norm();
    }
    span = std::min(span, total / 4.0);
    for (std::size_t i = 0; i < m; ++i) {
        Eigen::Vector2d fwd = Eigen::Vector2d::Zero(), back = Eigen::Vector2d::Zero();
        double lf = 0.0, lb = 0.0;
        for (std::size_t s = 0; s < m && lf < span; ++s) {
            fwd += seg[(i + s) % m];
            lf += seg[(i + s) % m].norm();
        }
        for (std::size_t s = 1; s <= m && lb < span; ++s) {
            back -= seg[(i + m - s) % m];
            lb += seg[(i + m - s) % m].norm();
        }
        loop.curvature[i] = circumcurvature(back, Eigen::Vector2d::Zero(), fwd);
    }
}

}  // namespace

double InterfaceLoop::length() const {
    double len = 0.0;
    const std::size_t m = vertices.size();
    for (std::size_t i = 0; i < m; ++i) len += wrap_vec(vertices[(i + 1) % m] - vertices[i]).norm();
    return len;
}

double InterfaceCurve::length() const {
    double len = 0.0;
    for (const auto& l : loops) len += l.length();
    return len;
}

InterfaceCurve extract_interface(const ScalarField& phi) {
    const GridSpec& grid = phi.grid;
    if (grid.d != 2) throw UsageError("extract_interface: d must be 2");
    const int n = grid.n;
    const Marcher mc{grid, phi.values, n};
    std::unordered_map<long, std::vector<long>> adj;
    auto link = [&](long a, long b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double c00 = mc.at(i, j), c10 = mc.at(i + 1, j), c11 = mc.at(i + 1, j + 1), c01 = mc.at(i, j + 1);
            // Cell edges counter-clockwise: bottom, right, top, left.
            const std::array<long, 4> edge{mc.key(i, j, 0), mc.key(i + 1, j, 1), mc.key(i, j + 1, 0), mc.key(i, j, 1)};
            const std::array<bool, 4> cross{(c00 > 0) != (c10 > 0), (c10 > 0) != (c11 > 0), (c01 > 0) != (c11 > 0),
                                            (c00 > 0) != (c01 > 0)};
            std::vector<int> hit;
            for (int e = 0; e < 4; ++e)
                if (cross[static_cast<std::size_t>(e)]) hit.push_back(e);
            if (hit.size() == 2) {
                link(edge[static_cast<std::size_t>(hit[0])], edge[static_cast<std::size_t>(hit[1])]);
            } else if (hit.size() == 4) {
                const bool center_pos = (c00 + c10 + c11 + c01) / 4.0 > 0;
                if (center_pos == (c00 > 0)) {
                    link(edge[0], edge[1]);
                    link(edge[2], edge[3]);
                } else {
                    link(edge[0], edge[3]);
                    link(edge[1], edge[2]);
                }
            }
        }
    }

    InterfaceCurve curve;
    std::vector<long> keys;
    keys.reserve(adj.size());
    for (const auto& kv : adj) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    std::unordered_map<long, bool> seen;
    for (long start : keys) {
        if (seen[start]) continue;
        InterfaceLoop loop;
        long prev = -1, cur = start;
        Eigen::Vector2d pos = mc.point(start);
        while (true) {
            seen[cur] = true;
            loop.vertices.push_back(pos);
            const auto& nb = adj[cur];
            long next = -1;
            for (long c : nb)
                if (c != prev || nb.size() == 1) {
                    next = c;
                    break;
                }
            if (nb.size() == 2 && nb[0] == nb[1]) next = nb[0];
            if (next < 0 || next == start || seen[next]) break;
            pos += wrap_vec(mc.point(next) - mc.point(cur));
            prev = cur;
            cur = next;
        }
        const Eigen::Vector2d closing = pos + wrap_vec(mc.point(start) - mc.point(cur)) - loop.vertices.front();
        loop.wraps = closing.norm() > 0.5;
        estimate_curvature(loop, 2.0 * grid.spacing());
        curve.loops.push_back(std::move(loop));
    }
    return curve;
}

}  // namespace torusflow
