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

#ifndef TORUSFLOW_CONFIG_HPP
#define TORUSFLOW_CONFIG_HPP

#include "torusflow/diagnostics.hpp"
#include "torusflow/phase_init.hpp"
#include "torusflow/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace torusflow {

/// Complete, reproducible description of one run.
struct SimConfig {
    GridSpec grid{2, 256};
    int cutoff = 0;  // Galerkin cutoff K; 0 selects N/4

    PhysicsParams physics;
    double cap_scale = 0.0;  // profile cap b; 0 selects min(reach/2, 0.1)

    Scenario scenario;

    StepParams stepping;
    double final_time = 0.02;

    int record_interval = 50;
    std::vector<double> radii;  // empty selects default_radii
    int center_stride = 4;
    TestFunction brakke_test;
    BrakkeTolerance brakke_tol;

    std::string output_dir = "torusflow_out";
    int snapshot_interval = 500;  // 0 writes only the first and last state
    bool write_csv = true;
    bool write_snapshots = true;

    std::uint64_t seed = 1;

    int resolved_cutoff() const { return cutoff > 0 ? cutoff : grid.n / 4; }
    double resolved_cap_scale() const { return cap_scale > 0.0 ? cap_scale : default_cap_scale(scenario, grid.d); }
    ProfileParams profile() const { return {physics.eps, resolved_cap_scale(), physics.gamma}; }

    /// Every module-level precondition; throws ConfigError naming the key.
    void validate() const;
    /// Advisories that do not block a run.
    std::vector<std::string> warnings() const;

    bool operator==(const SimConfig&) const = default;
};

/// Parse a flat `dotted.key = value` document ('#' starts a comment).
SimConfig parse_config(const std::string& text);

/// Echo every key with its materialized value; parse_config(to_text(c)) == c.
std::string to_text(const SimConfig& cfg);

}  // namespace torusflow

#endif  // TORUSFLOW_CONFIG_HPP
