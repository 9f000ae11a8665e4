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

#ifndef TORUSFLOW_VALIDATION_HPP
#define TORUSFLOW_VALIDATION_HPP

#include "torusflow/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace torusflow {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    std::filesystem::path work_dir = "torusflow_validate";
    /// Criterion ids to run; empty runs all eleven.
    std::vector<int> only;
    /// Concurrent reference runs; 0 selects worker_threads().
    unsigned threads = 0;
    std::ostream* progress = nullptr;
};

/// Reference configurations used by the suite.
namespace presets {
SimConfig coupled_circle();     // defaults: N=256, eps=0.02, p=3, shear 0.1, T=0.02
SimConfig mcf_circle();         // kappa1=0, u0=0, R0=0.25
SimConfig static_stripe();      // stripe, u0=0
SimConfig translating_stripe(); // stripe advected by a constant velocity
}  // namespace presets

/// Run the acceptance criteria. Tolerances are fixed in the implementation.
std::vector<CriterionResult> run_acceptance(const ValidationOptions& opts);

/// One line per criterion: "criterion <id> <name> PASS|FAIL <seconds>s <detail>".
std::string format_result(const CriterionResult& r);

/// JSON array of results.
std::string results_json(const std::vector<CriterionResult>& results);

}  // namespace torusflow

#endif  // TORUSFLOW_VALIDATION_HPP
