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

#ifndef TORUSFLOW_APP_HPP
#define TORUSFLOW_APP_HPP

#include "torusflow/config.hpp"
#include "torusflow/stepper.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace torusflow {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitBlowUp = 3, kExitAcceptance = 4 };

/// Worker cap: TORUSFLOW_THREADS if set and positive, else the hardware count.
unsigned worker_threads();

struct RunOutcome {
    int exit_code = kExitOk;
    History history;
    std::vector<std::string> files;  // relative to the output directory
};

/// Run cfg and write run.csv, snap_NNNNNN.bin and manifest.json into
/// cfg.output_dir. The manifest is written last.
RunOutcome run_simulation(const SimConfig& cfg, std::ostream* log = nullptr);

struct SweepRow {
    double eps = 0.0;
    double surface = 0.0;        // mu_0(Omega)
    double perimeter = 0.0;
    double surface_error = 0.0;  // |mu_0 - perimeter| / perimeter
    double radius = 0.0;         // circle: interface length / 2 pi at T
    double radius_oracle = 0.0;  // sqrt(R0^2 - 2 kappa2 T) when kappa1 = 0
    double radius_error = 0.0;   // relative; NaN if not applicable
    int exit_code = kExitOk;
};

/// Run cfg once per eps in output_dir/eps_<i>; at most `threads` runs at once.
/// Every eps is checked against 2h before any run starts.
std::vector<SweepRow> sweep_epsilon(const SimConfig& cfg, const std::vector<double>& eps_list, unsigned threads);

std::string format_sweep(const std::vector<SweepRow>& rows);

}  // namespace torusflow

#endif  // TORUSFLOW_APP_HPP
