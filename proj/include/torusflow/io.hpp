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

#ifndef TORUSFLOW_IO_HPP
#define TORUSFLOW_IO_HPP

#include "torusflow/diagnostics.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace torusflow {

/// CSV header, in column order.
const std::vector<std::string>& timeseries_columns();

std::string format_timeseries(const std::vector<EnergyRecord>& records);
void write_timeseries(const std::filesystem::path& path, const std::vector<EnergyRecord>& records);

constexpr std::uint64_t kSnapshotVersion = 1;
constexpr std::size_t kSnapshotHeaderBytes = 64;

/// Grid fields of a state: phi and u_1..u_d.
struct Snapshot {
    GridSpec grid;
    double t = 0.0;
    double eps = 0.0;
    ScalarField phi;
    VectorField u;
};

Snapshot make_snapshot(const SimState& state, double eps);

/// 64-byte little-endian header ("TORUSFLW", version, d, N, t, eps, zero
/// padding) followed by phi, u_1, ..., u_d as little-endian doubles.
std::string encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of a file.
std::string sha256_file(const std::filesystem::path& path);

/// Write through a temporary file and rename into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace torusflow

#endif  // TORUSFLOW_IO_HPP
