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

#include "torusflow/io.hpp"

#include "torusflow/errors.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace torusflow {

namespace {

constexpr char kMagic[8] = {'T', 'O', 'R', 'U', 'S', 'F', 'L', 'W'};

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const std::string& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

double get_f64(const std::string& in, std::size_t at) { return std::bit_cast<double>(get_u64(in, at)); }

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
    static const std::vector<std::string> cols = {
        "t",         "kinetic", "surface",          "total",       "dissipation_visc", "dissipation_ac", "density_ratio",
        "discrepancy_max", "phi_min", "phi_max", "interface_length", "brakke_lhs", "brakke_rhs"};
    return cols;
}

std::string format_timeseries(const std::vector<EnergyRecord>& records) {
    std::string out;
    const auto& cols = timeseries_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& r : records) {
        const double row[] = {r.t,
                              r.kinetic,
                              r.surface,
                              r.total,
                              r.dissipation_visc,
                              r.dissipation_ac,
                              r.density_ratio,
                              r.discrepancy_max,
                              r.phi_min,
                              r.phi_max,
                              r.interface_length,
                              r.brakke_lhs,
                              r.brakke_rhs};
        for (std::size_t i = 0; i < std::size(row); ++i) out += (i ? "," : "") + num(row[i]);
        out += "\n";
    }
    return out;
}

void write_timeseries(const std::filesystem::path& path, const std::vector<EnergyRecord>& records) {
    write_file_atomic(path, format_timeseries(records));
}

Snapshot make_snapshot(const SimState& state, double eps) {
    return {state.phi.grid, state.t, eps, state.phi, inverse(state.u_hat)};
}

std::string encode_snapshot(const Snapshot& snap) {
    const GridSpec& g = snap.grid;
    std::string out;
    out.reserve(kSnapshotHeaderBytes + 8 * g.points() * static_cast<std::size_t>(g.d + 1));
    out.append(kMagic, sizeof kMagic);
    put_u64(out, kSnapshotVersion);
    put_u64(out, static_cast<std::uint64_t>(g.d));
    put_u64(out, static_cast<std::uint64_t>(g.n));
    put_f64(out, snap.t);
    put_f64(out, snap.eps);
    out.resize(kSnapshotHeaderBytes, '\0');
    auto put_field = [&](const RealArray& f) {
        if (static_cast<std::size_t>(f.size()) != g.points()) throw UsageError("encode_snapshot: field size mismatch");
        for (Eigen::Index i = 0; i < f.size(); ++i) put_f64(out, f(i));
    };
    put_field(snap.phi.values);
    for (int a = 0; a < g.d; ++a) put_field(snap.u[a]);
    return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
    if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a torusflow snapshot (bad magic)");
    const std::uint64_t version = get_u64(bytes, 8);
    if (version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
    Snapshot snap;
    snap.grid.d = static_cast<int>(get_u64(bytes, 16));
    snap.grid.n = static_cast<int>(get_u64(bytes, 24));
    snap.t = get_f64(bytes, 32);
    snap.eps = get_f64(bytes, 40);
    try {
        snap.grid.validate();
    } catch (const ConfigError& e) {
        throw std::runtime_error(std::string("snapshot header: ") + e.what());
    }
    const std::size_t pts = snap.grid.points();
    const std::size_t want = kSnapshotHeaderBytes + 8 * pts * static_cast<std::size_t>(snap.grid.d + 1);
    if (bytes.size() != want)
        throw std::runtime_error("snapshot size " + std::to_string(bytes.size()) + " != expected " + std::to_string(want));
    std::size_t at = kSnapshotHeaderBytes;
    auto get_field = [&]() {
        RealArray f(static_cast<Eigen::Index>(pts));
        for (std::size_t i = 0; i < pts; ++i, at += 8) f(static_cast<Eigen::Index>(i)) = get_f64(bytes, at);
        return f;
    };
    snap.phi = ScalarField(snap.grid, get_field());
    snap.u = VectorField(snap.grid);
    for (int a = 0; a < snap.grid.d; ++a) snap.u[a] = get_field();
    return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    write_file_atomic(path, encode_snapshot(snap));
}

Snapshot read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

std::string sha256_file(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed for " + path.string());
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace torusflow
