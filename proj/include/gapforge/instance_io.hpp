// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file instance_io.hpp
 * @brief JSON instance files shared by kLH and Spectral Gap instances.
 *
 *   {"n": 2, "c": 1, "a": 0.333.., "b": 0.666..,
 *    "terms": [{"qubits": [0], "re": [[0,0],[0,1]], "im": [[0,0],[0,0]]}],
 *    "meta": {"variant": "global", "ancilla_index": 2}}
 *
 * Matrices are row-major; "im" may be omitted for real matrices; "c" defaults
 * to 1; "meta" is written only for reduced instances.
 */

#pragma once

#include "gapforge/reduction.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace gapforge {

struct InstanceMeta {
    ReductionVariant variant = ReductionVariant::GlobalProjector;
    int ancilla_index = 0;
};

struct InstanceFile {
    Hamiltonian hamiltonian = assemble<double>(0, {});
    double a = 1.0 / 3.0;
    double b = 2.0 / 3.0;
    double c = 1;
    std::optional<InstanceMeta> meta;

    KlhInstance as_klh() const { return {hamiltonian, a, b, c}; }
    SpectralGapInstance as_gap() const { return {hamiltonian, a, b, c}; }

    static InstanceFile from(const KlhInstance& inst) { return {inst.hamiltonian, inst.a, inst.b, inst.c, {}}; }
    static InstanceFile from(const SpectralGapInstance& inst) {
        return {inst.hamiltonian, inst.a, inst.b, inst.c, {}};
    }
    static InstanceFile from(const ReductionOutput& out) {
        const auto& g = out.instance;
        return {g.hamiltonian, g.a, g.b, g.c, InstanceMeta{out.variant, out.ancilla_index}};
    }
};

/// Throws ParseError with field() naming the offending JSON path.
InstanceFile parse_instance(std::string_view json_text);
std::string dump_instance(const InstanceFile& inst);

/// IoError on filesystem failures, ParseError on malformed content.
InstanceFile read_instance(const std::filesystem::path& path);
void write_instance(const InstanceFile& inst, const std::filesystem::path& path);

inline KlhInstance read_klh_instance(const std::filesystem::path& path) { return read_instance(path).as_klh(); }
inline SpectralGapInstance read_gap_instance(const std::filesystem::path& path) {
    return read_instance(path).as_gap();
}

}  // namespace gapforge
