// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace gapforge {

inline constexpr int kDefaultNMax = 12;

/// Adversary assignments beyond this many invalid queries are sampled, not enumerated.
inline constexpr int kAdversaryCap = 14;
inline constexpr int kAdversarySamples = 1000;

/// Depth guard for path enumeration of adaptive machines.
inline constexpr int kMaxQueryDepth = 20;

/// Tolerances. Structural checks (Hermiticity, embedding) use the tight one,
/// spectral comparisons the loose one.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kSpectralTol = 1e-8;
inline constexpr double kPsdTol = 1e-10;

/// Dense-matrix qubit cap. GAPFORGE_NMAX overrides the default of 12.
inline int default_n_max() {
    static const int value = [] {
        if (const char* env = std::getenv("GAPFORGE_NMAX")) {
            try {
                const int parsed = std::stoi(env);
                if (parsed > 0 && parsed <= 30) return parsed;
            } catch (...) {
            }
        }
        return kDefaultNMax;
    }();
    return value;
}

}  // namespace gapforge
