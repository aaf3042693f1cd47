// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reduction.hpp
 * @brief Many-one reduction from kLH to Spectral Gap.
 *
 * Given a PSD Hamiltonian H on register Y (n qubits), a single ancilla qubit X
 * is appended as qubit n (the most significant bit) and
 *
 *     H' = |0><0|_X (x) P_Y  +  |1><1|_X (x) H_Y
 *
 * where P_Y penalizes every Y state except |0...0>. H' is block diagonal in X:
 * the 1-block reproduces spec(H) and the 0-block has the unique null state
 * |0>_X|0...0>_Y with all its other energies >= 1. Hence lambda_1(H') = 0 and
 * Delta(H') = min(lambda_1(H), 1), so thresholds a, b <= 1 carry over unchanged.
 *
 * Two realizations of P_Y:
 *   - GlobalProjector: P_Y = I - |0...0><0...0|, stored as one (n+1)-local term.
 *   - HammingPenalty:  P_Y = sum_i |1><1|_{Y_i}, the Hamming weight; every term
 *     is at most (k+1)-local.
 */

#pragma once

#include "gapforge/spectrum.hpp"

#include <iostream>
#include <optional>
#include <string_view>

namespace gapforge {

enum class ReductionVariant { GlobalProjector, HammingPenalty };

constexpr std::string_view to_string(ReductionVariant v) noexcept {
    return v == ReductionVariant::GlobalProjector ? "global" : "hamming";
}

inline std::optional<ReductionVariant> parse_variant(std::string_view s) {
    if (s == "global" || s == "GlobalProjector") return ReductionVariant::GlobalProjector;
    if (s == "hamming" || s == "HammingPenalty") return ReductionVariant::HammingPenalty;
    return std::nullopt;
}

template <typename Real>
struct BasicReductionOutput {
    BasicSpectralGapInstance<Real> instance;
    ReductionVariant variant = ReductionVariant::GlobalProjector;
    int ancilla_index = 0;
    std::uint64_t null_state_index = 0;
};

namespace detail {

/// |1><1|_X (x) M where X is a new most-significant qubit of the term.
template <typename Real>
BasicLocalTerm<Real> controlled_on_ancilla(const BasicLocalTerm<Real>& term, int ancilla) {
    const Eigen::Index d = term.dim();
    ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(2 * d, 2 * d);
    m.bottomRightCorner(d, d) = term.matrix();
    auto support = term.support();
    support.push_back(ancilla);
    return BasicLocalTerm<Real>::make(std::move(support), std::move(m));
}

}  // namespace detail

/// Throws InvalidInput if the instance has a non-PSD or oversized term, or
/// fewer than one qubit.
template <typename Real>
BasicReductionOutput<Real> reduce_klh_to_gap(const BasicKlhInstance<Real>& inst, ReductionVariant variant) {
    const auto& h = inst.hamiltonian;
    const int n = h.num_qubits();
    if (n < 1) throw Error(ErrorCode::InvalidInput, "reduction needs at least one qubit");
    const auto report = validate_klh(inst);
    if (!report.terms_ok()) {
        throw Error(ErrorCode::InvalidInput, "kLH validation failed: " + report.summary());
    }
    const int ancilla = n;

    std::vector<BasicLocalTerm<Real>> terms;
    if (variant == ReductionVariant::GlobalProjector) {
        std::vector<int> all(static_cast<std::size_t>(n) + 1);
        std::iota(all.begin(), all.end(), 0);
        const Eigen::Index y_dim = Eigen::Index{1} << n;
        ComplexMatrix<Real> projector = ComplexMatrix<Real>::Zero(2 * y_dim, 2 * y_dim);
        // X = 0 block is the lower half of the indices; every Y state but |0...0> costs 1.
        for (Eigen::Index y = 1; y < y_dim; ++y) projector(y, y) = Real(1);
        terms.push_back(BasicLocalTerm<Real>::make(std::move(all), std::move(projector)));
    } else {
        for (int q = 0; q < n; ++q) {
            ComplexMatrix<Real> penalty = ComplexMatrix<Real>::Zero(4, 4);
            penalty(1, 1) = Real(1);  // Y_q = 1, X = 0
            terms.push_back(BasicLocalTerm<Real>::make({q, ancilla}, std::move(penalty)));
        }
    }
    for (const auto& term : h.terms()) terms.push_back(detail::controlled_on_ancilla(term, ancilla));

    BasicReductionOutput<Real> out{
        BasicSpectralGapInstance<Real>{assemble(n + 1, std::move(terms)), inst.a, inst.b, inst.c},
        variant,
        ancilla,
        0,
    };
    return out;
}

/// min(lambda_1(H), 1): the analytic value of Delta(H'). Instances outside the
/// kLH term convention are accepted with a warning on `warn`.
template <typename Real>
Real predicted_gap(const BasicKlhInstance<Real>& inst, std::ostream* warn = &std::clog,
                   int n_max = default_n_max()) {
    check_dense_size(inst.hamiltonian.num_qubits(), n_max);
    if (warn != nullptr) {
        const auto report = validate_klh(inst);
        if (!report.terms_ok()) *warn << "warning: predicted_gap on a non-kLH instance (" << report.summary() << ")\n";
    }
    return std::min(eigenvalues(inst.hamiltonian, false, n_max).lambda(1), Real(1));
}

template <typename Real>
struct BasicBlockSpectrum {
    RealVector<Real> zero_block;  ///< ancilla in |0>
    RealVector<Real> one_block;   ///< ancilla in |1>; equals spec(H)
};

/// Diagonalizes the two ancilla blocks of H' separately.
template <typename Real>
BasicBlockSpectrum<Real> block_spectrum(const BasicReductionOutput<Real>& out, const BasicHamiltonian<Real>& input_h,
                                        int n_max = default_n_max()) {
    const auto& hp = out.instance.hamiltonian;
    if (hp.num_qubits() != input_h.num_qubits() + 1 || out.ancilla_index != input_h.num_qubits()) {
        throw Error(ErrorCode::DimensionMismatch, "reduced Hamiltonian has " + std::to_string(hp.num_qubits()) +
                                                      " qubits, input has " + std::to_string(input_h.num_qubits()));
    }
    const ComplexMatrix<Real> dense = to_dense(hp, n_max);
    const Eigen::Index half = dense.rows() / 2;
    const ComplexMatrix<Real> zero = dense.topLeftCorner(half, half);
    const ComplexMatrix<Real> one = dense.bottomRightCorner(half, half);
    return {eigenvalues_of_dense(zero).values, eigenvalues_of_dense(one).values};
}

using ReductionOutput = BasicReductionOutput<double>;
using BlockSpectrum = BasicBlockSpectrum<double>;

}  // namespace gapforge
