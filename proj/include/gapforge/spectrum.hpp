// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectrum.hpp
 * @brief Exact spectral oracle by dense diagonalization, and the ground-truth
 *        deciders for the kLH and Spectral Gap promise problems.
 *
 * Eigenvalues are counted with multiplicity, so a degenerate ground space has
 * gap zero.
 */

#pragma once

#include "gapforge/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <string_view>

namespace gapforge {

/// Full spectrum, non-decreasing, length 2^n.
template <typename Real>
struct BasicSpectrum {
    RealVector<Real> values;

    Eigen::Index size() const noexcept { return values.size(); }
    /// 1-based, with multiplicity.
    Real lambda(Eigen::Index c) const {
        if (c < 1 || c > values.size()) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "lambda_" + std::to_string(c) + " of a spectrum of size " + std::to_string(values.size()));
        }
        return values(c - 1);
    }
    Real gap() const {
        if (values.size() < 2) throw Error(ErrorCode::Dimension, "spectral gap needs at least two eigenvalues");
        return values(1) - values(0);
    }
};

using Spectrum = BasicSpectrum<double>;

enum class PromiseVerdict { Yes, No, Invalid };

constexpr std::string_view to_string(PromiseVerdict v) noexcept {
    switch (v) {
        case PromiseVerdict::Yes: return "Yes";
        case PromiseVerdict::No: return "No";
        case PromiseVerdict::Invalid: return "Invalid";
    }
    return "?";
}

/// Yes if value <= a, No if value >= b, Invalid strictly between. Exact
/// comparisons, no tolerance band.
template <typename Real>
PromiseVerdict classify(Real value, Real a, Real b) noexcept {
    if (value <= a) return PromiseVerdict::Yes;
    if (value >= b) return PromiseVerdict::No;
    return PromiseVerdict::Invalid;
}

/// Largest ||H v - lambda v|| over all eigenpairs of a dense Hermitian matrix.
template <typename Real>
Real max_residual(const ComplexMatrix<Real>& dense,
                  const Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>>& solver) {
    const auto& vecs = solver.eigenvectors();
    const auto& vals = solver.eigenvalues();
    const ComplexMatrix<Real> r = dense * vecs - vecs * vals.template cast<std::complex<Real>>().asDiagonal();
    return r.colwise().norm().maxCoeff();
}

template <typename Real>
BasicSpectrum<Real> eigenvalues_of_dense(const ComplexMatrix<Real>& dense, bool verify = false) {
    using Solver = Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>>;
    Solver solver(dense, verify ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
    }
    if (verify) {
        const Real scale = std::max(Real(1), dense.cwiseAbs().rowwise().sum().maxCoeff());
        const Real residual = max_residual(dense, solver);
        if (!(residual <= Real(1e-9) * scale)) {
            throw Error(ErrorCode::NonConvergence,
                        "eigenpair residual " + std::to_string(static_cast<double>(residual)) + " too large");
        }
    }
    return BasicSpectrum<Real>{solver.eigenvalues()};
}

/// Full sorted spectrum of to_dense(h). With `verify`, eigenvectors are also
/// computed and every residual checked against 1e-9 * max(1, ||H||).
template <typename Real>
BasicSpectrum<Real> eigenvalues(const BasicHamiltonian<Real>& h, bool verify = false,
                                int n_max = default_n_max()) {
    return eigenvalues_of_dense(to_dense(h, n_max), verify);
}

template <typename Real>
Real spectral_gap(const BasicHamiltonian<Real>& h, int n_max = default_n_max()) {
    if (h.num_qubits() < 1) throw Error(ErrorCode::Dimension, "spectral gap of a 0-qubit Hamiltonian");
    return eigenvalues(h, false, n_max).gap();
}

template <typename Real>
Real lambda_c(const BasicHamiltonian<Real>& h, int c, int n_max = default_n_max()) {
    if (c < 1 || (h.num_qubits() < 63 && static_cast<std::uint64_t>(c) > h.dim())) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "lambda_" + std::to_string(c) + " on " + std::to_string(h.num_qubits()) + " qubits");
    }
    return eigenvalues(h, false, n_max).lambda(c);
}

template <typename Real>
PromiseVerdict decide_gap_truth(const BasicSpectralGapInstance<Real>& inst, int n_max = default_n_max()) {
    return classify(spectral_gap(inst.hamiltonian, n_max), inst.a, inst.b);
}

template <typename Real>
PromiseVerdict decide_klh_truth(const BasicKlhInstance<Real>& inst, int n_max = default_n_max()) {
    return classify(eigenvalues(inst.hamiltonian, false, n_max).lambda(1), inst.a, inst.b);
}

}  // namespace gapforge
