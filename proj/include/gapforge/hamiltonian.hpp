// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief k-local Hamiltonians on n qubits: terms, assembly, dense embedding,
 *        kLH validation and seeded instance generation.
 *
 * Bit ordering: qubit i is bit i of a computational-basis index, qubit 0 is
 * the least significant bit. The same convention holds inside a term: local
 * bit j of a term's matrix index addresses qubit support()[j].
 */

#pragma once

#include "gapforge/config.hpp"
#include "gapforge/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gapforge {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace detail {

/// Scatter the low bits of `bits` onto the qubit positions listed in `positions`.
inline std::uint64_t deposit_bits(std::uint64_t bits, const std::vector<int>& positions) {
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if ((bits >> j) & 1U) out |= std::uint64_t{1} << positions[j];
    }
    return out;
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

// -----------------------------------------------------------------------------
// LocalTerm
// -----------------------------------------------------------------------------

/// A Hermitian operator acting on the qubits in support(). An empty support
/// with a 1x1 matrix is a multiple of the identity.
template <typename Real>
class BasicLocalTerm {
public:
    using RealScalar = Real;
    using Scalar = std::complex<Real>;
    using MatrixType = ComplexMatrix<Real>;

    /// Validates and canonicalizes. Unsorted support is sorted and the matrix
    /// permuted to match, so the stored support is strictly increasing.
    static BasicLocalTerm make(std::vector<int> support, MatrixType matrix) {
        for (int q : support) {
            if (q < 0) throw Error(ErrorCode::IndexOutOfRange, "negative qubit index " + std::to_string(q));
        }
        {
            auto sorted = support;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw Error(ErrorCode::DuplicateIndex, "support lists a qubit twice");
            }
        }
        if (support.size() > 30) {
            throw Error(ErrorCode::TooLarge, "term support of " + std::to_string(support.size()) + " qubits");
        }
        const Eigen::Index dim = Eigen::Index{1} << support.size();
        if (matrix.rows() != dim || matrix.cols() != dim) {
            std::ostringstream os;
            os << "term on " << support.size() << " qubits needs a " << dim << "x" << dim << " matrix, got "
               << matrix.rows() << "x" << matrix.cols();
            throw Error(ErrorCode::DimensionMismatch, os.str());
        }
        const Real defect = detail::hermiticity_defect(matrix);
        if (!(defect <= Real(kStructuralTol))) {
            std::ostringstream os;
            os << "max |M - M^dagger| = " << static_cast<double>(defect);
            throw Error(ErrorCode::NonHermitian, os.str());
        }

        if (!std::is_sorted(support.begin(), support.end())) {
            std::vector<int> order(support.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int l, int r) { return support[l] < support[r]; });
            // Old local bit order[j] moves to sorted position j.
            std::vector<int> new_position(support.size());
            for (std::size_t j = 0; j < order.size(); ++j) new_position[order[j]] = static_cast<int>(j);
            MatrixType permuted(dim, dim);
            for (Eigen::Index row = 0; row < dim; ++row) {
                const auto prow = static_cast<Eigen::Index>(detail::deposit_bits(row, new_position));
                for (Eigen::Index col = 0; col < dim; ++col) {
                    const auto pcol = static_cast<Eigen::Index>(detail::deposit_bits(col, new_position));
                    permuted(prow, pcol) = matrix(row, col);
                }
            }
            matrix = std::move(permuted);
            std::sort(support.begin(), support.end());
        }
        return BasicLocalTerm(std::move(support), std::move(matrix));
    }

    const std::vector<int>& support() const noexcept { return support_; }
    const MatrixType& matrix() const noexcept { return matrix_; }
    int locality() const noexcept { return static_cast<int>(support_.size()); }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

    BasicLocalTerm scaled(Real factor) const { return BasicLocalTerm(support_, matrix_ * Scalar(factor)); }

    friend bool operator==(const BasicLocalTerm& l, const BasicLocalTerm& r) {
        return l.support_ == r.support_ && l.matrix_ == r.matrix_;
    }

private:
    BasicLocalTerm(std::vector<int> support, MatrixType matrix)
        : support_(std::move(support)), matrix_(std::move(matrix)) {}

    std::vector<int> support_;
    MatrixType matrix_;
};

/// Expression-friendly factory: accepts any real or complex Eigen expression.
template <typename Derived>
auto make_local_term(std::vector<int> support, const Eigen::MatrixBase<Derived>& matrix) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    ComplexMatrix<Real> m = matrix.template cast<std::complex<Real>>();
    return BasicLocalTerm<Real>::make(std::move(support), std::move(m));
}

// -----------------------------------------------------------------------------
// Hamiltonian
// -----------------------------------------------------------------------------

template <typename Real>
class BasicHamiltonian {
public:
    using RealScalar = Real;
    using Term = BasicLocalTerm<Real>;

    static BasicHamiltonian assemble(int n, std::vector<Term> terms) {
        if (n < 0) throw Error(ErrorCode::InvalidInput, "negative qubit count");
        int k = 0;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            for (int q : terms[t].support()) {
                if (q >= n) {
                    throw Error(ErrorCode::IndexOutOfRange, "term " + std::to_string(t) + " acts on qubit " +
                                                                std::to_string(q) + " but n = " + std::to_string(n));
                }
            }
            k = std::max(k, terms[t].locality());
        }
        return BasicHamiltonian(n, k, std::move(terms));
    }

    int num_qubits() const noexcept { return n_; }
    /// Locality: largest term support.
    int locality() const noexcept { return k_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t num_terms() const noexcept { return terms_.size(); }
    std::uint64_t dim() const noexcept { return std::uint64_t{1} << n_; }

    friend bool operator==(const BasicHamiltonian& l, const BasicHamiltonian& r) {
        return l.n_ == r.n_ && l.terms_ == r.terms_;
    }

private:
    BasicHamiltonian(int n, int k, std::vector<Term> terms) : n_(n), k_(k), terms_(std::move(terms)) {}

    int n_ = 0;
    int k_ = 0;
    std::vector<Term> terms_;
};

template <typename Real>
BasicHamiltonian<Real> assemble(int n, std::vector<BasicLocalTerm<Real>> terms) {
    return BasicHamiltonian<Real>::assemble(n, std::move(terms));
}

/// H + s*I, realized as an extra identity (0-local) term.
template <typename Real>
BasicHamiltonian<Real> shifted(const BasicHamiltonian<Real>& h, Real s) {
    auto terms = h.terms();
    ComplexMatrix<Real> id(1, 1);
    id(0, 0) = s;
    terms.push_back(BasicLocalTerm<Real>::make({}, std::move(id)));
    return assemble(h.num_qubits(), std::move(terms));
}

/// t*H, term by term.
template <typename Real>
BasicHamiltonian<Real> scaled(const BasicHamiltonian<Real>& h, Real t) {
    std::vector<BasicLocalTerm<Real>> terms;
    terms.reserve(h.num_terms());
    for (const auto& term : h.terms()) terms.push_back(term.scaled(t));
    return assemble(h.num_qubits(), std::move(terms));
}

inline void check_dense_size(int n, int n_max) {
    if (n > n_max) {
        throw Error(ErrorCode::TooLarge,
                    std::to_string(n) + " qubits exceeds the dense cap of " + std::to_string(n_max));
    }
}

/// Dense 2^n x 2^n matrix: every term tensored with identity on the qubits it
/// does not touch.
template <typename Real>
ComplexMatrix<Real> to_dense(const BasicHamiltonian<Real>& h, int n_max = default_n_max()) {
    const int n = h.num_qubits();
    check_dense_size(n, n_max);
    const auto dim = static_cast<Eigen::Index>(h.dim());
    ComplexMatrix<Real> dense = ComplexMatrix<Real>::Zero(dim, dim);

    for (const auto& term : h.terms()) {
        const auto& support = term.support();
        std::vector<int> rest;
        for (int q = 0; q < n; ++q) {
            if (!std::binary_search(support.begin(), support.end(), q)) rest.push_back(q);
        }
        const Eigen::Index local_dim = term.dim();
        std::vector<Eigen::Index> local_offset(local_dim);
        for (Eigen::Index i = 0; i < local_dim; ++i) {
            local_offset[i] = static_cast<Eigen::Index>(detail::deposit_bits(i, support));
        }
        const std::uint64_t rest_count = std::uint64_t{1} << rest.size();
        const auto& m = term.matrix();
        for (std::uint64_t r = 0; r < rest_count; ++r) {
            const auto base = static_cast<Eigen::Index>(detail::deposit_bits(r, rest));
            for (Eigen::Index j = 0; j < local_dim; ++j) {
                for (Eigen::Index i = 0; i < local_dim; ++i) {
                    dense(base + local_offset[i], base + local_offset[j]) += m(i, j);
                }
            }
        }
    }
    return dense;
}

// -----------------------------------------------------------------------------
// Problem instances
// -----------------------------------------------------------------------------

/// kLH instance: decide lambda_1(H) <= a versus lambda_1(H) >= b. `c` is the
/// promise-gap exponent: b - a must be at least n^(-c).
template <typename Real>
struct BasicKlhInstance {
    BasicHamiltonian<Real> hamiltonian;
    Real a = Real(1) / 3;
    Real b = Real(2) / 3;
    Real c = 1;
};

/// Spectral Gap instance: decide Delta(H) <= a (YES) versus Delta(H) >= b (NO).
template <typename Real>
struct BasicSpectralGapInstance {
    BasicHamiltonian<Real> hamiltonian;
    Real a = Real(1) / 3;
    Real b = Real(2) / 3;
    Real c = 1;
};

template <typename Real>
Real required_promise_gap(int n, Real c) {
    return std::pow(static_cast<Real>(std::max(n, 1)), -c);
}

template <typename Real>
bool promise_gap_ok(int n, Real a, Real b, Real c) {
    return b > a && c > 0 && (b - a) >= required_promise_gap(n, c);
}

template <typename Real>
bool promise_gap_ok(const BasicSpectralGapInstance<Real>& inst) {
    return promise_gap_ok(inst.hamiltonian.num_qubits(), inst.a, inst.b, inst.c);
}

struct KlhValidation {
    std::vector<std::size_t> negative_terms;    ///< min eigenvalue < -1e-10
    std::vector<std::size_t> oversized_terms;   ///< operator norm > 1 + 1e-10
    bool gap_ok = false;                        ///< b - a >= n^(-c)
    double promise_gap = 0;
    double required_gap = 0;

    bool terms_ok() const noexcept { return negative_terms.empty() && oversized_terms.empty(); }
    bool valid() const noexcept { return terms_ok() && gap_ok; }

    std::string summary() const {
        if (valid()) return "valid";
        std::ostringstream os;
        const char* sep = "";
        if (!negative_terms.empty()) {
            os << sep << "NegativeTerm x" << negative_terms.size();
            sep = "; ";
        }
        if (!oversized_terms.empty()) {
            os << sep << "NormExceeded x" << oversized_terms.size();
            sep = "; ";
        }
        if (!gap_ok) os << sep << "PromiseGap (b-a=" << promise_gap << " < " << required_gap << ")";
        return os.str();
    }
};

/// Spectrum bounds of one term: (min eigenvalue, operator norm).
template <typename Real>
std::pair<Real, Real> term_spectral_bounds(const BasicLocalTerm<Real>& term) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(term.matrix(), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.cwiseAbs().maxCoeff()};
}

template <typename Real>
KlhValidation validate_klh(const BasicKlhInstance<Real>& inst) {
    KlhValidation report;
    const auto& terms = inst.hamiltonian.terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto [lo, norm] = term_spectral_bounds(terms[t]);
        if (lo < Real(-kPsdTol)) report.negative_terms.push_back(t);
        if (norm > Real(1 + kPsdTol)) report.oversized_terms.push_back(t);
    }
    const int n = inst.hamiltonian.num_qubits();
    report.promise_gap = static_cast<double>(inst.b - inst.a);
    report.required_gap = static_cast<double>(required_promise_gap(n, inst.c));
    report.gap_ok = promise_gap_ok(n, inst.a, inst.b, inst.c);
    return report;
}

// -----------------------------------------------------------------------------
// Seeded instance generation
// -----------------------------------------------------------------------------

namespace detail {

/// Portable uniform draws from mt19937_64 (the std distributions are
/// implementation-defined).
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

private:
    std::mt19937_64 engine_;
};

}  // namespace detail

/// Random Hermitian matrix rescaled so its spectrum spans exactly [0, top].
template <typename Real>
ComplexMatrix<Real> random_psd(Eigen::Index dim, Real top, detail::PortableRng& rng) {
    ComplexMatrix<Real> g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            g(i, j) = std::complex<Real>(Real(rng.uniform(-1, 1)), Real(rng.uniform(-1, 1)));
        }
    }
    const ComplexMatrix<Real> herm = (g + g.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(herm);
    RealVector<Real> ev = solver.eigenvalues();
    const Real lo = ev.minCoeff();
    const Real span = ev.maxCoeff() - lo;
    if (span > Real(0)) {
        ev = (ev.array() - lo) * (top / span);
    } else {
        ev.setZero();
    }
    const auto& v = solver.eigenvectors();
    ComplexMatrix<Real> out = v * ev.template cast<std::complex<Real>>().asDiagonal() * v.adjoint();
    // Exact Hermitian symmetry after rounding.
    return (out + out.adjoint()) / Real(2);
}

/// m terms, each on a uniformly random k-subset of the n qubits, each a random
/// PSD matrix whose spectrum spans [0, w] for a per-term weight w drawn from
/// [0.2, 1]. Deterministic in `seed`.
template <typename Real = double>
BasicHamiltonian<Real> random_instance(int n, int k, int m, std::uint64_t seed, int n_max = default_n_max()) {
    if (n < 1 || k < 1 || k > n || m < 0) {
        throw Error(ErrorCode::InvalidInput, "random_instance needs 1 <= k <= n and m >= 0 (n=" + std::to_string(n) +
                                                 ", k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
    }
    check_dense_size(n, n_max);
    detail::PortableRng rng(seed);
    std::vector<BasicLocalTerm<Real>> terms;
    terms.reserve(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        std::vector<int> qubits(static_cast<std::size_t>(n));
        std::iota(qubits.begin(), qubits.end(), 0);
        for (int i = 0; i < k; ++i) {
            const auto pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(qubits[i], qubits[pick]);
        }
        std::vector<int> support(qubits.begin(), qubits.begin() + k);
        std::sort(support.begin(), support.end());
        const Real weight = Real(rng.uniform(0.2, 1.0));
        terms.push_back(BasicLocalTerm<Real>::make(std::move(support), random_psd<Real>(Eigen::Index{1} << k, weight, rng)));
    }
    return assemble(n, std::move(terms));
}

using LocalTerm = BasicLocalTerm<double>;
using Hamiltonian = BasicHamiltonian<double>;
using KlhInstance = BasicKlhInstance<double>;
using SpectralGapInstance = BasicSpectralGapInstance<double>;

}  // namespace gapforge
