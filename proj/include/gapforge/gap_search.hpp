// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gap_search.hpp
 * @brief Promise-robust binary search for lambda_c and the O(log)-query
 *        Spectral Gap decision built on it.
 *
 * Each round probes the oracle with thresholds (mid - gamma, mid + gamma).
 * Whatever the oracle says, a one-sided bound follows:
 *
 *   Yes  =>  lambda_c < mid + gamma   (truthful Yes, or an invalid query)
 *   No   =>  lambda_c > mid - gamma   (truthful No, or an invalid query)
 *
 * so the interval keeps containing lambda_c under every adversary. Width
 * evolves as w -> w/2 + gamma, which reaches eps as long as gamma < eps/4.
 */

#pragma once

#include "gapforge/promise_oracle.hpp"

#include <memory>

namespace gapforge {

struct SearchConfig {
    double lo = 0;
    double hi = 1;
    double eps = 0.05;
    double gamma = 0.05 / 8;

    /// Throws ConfigInvalid unless hi > lo, eps > 0, 0 < gamma < eps/4.
    void validate() const;

    /// ceil(log2((hi - lo) / (eps - 2 gamma))) + 1.
    int query_budget() const;

    /// [0, max(#terms, 1)] with gamma = eps/8; valid spectral bounds for
    /// Hamiltonians whose terms are PSD with norm <= 1.
    static SearchConfig for_hamiltonian(const Hamiltonian& h, double eps);
};

/// Resumable search state: ask probe(), feed the oracle's answer to advance().
class RobustBisection {
public:
    explicit RobustBisection(const SearchConfig& cfg);

    bool done() const noexcept { return upper_ - lower_ <= cfg_.eps; }
    double midpoint() const noexcept { return lower_ + (upper_ - lower_) / 2; }
    double probe_low() const noexcept { return midpoint() - cfg_.gamma; }
    double probe_high() const noexcept { return midpoint() + cfg_.gamma; }
    void advance(Answer a);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    int rounds() const noexcept { return rounds_; }

private:
    SearchConfig cfg_;
    double lower_;
    double upper_;
    int rounds_ = 0;
};

/// GroundEnergy for c == 1, ExcitedEnergy(c) otherwise.
OracleQuery lambda_probe(const std::shared_ptr<const Hamiltonian>& h, std::uint64_t digest, int c,
                         const RobustBisection& state);

struct SearchResult {
    double lower = 0;
    double upper = 0;
    int queries_used = 0;
    OracleLog transcript;
};

/// Caller guarantees lambda_c(h) lies in [cfg.lo, cfg.hi]. Oracle calls are
/// appended to `log` when given, and always to the result transcript.
SearchResult robust_search_lambda(const std::shared_ptr<const Hamiltonian>& h, int c, const SearchConfig& cfg,
                                  const AnswerPolicy& policy, OracleLog* log = nullptr);
SearchResult robust_search_lambda(const Hamiltonian& h, int c, const SearchConfig& cfg, const AnswerPolicy& policy);

/// Yes iff the conservative gap bound lambda_2.upper - lambda_1.lower is below b.
constexpr Answer gap_decision(double ground_lower, double excited_upper, double b) noexcept {
    return (excited_upper - ground_lower) < b ? Answer::Yes : Answer::No;
}

struct GapDecision {
    Answer answer = Answer::No;
    SearchResult ground;   ///< lambda_1
    SearchResult excited;  ///< lambda_2
    int total_queries() const noexcept { return ground.queries_used + excited.queries_used; }
    double gap_upper() const noexcept { return excited.upper - ground.lower; }
};

/// Throws ConfigTooCoarse if eps > (b - a)/4.
void check_gap_config(const SpectralGapInstance& inst, const SearchConfig& cfg);

GapDecision decide_gap_via_oracle_detailed(const SpectralGapInstance& inst, const SearchConfig& cfg,
                                           const AnswerPolicy& policy, OracleLog* log = nullptr);
Answer decide_gap_via_oracle(const SpectralGapInstance& inst, const SearchConfig& cfg, const AnswerPolicy& policy);

}  // namespace gapforge
