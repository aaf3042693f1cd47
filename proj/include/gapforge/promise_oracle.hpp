// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file promise_oracle.hpp
 * @brief Simulated oracle for promise problems.
 *
 * Every query is first decided exactly by diagonalization. Queries whose
 * promise holds are answered truthfully; queries that violate it (truth
 * verdict Invalid) are answered by an AnswerPolicy, which models the oracle's
 * freedom to answer those arbitrarily. A procedure is robust when its final
 * output does not depend on the policy.
 */

#pragma once

#include "gapforge/spectrum.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gapforge {

enum class Answer : std::uint8_t { No = 0, Yes = 1 };

constexpr std::string_view to_string(Answer a) noexcept { return a == Answer::Yes ? "Yes" : "No"; }

constexpr Answer negate(Answer a) noexcept { return a == Answer::Yes ? Answer::No : Answer::Yes; }

enum class QueryKind : std::uint8_t {
    GroundEnergy,   ///< lambda_1 <= a ?
    ExcitedEnergy,  ///< lambda_level <= a ?
    Gap,            ///< lambda_2 - lambda_1 <= a ?
};

std::string_view to_string(QueryKind kind) noexcept;

/// 64-bit FNV-1a digest over a canonical byte encoding of the Hamiltonian.
std::uint64_t hamiltonian_digest(const Hamiltonian& h);

struct OracleQuery {
    QueryKind kind = QueryKind::GroundEnergy;
    int level = 1;
    std::shared_ptr<const Hamiltonian> hamiltonian;
    double a = 0;
    double b = 0;
    std::uint64_t hamiltonian_digest = 0;
    /// Hash of (kind, level, Hamiltonian bytes, a, b). Adversary assignments
    /// are keyed on it, so identical queries always receive identical answers.
    std::uint64_t fingerprint = 0;

    std::string describe() const;
};

/// Throws InvalidInput unless b > a (and level >= 1 for ExcitedEnergy).
OracleQuery make_query(QueryKind kind, std::shared_ptr<const Hamiltonian> h, double a, double b, int level = 1);
OracleQuery make_query(QueryKind kind, std::shared_ptr<const Hamiltonian> h, std::uint64_t digest, double a,
                       double b, int level = 1);

/// The quantity a query compares against its thresholds.
double query_value(const OracleQuery& q, int n_max = default_n_max());
PromiseVerdict truth_verdict(const OracleQuery& q, int n_max = default_n_max());

/// Synchronized spectrum cache keyed by Hamiltonian digest; hits are confirmed
/// structurally, so digest collisions cannot return a wrong spectrum.
class SpectrumCache {
public:
    explicit SpectrumCache(std::size_t capacity = 512) : capacity_(capacity) {}

    std::shared_ptr<const Spectrum> get(const std::shared_ptr<const Hamiltonian>& h, std::uint64_t digest,
                                        int n_max = default_n_max());
    void clear();
    std::size_t size() const;

    static SpectrumCache& shared();

private:
    struct Entry {
        std::shared_ptr<const Hamiltonian> hamiltonian;
        std::shared_ptr<const Spectrum> spectrum;
    };
    mutable std::mutex mutex_;
    std::unordered_multimap<std::uint64_t, Entry> entries_;
    std::size_t capacity_;
};

/// How invalid queries get answered. Valid queries ignore the policy.
class AnswerPolicy {
public:
    enum class Mode { AllYes, AllNo, Seeded, Explicit };

    static AnswerPolicy all_yes() { return AnswerPolicy(Mode::AllYes); }
    static AnswerPolicy all_no() { return AnswerPolicy(Mode::AllNo); }
    /// Pseudo-random but a pure function of (seed, fingerprint).
    static AnswerPolicy seeded(std::uint64_t seed);
    /// Unlisted invalid queries receive `fallback`.
    static AnswerPolicy explicit_assignment(std::map<std::uint64_t, Answer> assignment,
                                            Answer fallback = Answer::Yes);

    Answer on_invalid(const OracleQuery& q) const;

    Mode mode() const noexcept { return mode_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::map<std::uint64_t, Answer>& assignment() const noexcept { return assignment_; }
    Answer fallback() const noexcept { return fallback_; }
    std::string describe() const;

private:
    explicit AnswerPolicy(Mode mode) : mode_(mode) {}

    Mode mode_ = Mode::AllYes;
    std::uint64_t seed_ = 0;
    std::map<std::uint64_t, Answer> assignment_;
    Answer fallback_ = Answer::Yes;
};

/// Parses "all-yes", "all-no" or "seed:N".
std::optional<AnswerPolicy> parse_policy(std::string_view text);

struct OracleLogEntry {
    OracleQuery query;
    double value = 0;  ///< lambda or gap the truth verdict was computed from
    PromiseVerdict truth = PromiseVerdict::Invalid;
    Answer emitted = Answer::No;
};

/// Ordered transcript of oracle calls. Not thread-safe: one log per caller.
class OracleLog {
public:
    void append(OracleLogEntry entry) { entries_.push_back(std::move(entry)); }
    const std::vector<OracleLogEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    void clear() noexcept { entries_.clear(); }

    /// emitted == truth on every entry whose truth is Yes or No.
    bool consistent() const;
    /// One JSON object per line.
    void write_jsonl(std::ostream& os) const;

private:
    std::vector<OracleLogEntry> entries_;
};

Answer answer(const OracleQuery& q, const AnswerPolicy& policy, OracleLog& log, int n_max = default_n_max());

/// One Explicit policy per Yes/No assignment to the distinct invalid queries
/// in `queries` (2^k of them). Throws TooManyInvalid when k > cap.
std::vector<AnswerPolicy> enumerate_adversaries(const std::vector<OracleQuery>& queries, int cap = kAdversaryCap,
                                                int n_max = default_n_max());

/// `count` Seeded policies derived from `seed`, for use past the cap.
std::vector<AnswerPolicy> sample_adversaries(std::size_t count, std::uint64_t seed);

template <typename Result>
struct AdversaryRun {
    AnswerPolicy policy;
    Result result;
    OracleLog log;
};

/**
 * Runs an oracle-querying procedure under every adversary policy that leads
 * to distinct behaviour.
 *
 * `procedure(policy, log)` must be deterministic and route all oracle calls
 * through answer(.., policy, log). Each run is seeded with a partial
 * assignment; every invalid query it meets that the assignment does not cover
 * spawns a sibling run answering No. Any policy whatsoever agrees with exactly
 * one returned run on every invalid query that run encountered, so the runs
 * cover all policies. Throws TooManyInvalid once more than `cap` distinct
 * invalid queries have been met.
 */
template <typename Procedure>
auto explore_adversaries(Procedure&& procedure, int cap = kAdversaryCap)
    -> std::vector<AdversaryRun<decltype(procedure(std::declval<const AnswerPolicy&>(),
                                                   std::declval<OracleLog&>()))>> {
    using Result = decltype(procedure(std::declval<const AnswerPolicy&>(), std::declval<OracleLog&>()));
    std::vector<AdversaryRun<Result>> runs;
    std::vector<std::map<std::uint64_t, Answer>> pending{{}};
    std::set<std::uint64_t> invalid_seen;
    while (!pending.empty()) {
        auto assignment = std::move(pending.back());
        pending.pop_back();
        OracleLog log;
        const auto seed_policy = AnswerPolicy::explicit_assignment(assignment, Answer::Yes);
        Result result = procedure(seed_policy, log);
        for (const auto& entry : log.entries()) {
            if (entry.truth != PromiseVerdict::Invalid) continue;
            const auto fp = entry.query.fingerprint;
            invalid_seen.insert(fp);
            if (static_cast<int>(invalid_seen.size()) > cap) {
                throw Error(ErrorCode::TooManyInvalid, "more than " + std::to_string(cap) +
                                                           " distinct invalid queries; sample policies instead");
            }
            if (assignment.count(fp) != 0) continue;
            auto sibling = assignment;
            sibling[fp] = Answer::No;
            pending.push_back(std::move(sibling));
            assignment[fp] = Answer::Yes;
        }
        runs.push_back({AnswerPolicy::explicit_assignment(std::move(assignment), Answer::Yes), std::move(result),
                        std::move(log)});
    }
    return runs;
}

}  // namespace gapforge
