// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file query_flatten.hpp
 * @brief Adaptive bounded-query machines and their conversion to a single
 *        batch of non-adaptive queries plus a truth table.
 *
 * A machine with at most q_max adaptive queries has at most 2^q_max answer
 * sequences. Walking all of them collects every query the machine could ever
 * ask (at most 2^q_max - 1 of them); asking all of those at once and reading
 * the path the answers select recovers the machine's output.
 */

#pragma once

#include "gapforge/gap_search.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gapforge {

struct NextQuery {
    OracleQuery query;
};

struct Halt {
    Answer output;
};

using MachineStep = std::variant<NextQuery, Halt>;

/// A deterministic P machine with oracle access. `step` sees the answers
/// received so far and either asks its next query or halts.
struct AdaptiveMachine {
    std::function<MachineStep(std::span<const Answer>)> step;
    int q_max = 0;
    std::string name;
};

Answer run_adaptive(const AdaptiveMachine& m, const AnswerPolicy& policy, OracleLog& log);
Answer run_adaptive(const AdaptiveMachine& m, const AnswerPolicy& policy);

struct PathNode {
    std::optional<OracleQuery> query;  ///< empty at leaves
    Answer output = Answer::No;        ///< leaves only
    int depth = 0;
    int yes_child = -1;
    int no_child = -1;

    bool is_leaf() const noexcept { return !query.has_value(); }
};

/// Root is nodes[0].
struct PathTree {
    std::vector<PathNode> nodes;

    std::size_t internal_count() const;
    std::size_t leaf_count() const;
    int depth() const;
};

/// Throws NonHalting if q_max exceeds the depth guard, PathTooDeep if some
/// path asks more than q_max queries.
PathTree enumerate_paths(const AdaptiveMachine& m);

/// One leaf of the tree: the answers its path requires, by query index.
struct TableRow {
    std::vector<std::pair<std::size_t, Answer>> conditions;
    Answer output = Answer::No;
};

struct NonAdaptiveProgram {
    std::vector<OracleQuery> queries;  ///< deduplicated by fingerprint
    std::vector<TableRow> table;
    std::size_t tree_queries = 0;      ///< internal nodes before deduplication
    int q_max = 0;

    /// Output selected by a full answer vector (indexed like `queries`).
    Answer evaluate(std::span<const Answer> answers) const;
};

NonAdaptiveProgram flatten(const AdaptiveMachine& m);
NonAdaptiveProgram flatten(const PathTree& tree, int q_max);

/// Answers every query in one batch, then looks up the output.
Answer run_nonadaptive(const NonAdaptiveProgram& p, const AnswerPolicy& policy, OracleLog* log = nullptr);

/// A machine asking the program's queries in order, then halting with the
/// table output.
AdaptiveMachine as_machine(const NonAdaptiveProgram& p);

struct RobustnessReport {
    bool invariant_holds = true;
    /// Two policies with differing adaptive outputs (present iff !invariant_holds).
    std::optional<std::pair<AnswerPolicy, AnswerPolicy>> witness;
    std::size_t behaviours = 0;        ///< distinct adversary behaviours replayed
    std::size_t invalid_queries = 0;   ///< distinct invalid queries reachable
};

/// Decides whether the machine's output is the same under every assignment of
/// answers to invalid queries. Throws TooManyInvalid past `cap`.
RobustnessReport check_robustness(const AdaptiveMachine& m, int cap = kAdversaryCap);

// -----------------------------------------------------------------------------
// Machines
// -----------------------------------------------------------------------------

AdaptiveMachine constant_machine(Answer output);

/// Asks `q` and outputs its raw answer: not robust when q is invalid.
AdaptiveMachine echo_machine(OracleQuery q);

/// Exactly `rounds` robust-search rounds for lambda_c (stopping early only if
/// the interval is already eps-narrow), then Yes iff the interval's upper end
/// is below `threshold`.
AdaptiveMachine binary_search_machine(std::shared_ptr<const Hamiltonian> h, int c, const SearchConfig& cfg,
                                      int rounds, double threshold);

/// decide_gap_via_oracle as an adaptive machine.
AdaptiveMachine gap_decision_machine(const SpectralGapInstance& inst, const SearchConfig& cfg);

}  // namespace gapforge
