// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/query_flatten.hpp"
#include "gapforge/reduction.hpp"

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace gapforge;
using gapforge::testing::planted_ground;

namespace {

constexpr double kA = 1.0 / 3;
constexpr double kB = 2.0 / 3;

std::shared_ptr<const Hamiltonian> share(Hamiltonian h) { return std::make_shared<const Hamiltonian>(std::move(h)); }

OracleQuery ground_query(double e0, double a, double b) {
    return make_query(QueryKind::GroundEnergy, share(planted_ground(e0)), a, b);
}

// Asks q1, then q2 or q3 depending on the answer; outputs Yes iff both answers were Yes.
AdaptiveMachine two_query_machine(OracleQuery q1, OracleQuery q2, OracleQuery q3) {
    return {[=](std::span<const Answer> ans) -> MachineStep {
                if (ans.empty()) return NextQuery{q1};
                if (ans.size() == 1) return NextQuery{ans[0] == Answer::Yes ? q2 : q3};
                return Halt{ans[0] == Answer::Yes && ans[1] == Answer::Yes ? Answer::Yes : Answer::No};
            },
            2, "two-query"};
}

// Every policy that matters for a program: all assignments to its invalid queries.
void expect_flatten_agrees(const AdaptiveMachine& m) {
    const auto program = flatten(m);
    for (const auto& policy : enumerate_adversaries(program.queries)) {
        EXPECT_EQ(run_nonadaptive(program, policy), run_adaptive(m, policy)) << m.name << " " << policy.describe();
    }
    for (const auto& policy : {AnswerPolicy::all_yes(), AnswerPolicy::all_no(), AnswerPolicy::seeded(9)}) {
        EXPECT_EQ(run_nonadaptive(program, policy), run_adaptive(m, policy)) << m.name;
    }
}

}  // namespace

TEST(enumerate_paths, immediate_halt) {
    const auto tree = enumerate_paths(constant_machine(Answer::Yes));
    EXPECT_EQ(tree.nodes.size(), 1u);
    EXPECT_EQ(tree.leaf_count(), 1u);
    const auto program = flatten(constant_machine(Answer::Yes));
    EXPECT_TRUE(program.queries.empty());
    EXPECT_EQ(run_nonadaptive(program, AnswerPolicy::all_no()), Answer::Yes);
}

TEST(enumerate_paths, two_query_tree) {
    const auto m = two_query_machine(ground_query(0.5, 0.4, 0.6), ground_query(0.1, kA, kB), ground_query(0.9, kA, kB));
    const auto tree = enumerate_paths(m);
    EXPECT_EQ(tree.internal_count(), 3u);
    EXPECT_EQ(tree.leaf_count(), 4u);
    EXPECT_EQ(tree.depth(), 2);
    const auto program = flatten(m);
    EXPECT_EQ(program.queries.size(), 3u);
    EXPECT_EQ(program.table.size(), 4u);
    expect_flatten_agrees(m);
}

TEST(flatten, binary_search_four_rounds) {
    const auto h = share(planted_ground(0.5));
    const SearchConfig cfg{0, 2, 0.02, 0.0025};
    const auto m = binary_search_machine(h, 1, cfg, 4, kB);
    const auto tree = enumerate_paths(m);
    EXPECT_EQ(tree.internal_count(), 15u);
    EXPECT_EQ(tree.leaf_count(), 16u);
    const auto program = flatten(m);
    EXPECT_LE(program.queries.size(), 15u);
    EXPECT_EQ(program.tree_queries, 15u);
    expect_flatten_agrees(m);
}

TEST(flatten, repeated_query_deduplicates) {
    const auto q = ground_query(0.5, 0.4, 0.6);
    const AdaptiveMachine m{[q](std::span<const Answer> ans) -> MachineStep {
                                if (ans.size() < 2) return NextQuery{q};
                                return Halt{ans[0] == ans[1] ? Answer::Yes : Answer::No};
                            },
                            2, "repeat"};
    EXPECT_EQ(enumerate_paths(m).internal_count(), 3u);
    const auto program = flatten(m);
    EXPECT_EQ(program.queries.size(), 1u);
    EXPECT_EQ(program.table.size(), 2u);  // inconsistent paths dropped
    for (const auto& row : program.table) EXPECT_EQ(row.output, Answer::Yes);
    expect_flatten_agrees(m);
}

TEST(flatten, random_machines_over_reduced_instances) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const KlhInstance inst{random_instance(3, 2, 3, 70 + seed), kA, kB, 2};
        const auto out = reduce_klh_to_gap(inst, ReductionVariant::HammingPenalty);
        const auto h = share(out.instance.hamiltonian);
        for (int rounds = 1; rounds <= 4; ++rounds) {
            const auto cfg = SearchConfig::for_hamiltonian(*h, 0.02);
            expect_flatten_agrees(binary_search_machine(h, 2, cfg, rounds, kB));
        }
    }
}

TEST(flatten, evaluate_rejects_wrong_length) {
    const auto program = flatten(echo_machine(ground_query(0.5, 0.4, 0.6)));
    const std::vector<Answer> none;
    EXPECT_THROW(program.evaluate(none), Error);
}

TEST(as_machine, idempotent_on_queries) {
    const auto h = share(planted_ground(0.3));
    const auto m = binary_search_machine(h, 1, SearchConfig{0, 2, 0.02, 0.0025}, 3, kB);
    const auto p1 = flatten(m);
    const auto p2 = flatten(as_machine(p1));
    std::set<std::uint64_t> f1, f2;
    for (const auto& q : p1.queries) f1.insert(q.fingerprint);
    for (const auto& q : p2.queries) f2.insert(q.fingerprint);
    EXPECT_EQ(f1, f2);
    for (const auto& policy : enumerate_adversaries(p1.queries)) {
        EXPECT_EQ(run_nonadaptive(p1, policy), run_nonadaptive(p2, policy));
    }
}

TEST(robustness, echo_of_invalid_query_is_not_robust) {
    const auto m = echo_machine(ground_query(0.5, kA, kB));
    const auto report = check_robustness(m);
    EXPECT_FALSE(report.invariant_holds);
    ASSERT_TRUE(report.witness.has_value());
    EXPECT_EQ(report.invalid_queries, 1u);
    const auto& [p, q] = *report.witness;
    EXPECT_NE(run_adaptive(m, p), run_adaptive(m, q));
}

TEST(robustness, echo_of_valid_query_is_robust) {
    const auto report = check_robustness(echo_machine(ground_query(0.1, kA, kB)));
    EXPECT_TRUE(report.invariant_holds);
    EXPECT_EQ(report.invalid_queries, 0u);
    EXPECT_EQ(report.behaviours, 1u);
}

TEST(robustness, gap_decision_machine_on_promise_instances) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 10 && checked < 4; ++seed) {
        const KlhInstance inst{random_instance(3, 2, 3, 90 + seed), kA, kB, 2};
        if (decide_klh_truth(inst) == PromiseVerdict::Invalid) continue;
        const auto out = reduce_klh_to_gap(inst, ReductionVariant::GlobalProjector);
        const auto cfg = SearchConfig::for_hamiltonian(out.instance.hamiltonian, 0.05);
        const auto m = gap_decision_machine(out.instance, cfg);
        const auto report = check_robustness(m);
        EXPECT_TRUE(report.invariant_holds) << "seed " << seed;
        const auto expected = decide_gap_truth(out.instance) == PromiseVerdict::Yes ? Answer::Yes : Answer::No;
        EXPECT_EQ(run_adaptive(m, AnswerPolicy::seeded(seed)), expected);
        ++checked;
    }
    EXPECT_EQ(checked, 4);
}

TEST(enumerate_paths, guards) {
    const auto q = ground_query(0.1, kA, kB);
    const AdaptiveMachine endless{[q](std::span<const Answer>) -> MachineStep { return NextQuery{q}; }, 3, "endless"};
    try {
        enumerate_paths(endless);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PathTooDeep);
    }
    EXPECT_THROW(run_adaptive(endless, AnswerPolicy::all_yes()), Error);
    AdaptiveMachine huge = endless;
    huge.q_max = kMaxQueryDepth + 1;
    try {
        enumerate_paths(huge);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHalting);
    }
}
