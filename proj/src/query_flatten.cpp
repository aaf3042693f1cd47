// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/query_flatten.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace gapforge {

Answer run_adaptive(const AdaptiveMachine& m, const AnswerPolicy& policy, OracleLog& log) {
    std::vector<Answer> answers;
    for (;;) {
        const auto step = m.step(answers);
        if (const auto* halt = std::get_if<Halt>(&step)) return halt->output;
        if (static_cast<int>(answers.size()) >= m.q_max) {
            throw Error(ErrorCode::PathTooDeep, m.name + " asks more than " + std::to_string(m.q_max) + " queries");
        }
        answers.push_back(answer(std::get<NextQuery>(step).query, policy, log));
    }
}

Answer run_adaptive(const AdaptiveMachine& m, const AnswerPolicy& policy) {
    OracleLog log;
    return run_adaptive(m, policy, log);
}

std::size_t PathTree::internal_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& n) { return !n.is_leaf(); }));
}

std::size_t PathTree::leaf_count() const { return nodes.size() - internal_count(); }

int PathTree::depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
}

PathTree enumerate_paths(const AdaptiveMachine& m) {
    if (m.q_max < 0 || m.q_max > kMaxQueryDepth) {
        throw Error(ErrorCode::NonHalting, "q_max = " + std::to_string(m.q_max) + " is outside the guard [0, " +
                                               std::to_string(kMaxQueryDepth) + "]");
    }
    PathTree tree;
    // Depth-first; each stack entry is (node index, answer prefix).
    std::vector<std::pair<int, std::vector<Answer>>> stack;
    tree.nodes.push_back({});
    stack.push_back({0, {}});
    while (!stack.empty()) {
        auto [index, prefix] = std::move(stack.back());
        stack.pop_back();
        auto step = m.step(prefix);
        const int depth = static_cast<int>(prefix.size());
        tree.nodes[index].depth = depth;
        if (auto* halt = std::get_if<Halt>(&step)) {
            tree.nodes[index].output = halt->output;
            continue;
        }
        if (depth >= m.q_max) {
            throw Error(ErrorCode::PathTooDeep, m.name + " asks a query beyond depth " + std::to_string(m.q_max));
        }
        tree.nodes[index].query = std::move(std::get<NextQuery>(step).query);
        const int yes = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.push_back({});
        tree.nodes[index].yes_child = yes;
        tree.nodes[index].no_child = yes + 1;
        auto yes_prefix = prefix;
        yes_prefix.push_back(Answer::Yes);
        prefix.push_back(Answer::No);
        stack.push_back({yes + 1, std::move(prefix)});
        stack.push_back({yes, std::move(yes_prefix)});
    }
    return tree;
}

NonAdaptiveProgram flatten(const PathTree& tree, int q_max) {
    NonAdaptiveProgram p;
    p.q_max = q_max;
    p.tree_queries = tree.internal_count();

    std::unordered_map<std::uint64_t, std::size_t> index_of;
    std::vector<std::size_t> node_query(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& node = tree.nodes[i];
        if (node.is_leaf()) continue;
        const auto [it, inserted] = index_of.try_emplace(node.query->fingerprint, p.queries.size());
        if (inserted) p.queries.push_back(*node.query);
        node_query[i] = it->second;
    }

    // Walk root-to-leaf; a path that needs one query answered both ways is
    // unreachable by any oracle and contributes no row.
    struct Frame {
        int node;
        std::map<std::size_t, Answer> fixed;
    };
    std::vector<Frame> stack{{0, {}}};
    while (!stack.empty()) {
        auto frame = std::move(stack.back());
        stack.pop_back();
        const auto& node = tree.nodes[frame.node];
        if (node.is_leaf()) {
            p.table.push_back({{frame.fixed.begin(), frame.fixed.end()}, node.output});
            continue;
        }
        const std::size_t qi = node_query[frame.node];
        for (const Answer a : {Answer::No, Answer::Yes}) {
            const auto it = frame.fixed.find(qi);
            if (it != frame.fixed.end() && it->second != a) continue;
            auto fixed = frame.fixed;
            fixed[qi] = a;
            stack.push_back({a == Answer::Yes ? node.yes_child : node.no_child, std::move(fixed)});
        }
    }
    return p;
}

NonAdaptiveProgram flatten(const AdaptiveMachine& m) { return flatten(enumerate_paths(m), m.q_max); }

Answer NonAdaptiveProgram::evaluate(std::span<const Answer> answers) const {
    if (answers.size() != queries.size()) {
        throw Error(ErrorCode::DimensionMismatch, "answer vector has " + std::to_string(answers.size()) +
                                                      " entries for " + std::to_string(queries.size()) + " queries");
    }
    for (const auto& row : table) {
        const bool match = std::all_of(row.conditions.begin(), row.conditions.end(),
                                       [&](const auto& cond) { return answers[cond.first] == cond.second; });
        if (match) return row.output;
    }
    throw Error(ErrorCode::InvalidInput, "truth table has no row for this answer vector");
}

Answer run_nonadaptive(const NonAdaptiveProgram& p, const AnswerPolicy& policy, OracleLog* log) {
    OracleLog local;
    OracleLog& sink = log != nullptr ? *log : local;
    std::vector<Answer> answers;
    answers.reserve(p.queries.size());
    for (const auto& q : p.queries) answers.push_back(answer(q, policy, sink));
    return p.evaluate(answers);
}

AdaptiveMachine as_machine(const NonAdaptiveProgram& p) {
    auto program = std::make_shared<const NonAdaptiveProgram>(p);
    AdaptiveMachine m;
    m.q_max = static_cast<int>(p.queries.size());
    m.name = "replay";
    m.step = [program](std::span<const Answer> answers) -> MachineStep {
        if (answers.size() < program->queries.size()) return NextQuery{program->queries[answers.size()]};
        return Halt{program->evaluate(answers)};
    };
    return m;
}

RobustnessReport check_robustness(const AdaptiveMachine& m, int cap) {
    RobustnessReport report;
    const auto runs = explore_adversaries(
        [&](const AnswerPolicy& policy, OracleLog& log) { return run_adaptive(m, policy, log); }, cap);
    report.behaviours = runs.size();
    std::set<std::uint64_t> invalid;
    for (const auto& run : runs) {
        for (const auto& e : run.log.entries()) {
            if (e.truth == PromiseVerdict::Invalid) invalid.insert(e.query.fingerprint);
        }
    }
    report.invalid_queries = invalid.size();

    // Prefer the plain all-yes / all-no pair as a witness when it suffices.
    const Answer yes_out = run_adaptive(m, AnswerPolicy::all_yes());
    const Answer no_out = run_adaptive(m, AnswerPolicy::all_no());
    if (yes_out != no_out) {
        report.invariant_holds = false;
        report.witness.emplace(AnswerPolicy::all_yes(), AnswerPolicy::all_no());
        return report;
    }
    for (const auto& run : runs) {
        if (run.result != runs.front().result) {
            report.invariant_holds = false;
            report.witness.emplace(runs.front().policy, run.policy);
            return report;
        }
    }
    return report;
}

// -----------------------------------------------------------------------------
// Machines
// -----------------------------------------------------------------------------

AdaptiveMachine constant_machine(Answer output) {
    return {[output](std::span<const Answer>) -> MachineStep { return Halt{output}; }, 0,
            "constant-" + std::string(to_string(output))};
}

AdaptiveMachine echo_machine(OracleQuery q) {
    return {[q = std::move(q)](std::span<const Answer> answers) -> MachineStep {
                if (answers.empty()) return NextQuery{q};
                return Halt{answers[0]};
            },
            1, "echo"};
}

AdaptiveMachine binary_search_machine(std::shared_ptr<const Hamiltonian> h, int c, const SearchConfig& cfg,
                                      int rounds, double threshold) {
    cfg.validate();
    if (rounds < 0) throw Error(ErrorCode::InvalidInput, "negative round count");
    const auto digest = hamiltonian_digest(*h);
    AdaptiveMachine m;
    m.q_max = rounds;
    m.name = "binary-search";
    m.step = [h = std::move(h), digest, c, cfg, rounds, threshold](std::span<const Answer> answers) -> MachineStep {
        RobustBisection state(cfg);
        for (const Answer a : answers) state.advance(a);
        if (state.rounds() < rounds && !state.done()) return NextQuery{lambda_probe(h, digest, c, state)};
        return Halt{state.upper() < threshold ? Answer::Yes : Answer::No};
    };
    return m;
}

AdaptiveMachine gap_decision_machine(const SpectralGapInstance& inst, const SearchConfig& cfg) {
    check_gap_config(inst, cfg);
    auto h = std::make_shared<const Hamiltonian>(inst.hamiltonian);
    const auto digest = hamiltonian_digest(*h);
    AdaptiveMachine m;
    m.q_max = 2 * cfg.query_budget();
    m.name = "gap-decision";
    m.step = [h = std::move(h), digest, cfg, b = inst.b](std::span<const Answer> answers) -> MachineStep {
        RobustBisection ground(cfg);
        RobustBisection excited(cfg);
        std::size_t used = 0;
        while (!ground.done()) {
            if (used == answers.size()) return NextQuery{lambda_probe(h, digest, 1, ground)};
            ground.advance(answers[used++]);
        }
        while (!excited.done()) {
            if (used == answers.size()) return NextQuery{lambda_probe(h, digest, 2, excited)};
            excited.advance(answers[used++]);
        }
        return Halt{gap_decision(ground.lower(), excited.upper(), b)};
    };
    return m;
}

}  // namespace gapforge
