// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "gapforge/harness.hpp"
#include "gapforge/query_flatten.hpp"
#include "gapforge/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace gapforge;

namespace {

constexpr double kA = 1.0 / 3.0;
constexpr double kB = 2.0 / 3.0;
constexpr double kGapTol = 1e-8;
constexpr double kGroundTol = 1e-9;
constexpr double kBlockTol = 1e-8;
constexpr double kCrossTol = 1e-8;
constexpr double kPlantedEps = 0.02;
constexpr double kDecideEps = 0.05;
constexpr int kInstances = 150;
constexpr int kSeededPolicies = 100;
constexpr double kReductionSeconds = 30;
constexpr double kSuiteSeconds = 300;

const std::vector<ReductionVariant> kVariants{ReductionVariant::GlobalProjector, ReductionVariant::HammingPenalty};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Case {
    KlhInstance inst;
    PromiseVerdict verdict;
    std::vector<ReductionOutput> reduced;
};

// 150 instances over n = 2..5, k = 2, m = n or n + 1 terms.
std::vector<Case> make_cases() {
    const std::vector<int> ns{2, 3, 4, 5};
    std::vector<Case> cases;
    for (int i = 0; i < kInstances; ++i) {
        const int n = ns[static_cast<std::size_t>(i) % ns.size()];
        const int index = i / static_cast<int>(ns.size());
        const KlhInstance inst{random_instance(n, 2, instance_term_count(n, index), instance_seed(1, n, index)), kA,
                               kB, 2};
        Case c{inst, decide_klh_truth(inst), {}};
        for (const auto v : kVariants) c.reduced.push_back(reduce_klh_to_gap(inst, v));
        cases.push_back(std::move(c));
    }
    return cases;
}

bool on_promise(const Case& c) { return c.verdict != PromiseVerdict::Invalid; }

Answer as_answer(PromiseVerdict v) { return v == PromiseVerdict::Yes ? Answer::Yes : Answer::No; }

void criterion_1(const std::vector<Case>& cases, Clock::time_point t0) {
    double max_dev = 0, max_ground = 0;
    for (const auto& c : cases) {
        const double predicted = std::min(eigenvalues(c.inst.hamiltonian).lambda(1), 1.0);
        for (const auto& out : c.reduced) {
            const auto spec = eigenvalues(out.instance.hamiltonian);
            max_dev = std::max(max_dev, std::abs(spec.gap() - predicted));
            max_ground = std::max(max_ground, std::abs(spec.lambda(1)));
        }
    }
    const double elapsed = seconds_since(t0);
    report(1, max_dev <= kGapTol && max_ground <= kGroundTol && elapsed < kReductionSeconds,
           std::to_string(cases.size()) + " instances x 2 variants, max|gap - min(l1,1)| = " + fmt(max_dev) +
               " (tol " + fmt(kGapTol) + "), max|l1(H')| = " + fmt(max_ground) + " (tol " + fmt(kGroundTol) +
               "), " + fmt(elapsed) + " s (limit " + fmt(kReductionSeconds) + ")");
}

void criterion_2(const std::vector<Case>& cases) {
    int checked = 0, mismatches = 0;
    for (const auto& c : cases) {
        if (!on_promise(c) || !validate_klh(c.inst).valid()) continue;
        for (const auto& out : c.reduced) {
            ++checked;
            mismatches += decide_gap_truth(out.instance) != c.verdict;
        }
    }
    report(2, checked > 0 && mismatches == 0,
           std::to_string(checked) + " promise (instance, variant) pairs, " + std::to_string(mismatches) +
               " verdict mismatches");
}

void criterion_3(const std::vector<Case>& cases) {
    double max_concat = 0, max_one = 0;
    for (const auto& c : cases) {
        const auto input = eigenvalues(c.inst.hamiltonian);
        for (const auto& out : c.reduced) {
            const auto blocks = block_spectrum(out, c.inst.hamiltonian);
            std::vector<double> merged(blocks.zero_block.begin(), blocks.zero_block.end());
            merged.insert(merged.end(), blocks.one_block.begin(), blocks.one_block.end());
            std::sort(merged.begin(), merged.end());
            const auto full = eigenvalues(out.instance.hamiltonian);
            for (Eigen::Index i = 0; i < full.size(); ++i) {
                max_concat = std::max(max_concat, std::abs(merged[static_cast<std::size_t>(i)] - full.values(i)));
            }
            max_one = std::max(max_one, (blocks.one_block - input.values).cwiseAbs().maxCoeff());
        }
    }
    report(3, max_concat <= kBlockTol && max_one <= kBlockTol,
           "max|sort(blocks) - spec(H')| = " + fmt(max_concat) + ", max|1-block - spec(H)| = " + fmt(max_one) +
               " (tol " + fmt(kBlockTol) + ")");
}

void criterion_4() {
    bool ok = true;
    std::size_t runs_total = 0;
    int max_used = 0, budget = 0;
    for (const double planted : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto h = std::make_shared<const Hamiltonian>(gapforge::testing::planted_ground(planted));
        if (std::abs(gapforge::testing::reference_spectrum(*h)[0] - planted) > 1e-12) ok = false;
        const auto cfg = SearchConfig::for_hamiltonian(*h, kPlantedEps);
        budget = cfg.query_budget();
        const auto check = [&](const SearchResult& r) {
            if (!(r.lower <= planted && planted <= r.upper)) ok = false;
            if (r.upper - r.lower > cfg.eps) ok = false;
            if (r.queries_used > budget) ok = false;
            max_used = std::max(max_used, r.queries_used);
        };
        try {
            const auto runs = explore_adversaries(
                [&](const AnswerPolicy& p, OracleLog& log) { return robust_search_lambda(h, 1, cfg, p, &log); });
            runs_total += runs.size();
            for (const auto& run : runs) check(run.result);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TooManyInvalid) throw;
            for (const auto& p : sample_adversaries(kAdversarySamples, 4)) check(robust_search_lambda(h, 1, cfg, p));
        }
    }
    report(4, ok,
           "planted l1 in {0,.25,.5,.75,1}, eps " + fmt(kPlantedEps) + ", " + std::to_string(runs_total) +
               " exhaustive adversary runs, max queries " + std::to_string(max_used) + " <= budget " +
               std::to_string(budget));
}

void criterion_5(const std::vector<Case>& cases) {
    int decisions = 0, mismatches = 0, over_budget = 0, max_total = 0;
    std::vector<AnswerPolicy> policies{AnswerPolicy::all_yes(), AnswerPolicy::all_no()};
    for (const auto& p : sample_adversaries(kSeededPolicies, 5)) policies.push_back(p);
    for (const auto& c : cases) {
        if (!on_promise(c)) continue;
        for (const auto& out : c.reduced) {
            const auto expected = as_answer(decide_gap_truth(out.instance));
            const auto cfg = SearchConfig::for_hamiltonian(out.instance.hamiltonian, kDecideEps);
            for (const auto& p : policies) {
                const auto d = decide_gap_via_oracle_detailed(out.instance, cfg, p);
                ++decisions;
                mismatches += d.answer != expected;
                over_budget += d.total_queries() > 2 * cfg.query_budget();
                max_total = std::max(max_total, d.total_queries());
            }
        }
    }
    report(5, decisions > 0 && mismatches == 0 && over_budget == 0,
           std::to_string(decisions) + " decisions (all-yes, all-no, " + std::to_string(kSeededPolicies) +
               " seeded), " + std::to_string(mismatches) + " mismatches, " + std::to_string(over_budget) +
               " over 2x budget, max queries " + std::to_string(max_total));
}

void criterion_6() {
    bool ok = true;
    std::size_t machines = 0, policy_runs = 0;
    const auto planted = std::make_shared<const Hamiltonian>(gapforge::testing::planted_ground(0.5));
    const SearchConfig cfg{0, 2, kPlantedEps, kPlantedEps / 8};
    std::vector<AdaptiveMachine> ms;
    for (int q = 1; q <= 4; ++q) {
        ms.push_back(binary_search_machine(planted, 1, cfg, q, kB));
        // Wide probe windows so that many probes straddle the planted value.
        for (const double e0 : {0.25, 0.5, 0.625}) {
            const auto h = std::make_shared<const Hamiltonian>(gapforge::testing::planted_ground(e0));
            ms.push_back(binary_search_machine(h, 1, SearchConfig{0, 1, 0.2, 0.045}, q, 0.5));
        }
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const KlhInstance inst{random_instance(3, 2, 3, 500 + seed), kA, kB, 2};
            const auto out = reduce_klh_to_gap(inst, ReductionVariant::HammingPenalty);
            const auto h = std::make_shared<const Hamiltonian>(out.instance.hamiltonian);
            ms.push_back(binary_search_machine(h, 2, SearchConfig::for_hamiltonian(*h, kPlantedEps), q, kB));
        }
    }
    for (const auto& m : ms) {
        ++machines;
        const auto program = flatten(m);
        if (program.queries.size() > (std::size_t{1} << m.q_max) - 1) ok = false;
        for (const auto& p : enumerate_adversaries(program.queries)) {
            ++policy_runs;
            if (run_nonadaptive(program, p) != run_adaptive(m, p)) ok = false;
        }
    }
    const auto invalid = make_query(QueryKind::GroundEnergy, planted, kA, kB);
    const auto demo = echo_machine(invalid);
    const auto rep = check_robustness(demo);
    bool demo_ok = !rep.invariant_holds && rep.witness.has_value();
    if (demo_ok) demo_ok = run_adaptive(demo, rep.witness->first) != run_adaptive(demo, rep.witness->second);
    report(6, ok && demo_ok,
           std::to_string(machines) + " machines (q_max 1..4), " + std::to_string(policy_runs) +
               " exhaustive policy replays agree; non-robust demo " +
               (demo_ok ? "flagged with replayable witness " + rep.witness->first.describe() + " / " +
                              rep.witness->second.describe()
                        : std::string("NOT flagged")));
}

void criterion_7(const std::vector<Case>& cases) {
    int checked = 0, robust = 0;
    std::size_t behaviours = 0;
    for (const auto& c : cases) {
        if (checked == 20) break;
        if (!on_promise(c)) continue;
        const auto& out = c.reduced.front();
        const auto m = gap_decision_machine(out.instance, SearchConfig::for_hamiltonian(out.instance.hamiltonian,
                                                                                        kDecideEps));
        const auto rep = check_robustness(m);
        ++checked;
        robust += rep.invariant_holds;
        behaviours += rep.behaviours;
    }
    report(7, checked == 20 && robust == 20,
           std::to_string(robust) + "/" + std::to_string(checked) + " promise instances robust, " +
               std::to_string(behaviours) + " adversary behaviours explored");
}

void criterion_8() {
    double max_dev = 0;
    int count = 0;
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + i % 5;
        const int k = std::min(n, 2 + i % 2);
        const auto h = random_instance(n, k, n + i % 3, 800 + static_cast<std::uint64_t>(i));
        const auto ours = eigenvalues(h);
        const auto ref = gapforge::testing::reference_spectrum(h);
        for (Eigen::Index j = 0; j < ours.size(); ++j) {
            max_dev = std::max(max_dev, std::abs(ours.values(j) - ref[static_cast<std::size_t>(j)]));
        }
        ++count;
    }
    report(8, max_dev <= kCrossTol,
           std::to_string(count) + " instances n <= 6 vs Jacobi reference, max deviation " + fmt(max_dev) + " (tol " +
               fmt(kCrossTol) + ")");
}

void criterion_9(Clock::time_point suite_start) {
    VerifyConfig cfg;
    cfg.n_list = {2, 3, 4, 5};
    const auto run = [&] {
        std::ostringstream os;
        run_verify(cfg).write_jsonl(os);
        return os.str();
    };
    const auto first = run();
    const auto second = run();
    const double elapsed = seconds_since(suite_start);
    report(9, first == second && !first.empty() && elapsed < kSuiteSeconds,
           std::string("verify reports ") + (first == second ? "byte-identical" : "DIFFER") + " (" +
               std::to_string(first.size()) + " bytes), suite " + fmt(elapsed) + " s (limit " + fmt(kSuiteSeconds) +
               ")");
}

}  // namespace

int main() {
    const auto start = Clock::now();
    try {
        const auto cases = make_cases();
        criterion_1(cases, start);
        criterion_2(cases);
        criterion_3(cases);
        criterion_4();
        criterion_5(cases);
        criterion_6();
        criterion_7(cases);
        criterion_8();
        criterion_9(start);
    } catch (const std::exception& e) {
        std::cerr << "acceptance aborted: " << e.what() << '\n';
        return 2;
    }
    std::printf("%s (%d failing)\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
