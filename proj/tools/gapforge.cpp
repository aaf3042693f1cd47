// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

// gapforge: command-line front end.
//
//   gapforge gen      --n 4 --seed 7 -o klh.json
//   gapforge reduce   klh.json --variant global -o gap.json
//   gapforge spectrum gap.json [--all | --gap | --lambda c]
//   gapforge decide   gap.json
//   gapforge search   gap.json --eps 0.05 --policy all-yes [--exhaustive]
//   gapforge flatten  --demo binary-search --rounds 4 gap.json
//   gapforge verify   --n-list 2,3,4 --per-n 50 --seed 1 [--exhaustive] [-o report.jsonl]
//
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

#include "gapforge/harness.hpp"
#include "gapforge/instance_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace gapforge;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << text;
}

std::ostream& sig12(std::ostream& os) { return os << std::setprecision(12); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Gap reductions, promise-robust search and query flattening, checked by exact diagonalization"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded random kLH instance");
    int gen_n = 4, gen_k = 2, gen_m = -1;
    std::uint64_t gen_seed = 1;
    double gen_a = 1.0 / 3.0, gen_b = 2.0 / 3.0, gen_c = 2;
    std::string gen_out;
    gen->add_option("--n", gen_n, "qubit count")->capture_default_str();
    gen->add_option("--k", gen_k, "locality")->capture_default_str();
    gen->add_option("--m", gen_m, "term count (default n)");
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--a", gen_a, "YES threshold");
    gen->add_option("--b", gen_b, "NO threshold");
    gen->add_option("--c", gen_c, "promise-gap exponent")->capture_default_str();
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // reduce
    auto* red = app.add_subcommand("reduce", "map a kLH instance to a Spectral Gap instance");
    std::string red_in, red_out, red_variant = "global";
    red->add_option("input", red_in, "kLH instance")->required();
    red->add_option("--variant", red_variant, "global|hamming")
        ->check(CLI::IsMember({"global", "hamming"}))
        ->capture_default_str();
    red->add_option("-o,--output", red_out, "output file (default stdout)");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "print eigenvalues, gap, or one lambda_c");
    std::string spec_in;
    bool spec_all = false, spec_gap = false;
    int spec_lambda = 0;
    spec->add_option("input", spec_in, "instance file")->required();
    auto* all_flag = spec->add_flag("--all", spec_all, "full spectrum (default)");
    auto* gap_flag = spec->add_flag("--gap", spec_gap, "spectral gap lambda_2 - lambda_1");
    auto* lambda_opt = spec->add_option("--lambda", spec_lambda, "c-th smallest eigenvalue (1-based)");
    all_flag->excludes(gap_flag)->excludes(lambda_opt);
    gap_flag->excludes(lambda_opt);

    // decide
    auto* dec = app.add_subcommand("decide", "ground-truth promise verdict by diagonalization");
    std::string dec_in, dec_problem;
    dec->add_option("input", dec_in, "instance file")->required();
    dec->add_option("--problem", dec_problem, "klh|gap (default: gap for reduced files, else klh)")
        ->check(CLI::IsMember({"klh", "gap"}));

    // search
    auto* srch = app.add_subcommand("search", "decide Spectral Gap by robust binary search over oracle queries");
    std::string srch_in, srch_policy = "all-yes";
    double srch_eps = 0.05;
    bool srch_exhaustive = false;
    srch->add_option("input", srch_in, "gap instance")->required();
    srch->add_option("--eps", srch_eps, "target interval width")->capture_default_str();
    srch->add_option("--policy", srch_policy, "all-yes|all-no|seed:N")->capture_default_str();
    srch->add_flag("--exhaustive", srch_exhaustive, "replay every adversary behaviour");

    // flatten
    auto* flat = app.add_subcommand("flatten", "convert an adaptive query machine to non-adaptive queries");
    std::string flat_in, flat_demo = "binary-search";
    int flat_rounds = 4;
    double flat_eps = 0;
    flat->add_option("input", flat_in, "gap instance")->required();
    flat->add_option("--demo", flat_demo, "demo machine")->check(CLI::IsMember({"binary-search"}))->capture_default_str();
    flat->add_option("--rounds", flat_rounds, "search rounds (q_max)")->capture_default_str();
    flat->add_option("--eps", flat_eps, "search eps (default (b - a)/4)");

    // verify
    auto* ver = app.add_subcommand("verify", "end-to-end verification over seeded instances");
    VerifyConfig vcfg;
    std::string ver_variant = "both", ver_out;
    ver->add_option("--n-list", vcfg.n_list, "qubit counts")->delimiter(',')->capture_default_str();
    ver->add_option("--per-n", vcfg.instances_per_n, "instances per qubit count")->capture_default_str();
    ver->add_option("--seed", vcfg.seed, "master seed")->capture_default_str();
    ver->add_option("--variant", ver_variant, "global|hamming|both")
        ->check(CLI::IsMember({"global", "hamming", "both"}))
        ->capture_default_str();
    ver->add_option("--eps", vcfg.eps, "search precision")->capture_default_str();
    ver->add_option("--c", vcfg.c, "promise-gap exponent")->capture_default_str();
    ver->add_option("--policies", vcfg.seeded_policies, "seeded adversary policies per search")->capture_default_str();
    ver->add_flag("--exhaustive", vcfg.exhaustive_adversaries, "exhaustive adversary robustness check");
    ver->add_option("-o,--output", ver_out, "JSON-lines report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*gen) {
            const int m = gen_m < 0 ? gen_n : gen_m;
            KlhInstance inst{random_instance(gen_n, gen_k, m, gen_seed), gen_a, gen_b, gen_c};
            emit(dump_instance(InstanceFile::from(inst)), gen_out);
            return kExitPass;
        }
        if (*red) {
            const auto inst = read_klh_instance(red_in);
            const auto out = reduce_klh_to_gap(inst, *parse_variant(red_variant));
            emit(dump_instance(InstanceFile::from(out)), red_out);
            return kExitPass;
        }
        if (*spec) {
            const auto file = read_instance(spec_in);
            const auto s = eigenvalues(file.hamiltonian);
            if (spec_gap) {
                std::cout << sig12 << s.gap() << '\n';
            } else if (*lambda_opt) {
                std::cout << sig12 << s.lambda(spec_lambda) << '\n';
            } else {
                for (Eigen::Index i = 0; i < s.size(); ++i) std::cout << sig12 << s.values(i) << '\n';
            }
            return kExitPass;
        }
        if (*dec) {
            const auto file = read_instance(dec_in);
            const bool as_gap = dec_problem.empty() ? file.meta.has_value() : dec_problem == "gap";
            const auto verdict = as_gap ? decide_gap_truth(file.as_gap()) : decide_klh_truth(file.as_klh());
            std::cout << (as_gap ? "gap " : "klh ") << to_string(verdict) << '\n';
            return kExitPass;
        }
        if (*srch) {
            const auto inst = read_gap_instance(srch_in);
            const auto policy = parse_policy(srch_policy);
            if (!policy) throw Error(ErrorCode::ConfigInvalid, "unknown policy " + srch_policy);
            const auto cfg = SearchConfig::for_hamiltonian(inst.hamiltonian, srch_eps);
            const auto d = decide_gap_via_oracle_detailed(inst, cfg, *policy);
            std::cout << "decision: " << to_string(d.answer) << '\n'
                      << sig12 << "lambda_1 in [" << d.ground.lower << ", " << d.ground.upper << "]\n"
                      << "lambda_2 in [" << d.excited.lower << ", " << d.excited.upper << "]\n"
                      << "gap upper bound: " << d.gap_upper() << " (b = " << inst.b << ")\n"
                      << "queries: " << d.total_queries() << " (limit " << 2 * cfg.query_budget() << ")\n";
            if (srch_exhaustive) {
                const auto report = check_robustness(gap_decision_machine(inst, cfg));
                std::cout << "robust: " << (report.invariant_holds ? "yes" : "no") << " (" << report.behaviours
                          << " adversary behaviours, " << report.invalid_queries << " invalid queries)\n";
                if (!report.invariant_holds) {
                    std::cout << "witness: " << report.witness->first.describe() << " vs "
                              << report.witness->second.describe() << '\n';
                    return kExitFail;
                }
            }
            return kExitPass;
        }
        if (*flat) {
            const auto inst = read_gap_instance(flat_in);
            auto cfg = SearchConfig::for_hamiltonian(inst.hamiltonian, flat_eps > 0 ? flat_eps : (inst.b - inst.a) / 4);
            const auto h = std::make_shared<const Hamiltonian>(inst.hamiltonian);
            const auto machine = binary_search_machine(h, 2, cfg, flat_rounds, inst.b);
            const auto program = flatten(machine);
            const auto report = check_robustness(machine);
            std::cout << "machine: " << machine.name << ", q_max = " << machine.q_max << '\n'
                      << "queries before deduplication: " << program.tree_queries << '\n'
                      << "queries after deduplication: " << program.queries.size() << '\n'
                      << "truth-table rows: " << program.table.size() << '\n';
            bool agree = true;
            for (const auto& policy : {AnswerPolicy::all_yes(), AnswerPolicy::all_no()}) {
                agree = agree && run_nonadaptive(program, policy) == run_adaptive(machine, policy);
            }
            std::cout << "non-adaptive replay matches adaptive run: " << (agree ? "yes" : "no") << '\n'
                      << "robust: " << (report.invariant_holds ? "yes" : "no") << " (" << report.behaviours
                      << " adversary behaviours)\n";
            if (!report.invariant_holds) {
                std::cout << "witness: " << report.witness->first.describe() << " vs "
                          << report.witness->second.describe() << '\n';
            }
            return agree ? kExitPass : kExitFail;
        }
        if (*ver) {
            if (ver_variant == "global") vcfg.variants = {ReductionVariant::GlobalProjector};
            if (ver_variant == "hamming") vcfg.variants = {ReductionVariant::HammingPenalty};
            const auto report = run_verify(vcfg);
            if (!ver_out.empty()) {
                std::ostringstream os;
                report.write_jsonl(os);
                emit(os.str(), ver_out);
            }
            report.write_table(std::cout);
            return report.all_passed() ? kExitPass : kExitFail;
        }
    } catch (const Error& e) {
        std::cerr << "gapforge: " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::ParseError:
            case ErrorCode::IoError:
            case ErrorCode::ConfigInvalid:
            case ErrorCode::ConfigTooCoarse:
            case ErrorCode::InvalidInput:
            case ErrorCode::TooLarge:
            case ErrorCode::IndexOutOfRange:
                return kExitUsage;
            default:
                return kExitFail;
        }
    }
    return kExitUsage;
}
