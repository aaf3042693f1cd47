// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace gapforge {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string verdict_name(PromiseVerdict v) { return std::string(to_string(v)); }
std::string answer_name(Answer a) { return std::string(to_string(a)); }

double max_abs_diff(const Eigen::VectorXd& l, const Eigen::VectorXd& r) {
    if (l.size() != r.size()) return std::numeric_limits<double>::infinity();
    if (l.size() == 0) return 0;
    return (l - r).cwiseAbs().maxCoeff();
}

Eigen::VectorXd sorted_concat(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd all(x.size() + y.size());
    all << x, y;
    std::sort(all.data(), all.data() + all.size());
    return all;
}

void fail(VariantRecord& vr, std::string what) { vr.failures.push_back(std::move(what)); }

}  // namespace

void VerifyConfig::validate() const {
    std::ostringstream os;
    if (n_list.empty()) os << "n_list is empty; ";
    for (int n : n_list) {
        if (n < 1 || n + 1 > default_n_max()) os << "n = " << n << " outside [1, n_max - 1]; ";
        if (n >= 1 && k > n) os << "k = " << k << " exceeds n = " << n << "; ";
    }
    if (instances_per_n < 0) os << "instances_per_n is negative; ";
    if (variants.empty()) os << "no reduction variant selected; ";
    if (!(b > a)) os << "b must exceed a; ";
    if (a > 1 || b > 1) os << "the reduction caps the gap at 1, so a, b must be <= 1; ";
    if (!(eps > 0) || eps > (b - a) / 4) os << "eps must lie in (0, (b - a)/4]; ";
    if (!(c > 0)) os << "c must be positive; ";
    if (k < 1) os << "k must be >= 1; ";
    if (seeded_policies < 0) os << "seeded_policies is negative; ";
    if (!os.str().empty()) throw Error(ErrorCode::ConfigInvalid, os.str());
}

std::uint64_t instance_seed(std::uint64_t seed, int n, int index) {
    return mix64(mix64(seed) ^ (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(index));
}

int instance_term_count(int n, int index) { return n + (index % 2); }

bool InstanceRecord::passed() const {
    return std::all_of(variants.begin(), variants.end(), [](const auto& v) { return v.failures.empty(); });
}

InstanceRecord verify_instance(const KlhInstance& inst, const VerifyConfig& cfg) {
    InstanceRecord rec;
    const auto& h = inst.hamiltonian;
    rec.n = h.num_qubits();
    rec.terms = static_cast<int>(h.num_terms());
    const Spectrum spec_h = eigenvalues(h);
    rec.lambda1 = spec_h.lambda(1);
    rec.predicted_gap = std::min(rec.lambda1, 1.0);
    rec.klh_verdict = classify(rec.lambda1, inst.a, inst.b);
    rec.on_promise = rec.klh_verdict != PromiseVerdict::Invalid;

    const auto policies = sample_adversaries(static_cast<std::size_t>(cfg.seeded_policies), cfg.seed);

    for (const auto variant : cfg.variants) {
        VariantRecord vr;
        vr.variant = variant;
        const auto out = reduce_klh_to_gap(inst, variant);
        const auto& hp = out.instance.hamiltonian;
        const Spectrum spec_hp = eigenvalues(hp);
        vr.ground_energy = spec_hp.lambda(1);
        vr.gap = spec_hp.gap();
        vr.gap_deviation = std::abs(vr.gap - rec.predicted_gap);
        if (!(vr.gap_deviation <= kSpectralTol)) fail(vr, "gap identity");
        if (!(std::abs(vr.ground_energy) <= 1e-9)) fail(vr, "ground energy of H' is not 0");

        const auto blocks = block_spectrum(out, h);
        vr.block_deviation = std::max(max_abs_diff(sorted_concat(blocks.zero_block, blocks.one_block), spec_hp.values),
                                      max_abs_diff(blocks.one_block, spec_h.values));
        if (!(vr.block_deviation <= kSpectralTol)) fail(vr, "block spectrum");
        const auto& zero = blocks.zero_block;
        const auto null_count = (zero.array() <= kPsdTol).count();
        const auto excited_count = (zero.array() >= 1 - kPsdTol).count();
        vr.zero_block_ok = null_count == 1 && excited_count == zero.size() - 1;
        if (!vr.zero_block_ok) fail(vr, "zero block structure");

        vr.gap_verdict = classify(vr.gap, out.instance.a, out.instance.b);
        if (rec.on_promise && vr.gap_verdict != rec.klh_verdict) fail(vr, "verdict preservation");

        const auto search_cfg = SearchConfig::for_hamiltonian(hp, cfg.eps);
        vr.query_limit = 2 * search_cfg.query_budget();
        const Answer expected = vr.gap_verdict == PromiseVerdict::Yes ? Answer::Yes : Answer::No;
        const bool gap_promise = vr.gap_verdict != PromiseVerdict::Invalid;
        auto run_search = [&](const AnswerPolicy& policy) {
            const auto d = decide_gap_via_oracle_detailed(out.instance, search_cfg, policy);
            vr.max_queries = std::max(vr.max_queries, d.total_queries());
            return d.answer;
        };
        vr.search_all_yes = run_search(AnswerPolicy::all_yes());
        vr.search_all_no = run_search(AnswerPolicy::all_no());
        if (gap_promise && (vr.search_all_yes != expected || vr.search_all_no != expected)) {
            fail(vr, "oracle search decision");
        }
        for (const auto& policy : policies) {
            if (run_search(policy) != expected && gap_promise) ++vr.seeded_mismatches;
        }
        if (vr.seeded_mismatches > 0) fail(vr, "oracle search decision (seeded policies)");
        if (vr.max_queries > vr.query_limit) fail(vr, "query budget");

        if (cfg.exhaustive_adversaries) {
            try {
                const auto report = check_robustness(gap_decision_machine(out.instance, search_cfg));
                vr.robustness_checked = true;
                vr.robust = report.invariant_holds;
                vr.behaviours = report.behaviours;
                if (gap_promise && !vr.robust) fail(vr, "robustness");
            } catch (const Error& e) {
                if (e.code() != ErrorCode::TooManyInvalid) throw;
                if (gap_promise) fail(vr, "robustness: too many invalid queries to enumerate");
            }
        }
        rec.variants.push_back(std::move(vr));
    }
    return rec;
}

ReportSummary summarize(const std::vector<InstanceRecord>& records) {
    ReportSummary s;
    for (const auto& rec : records) {
        ++s.records;
        rec.passed() ? ++s.passed : ++s.failed;
        rec.on_promise ? ++s.on_promise : ++s.off_promise;
        for (const auto& vr : rec.variants) {
            s.max_gap_deviation = std::max(s.max_gap_deviation, vr.gap_deviation);
            s.max_block_deviation = std::max(s.max_block_deviation, vr.block_deviation);
            s.max_ground_energy = std::max(s.max_ground_energy, std::abs(vr.ground_energy));
            if (rec.on_promise && vr.gap_verdict != rec.klh_verdict) ++s.verdict_mismatches;
            for (const auto& f : vr.failures) {
                if (f.starts_with("oracle search")) ++s.search_mismatches;
                if (f.starts_with("robustness")) ++s.robustness_failures;
            }
        }
    }
    return s;
}

Report run_verify(const VerifyConfig& cfg) {
    cfg.validate();
    Report report;
    report.config = cfg;
    for (int n : cfg.n_list) {
        for (int i = 0; i < cfg.instances_per_n; ++i) {
            const auto seed = instance_seed(cfg.seed, n, i);
            KlhInstance inst{random_instance(n, cfg.k, instance_term_count(n, i), seed), cfg.a, cfg.b, cfg.c};
            auto rec = verify_instance(inst, cfg);
            rec.index = i;
            rec.seed = seed;
            report.records.push_back(std::move(rec));
        }
    }
    report.summary = summarize(report.records);
    return report;
}

void Report::write_jsonl(std::ostream& os) const {
    for (const auto& rec : records) {
        json j;
        j["n"] = rec.n;
        j["index"] = rec.index;
        j["seed"] = rec.seed;
        j["terms"] = rec.terms;
        j["lambda1"] = rec.lambda1;
        j["predicted_gap"] = rec.predicted_gap;
        j["klh_verdict"] = verdict_name(rec.klh_verdict);
        j["on_promise"] = rec.on_promise;
        json variants = json::array();
        for (const auto& vr : rec.variants) {
            json v;
            v["variant"] = std::string(to_string(vr.variant));
            v["ground_energy"] = vr.ground_energy;
            v["gap"] = vr.gap;
            v["gap_deviation"] = vr.gap_deviation;
            v["block_deviation"] = vr.block_deviation;
            v["zero_block_ok"] = vr.zero_block_ok;
            v["gap_verdict"] = verdict_name(vr.gap_verdict);
            v["search_all_yes"] = answer_name(vr.search_all_yes);
            v["search_all_no"] = answer_name(vr.search_all_no);
            v["seeded_mismatches"] = vr.seeded_mismatches;
            v["max_queries"] = vr.max_queries;
            v["query_limit"] = vr.query_limit;
            if (vr.robustness_checked) {
                v["robust"] = vr.robust;
                v["behaviours"] = vr.behaviours;
            }
            v["failures"] = vr.failures;
            variants.push_back(std::move(v));
        }
        j["variants"] = std::move(variants);
        j["pass"] = rec.passed();
        os << j.dump() << '\n';
    }
    json s;
    s["summary"] = {
        {"records", summary.records},
        {"passed", summary.passed},
        {"failed", summary.failed},
        {"on_promise", summary.on_promise},
        {"off_promise", summary.off_promise},
        {"verdict_mismatches", summary.verdict_mismatches},
        {"search_mismatches", summary.search_mismatches},
        {"robustness_failures", summary.robustness_failures},
        {"max_gap_deviation", summary.max_gap_deviation},
        {"max_block_deviation", summary.max_block_deviation},
        {"max_ground_energy", summary.max_ground_energy},
    };
    os << s.dump() << '\n';
}

void Report::write_table(std::ostream& os) const {
    struct Row {
        int records = 0, yes = 0, no = 0, off = 0, failed = 0, max_queries = 0;
        double max_dev = 0;
    };
    std::map<int, Row> rows;
    for (const auto& rec : records) {
        auto& r = rows[rec.n];
        ++r.records;
        if (rec.klh_verdict == PromiseVerdict::Yes) ++r.yes;
        if (rec.klh_verdict == PromiseVerdict::No) ++r.no;
        if (!rec.on_promise) ++r.off;
        if (!rec.passed()) ++r.failed;
        for (const auto& vr : rec.variants) {
            r.max_dev = std::max(r.max_dev, vr.gap_deviation);
            r.max_queries = std::max(r.max_queries, vr.max_queries);
        }
    }
    os << "   n  records  yes   no  off-promise  max|gap-pred|  max-queries  failed\n";
    for (const auto& [n, r] : rows) {
        os << std::setw(4) << n << std::setw(9) << r.records << std::setw(5) << r.yes << std::setw(5) << r.no
           << std::setw(13) << r.off << std::setw(15) << std::scientific << std::setprecision(2) << r.max_dev
           << std::defaultfloat << std::setw(13) << r.max_queries << std::setw(8) << r.failed << '\n';
    }
    os << "total: " << summary.passed << "/" << summary.records << " passed";
    os << ", verdict mismatches " << summary.verdict_mismatches << ", search mismatches "
       << summary.search_mismatches << ", robustness failures " << summary.robustness_failures << '\n';
}

}  // namespace gapforge
