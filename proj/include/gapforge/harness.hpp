// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief End-to-end verification: generate kLH instances, reduce them to
 *        Spectral Gap, and check every spectral identity and decision the
 *        reduction and the oracle search promise.
 */

#pragma once

#include "gapforge/query_flatten.hpp"
#include "gapforge/reduction.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace gapforge {

struct VerifyConfig {
    std::vector<int> n_list{2, 3, 4};
    int instances_per_n = 10;
    std::uint64_t seed = 1;
    std::vector<ReductionVariant> variants{ReductionVariant::GlobalProjector, ReductionVariant::HammingPenalty};
    double eps = 0.05;
    bool exhaustive_adversaries = false;
    /// Promise-gap exponent. With a = 1/3, b = 2/3 the condition b - a >= n^(-c)
    /// needs c >= log(3)/log(n), so c = 2 covers every n >= 2.
    double c = 2;
    double a = 1.0 / 3.0;
    double b = 2.0 / 3.0;
    int k = 2;
    /// Seeded adversary policies tried per search, besides all-yes/all-no.
    int seeded_policies = 100;

    /// Throws ConfigInvalid.
    void validate() const;
};

/// Deterministic per-instance seed.
std::uint64_t instance_seed(std::uint64_t seed, int n, int index);

/// m = n + (index mod 2) terms; gives a mix of YES, NO and off-promise cases.
int instance_term_count(int n, int index);

struct VariantRecord {
    ReductionVariant variant = ReductionVariant::GlobalProjector;
    double ground_energy = 0;       ///< lambda_1(H'), expected 0
    double gap = 0;                 ///< Delta(H')
    double gap_deviation = 0;       ///< |Delta(H') - min(lambda_1(H), 1)|
    double block_deviation = 0;     ///< worst block-spectrum mismatch
    bool zero_block_ok = false;     ///< one null state, the rest >= 1
    PromiseVerdict gap_verdict = PromiseVerdict::Invalid;
    Answer search_all_yes = Answer::No;
    Answer search_all_no = Answer::No;
    int seeded_mismatches = 0;      ///< vs truth, promise instances only
    int max_queries = 0;
    int query_limit = 0;            ///< 2 * per-search budget
    bool robustness_checked = false;
    bool robust = false;
    std::size_t behaviours = 0;
    std::vector<std::string> failures;
};

struct InstanceRecord {
    int n = 0;
    int index = 0;
    std::uint64_t seed = 0;
    int terms = 0;
    double lambda1 = 0;
    double predicted_gap = 0;
    PromiseVerdict klh_verdict = PromiseVerdict::Invalid;
    bool on_promise = false;
    std::vector<VariantRecord> variants;

    bool passed() const;
};

struct ReportSummary {
    std::size_t records = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t on_promise = 0;
    std::size_t off_promise = 0;
    std::size_t verdict_mismatches = 0;
    std::size_t search_mismatches = 0;
    std::size_t robustness_failures = 0;
    double max_gap_deviation = 0;
    double max_block_deviation = 0;
    double max_ground_energy = 0;
};

ReportSummary summarize(const std::vector<InstanceRecord>& records);

struct Report {
    VerifyConfig config;
    std::vector<InstanceRecord> records;
    ReportSummary summary;

    bool all_passed() const noexcept { return summary.failed == 0; }
    /// One JSON object per record, then one summary object. No timestamps.
    void write_jsonl(std::ostream& os) const;
    void write_table(std::ostream& os) const;
};

/// Checks for a single kLH instance; failures land in the record.
InstanceRecord verify_instance(const KlhInstance& inst, const VerifyConfig& cfg);

Report run_verify(const VerifyConfig& cfg);

}  // namespace gapforge
