// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/gap_search.hpp"

#include <cmath>
#include <sstream>

namespace gapforge {

void SearchConfig::validate() const {
    std::ostringstream os;
    if (!(hi > lo)) os << "hi must exceed lo; ";
    if (!(eps > 0)) os << "eps must be positive; ";
    if (!(gamma > 0)) os << "gamma must be positive; ";
    if (!(gamma < eps / 4)) os << "gamma must be below eps/4; ";
    if (!os.str().empty()) throw Error(ErrorCode::ConfigInvalid, os.str());
}

int SearchConfig::query_budget() const {
    return static_cast<int>(std::ceil(std::log2((hi - lo) / (eps - 2 * gamma)))) + 1;
}

SearchConfig SearchConfig::for_hamiltonian(const Hamiltonian& h, double eps) {
    SearchConfig cfg;
    cfg.lo = 0;
    cfg.hi = std::max<double>(static_cast<double>(h.num_terms()), 1.0);
    cfg.eps = eps;
    cfg.gamma = eps / 8;
    return cfg;
}

RobustBisection::RobustBisection(const SearchConfig& cfg) : cfg_(cfg), lower_(cfg.lo), upper_(cfg.hi) {
    cfg_.validate();
}

void RobustBisection::advance(Answer a) {
    const double low = probe_low();
    const double high = probe_high();
    if (a == Answer::Yes) {
        upper_ = std::min(upper_, high);
    } else {
        lower_ = std::max(lower_, low);
    }
    ++rounds_;
}

OracleQuery lambda_probe(const std::shared_ptr<const Hamiltonian>& h, std::uint64_t digest, int c,
                         const RobustBisection& state) {
    const auto kind = c == 1 ? QueryKind::GroundEnergy : QueryKind::ExcitedEnergy;
    return make_query(kind, h, digest, state.probe_low(), state.probe_high(), c);
}

SearchResult robust_search_lambda(const std::shared_ptr<const Hamiltonian>& h, int c, const SearchConfig& cfg,
                                  const AnswerPolicy& policy, OracleLog* log) {
    if (!h) throw Error(ErrorCode::InvalidInput, "search without a Hamiltonian");
    if (c < 1 || (h->num_qubits() < 63 && static_cast<std::uint64_t>(c) > h->dim())) {
        throw Error(ErrorCode::IndexOutOfRange, "lambda_" + std::to_string(c) + " does not exist");
    }
    RobustBisection state(cfg);
    const auto digest = hamiltonian_digest(*h);
    const int guard = cfg.query_budget();
    SearchResult result;
    while (!state.done()) {
        if (state.rounds() >= guard) {
            throw Error(ErrorCode::NonConvergence, "search exceeded its query budget of " + std::to_string(guard));
        }
        const auto q = lambda_probe(h, digest, c, state);
        const Answer a = answer(q, policy, result.transcript);
        if (log != nullptr) log->append(result.transcript.entries().back());
        state.advance(a);
    }
    result.lower = state.lower();
    result.upper = state.upper();
    result.queries_used = state.rounds();
    return result;
}

SearchResult robust_search_lambda(const Hamiltonian& h, int c, const SearchConfig& cfg, const AnswerPolicy& policy) {
    return robust_search_lambda(std::make_shared<const Hamiltonian>(h), c, cfg, policy);
}

void check_gap_config(const SpectralGapInstance& inst, const SearchConfig& cfg) {
    cfg.validate();
    if (!(inst.b > inst.a)) throw Error(ErrorCode::InvalidInput, "gap instance needs b > a");
    if (cfg.eps > (inst.b - inst.a) / 4) {
        std::ostringstream os;
        os << "eps = " << cfg.eps << " exceeds (b - a)/4 = " << (inst.b - inst.a) / 4;
        throw Error(ErrorCode::ConfigTooCoarse, os.str());
    }
}

GapDecision decide_gap_via_oracle_detailed(const SpectralGapInstance& inst, const SearchConfig& cfg,
                                           const AnswerPolicy& policy, OracleLog* log) {
    check_gap_config(inst, cfg);
    if (inst.hamiltonian.num_qubits() < 1) throw Error(ErrorCode::Dimension, "gap of a 0-qubit Hamiltonian");
    const auto h = std::make_shared<const Hamiltonian>(inst.hamiltonian);
    GapDecision d;
    d.ground = robust_search_lambda(h, 1, cfg, policy, log);
    d.excited = robust_search_lambda(h, 2, cfg, policy, log);
    d.answer = gap_decision(d.ground.lower, d.excited.upper, inst.b);
    return d;
}

Answer decide_gap_via_oracle(const SpectralGapInstance& inst, const SearchConfig& cfg, const AnswerPolicy& policy) {
    return decide_gap_via_oracle_detailed(inst, cfg, policy).answer;
}

}  // namespace gapforge
