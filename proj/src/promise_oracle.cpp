// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/promise_oracle.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace gapforge {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Fnv1a {
public:
    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= kFnvPrime;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    // +0.0 and -0.0 hash alike.
    void f64(double v) { u64(v == 0.0 ? 0 : std::bit_cast<std::uint64_t>(v)); }
    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_ = kFnvOffset;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

}  // namespace

std::string_view to_string(QueryKind kind) noexcept {
    switch (kind) {
        case QueryKind::GroundEnergy: return "GroundEnergy";
        case QueryKind::ExcitedEnergy: return "ExcitedEnergy";
        case QueryKind::Gap: return "Gap";
    }
    return "?";
}

std::uint64_t hamiltonian_digest(const Hamiltonian& h) {
    Fnv1a hash;
    hash.i64(h.num_qubits());
    hash.u64(h.num_terms());
    for (const auto& term : h.terms()) {
        hash.u64(term.support().size());
        for (int q : term.support()) hash.i64(q);
        const auto& m = term.matrix();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                hash.f64(m(i, j).real());
                hash.f64(m(i, j).imag());
            }
        }
    }
    return hash.value();
}

std::string OracleQuery::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == QueryKind::ExcitedEnergy) os << "(" << level << ")";
    os << " n=" << (hamiltonian ? hamiltonian->num_qubits() : -1) << " a=" << std::setprecision(17) << a
       << " b=" << b << " fp=" << hex64(fingerprint);
    return os.str();
}

OracleQuery make_query(QueryKind kind, std::shared_ptr<const Hamiltonian> h, double a, double b, int level) {
    if (!h) throw Error(ErrorCode::InvalidInput, "query without a Hamiltonian");
    const auto digest = hamiltonian_digest(*h);
    return make_query(kind, std::move(h), digest, a, b, level);
}

OracleQuery make_query(QueryKind kind, std::shared_ptr<const Hamiltonian> h, std::uint64_t digest, double a,
                       double b, int level) {
    if (!h) throw Error(ErrorCode::InvalidInput, "query without a Hamiltonian");
    if (!(b > a)) throw Error(ErrorCode::InvalidInput, "query thresholds need b > a");
    switch (kind) {
        case QueryKind::GroundEnergy: level = 1; break;
        case QueryKind::Gap: level = 2; break;
        case QueryKind::ExcitedEnergy:
            if (level < 1) throw Error(ErrorCode::InvalidInput, "excited-energy level must be >= 1");
            break;
    }
    OracleQuery q{kind, level, std::move(h), a, b, digest, 0};
    Fnv1a hash;
    hash.u64(static_cast<std::uint64_t>(kind));
    hash.i64(level);
    hash.u64(digest);
    hash.f64(a);
    hash.f64(b);
    q.fingerprint = hash.value();
    return q;
}

// -----------------------------------------------------------------------------
// SpectrumCache
// -----------------------------------------------------------------------------

std::shared_ptr<const Spectrum> SpectrumCache::get(const std::shared_ptr<const Hamiltonian>& h,
                                                   std::uint64_t digest, int n_max) {
    {
        std::lock_guard lock(mutex_);
        auto [it, end] = entries_.equal_range(digest);
        for (; it != end; ++it) {
            if (it->second.hamiltonian == h || *it->second.hamiltonian == *h) return it->second.spectrum;
        }
    }
    // Diagonalize outside the lock; a concurrent duplicate computation is harmless.
    auto spectrum = std::make_shared<const Spectrum>(eigenvalues(*h, false, n_max));
    std::lock_guard lock(mutex_);
    if (entries_.size() >= capacity_) entries_.clear();
    entries_.emplace(digest, Entry{h, spectrum});
    return spectrum;
}

void SpectrumCache::clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
}

std::size_t SpectrumCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

SpectrumCache& SpectrumCache::shared() {
    static SpectrumCache cache;
    return cache;
}

double query_value(const OracleQuery& q, int n_max) {
    const auto spectrum = SpectrumCache::shared().get(q.hamiltonian, q.hamiltonian_digest, n_max);
    switch (q.kind) {
        case QueryKind::GroundEnergy: return spectrum->lambda(1);
        case QueryKind::ExcitedEnergy: return spectrum->lambda(q.level);
        case QueryKind::Gap: return spectrum->gap();
    }
    return 0;
}

PromiseVerdict truth_verdict(const OracleQuery& q, int n_max) { return classify(query_value(q, n_max), q.a, q.b); }

// -----------------------------------------------------------------------------
// AnswerPolicy
// -----------------------------------------------------------------------------

AnswerPolicy AnswerPolicy::seeded(std::uint64_t seed) {
    AnswerPolicy p(Mode::Seeded);
    p.seed_ = seed;
    return p;
}

AnswerPolicy AnswerPolicy::explicit_assignment(std::map<std::uint64_t, Answer> assignment, Answer fallback) {
    AnswerPolicy p(Mode::Explicit);
    p.assignment_ = std::move(assignment);
    p.fallback_ = fallback;
    return p;
}

Answer AnswerPolicy::on_invalid(const OracleQuery& q) const {
    switch (mode_) {
        case Mode::AllYes: return Answer::Yes;
        case Mode::AllNo: return Answer::No;
        case Mode::Seeded: return (splitmix64(seed_ ^ splitmix64(q.fingerprint)) & 1U) ? Answer::Yes : Answer::No;
        case Mode::Explicit: {
            const auto it = assignment_.find(q.fingerprint);
            return it == assignment_.end() ? fallback_ : it->second;
        }
    }
    return Answer::No;
}

std::string AnswerPolicy::describe() const {
    switch (mode_) {
        case Mode::AllYes: return "all-yes";
        case Mode::AllNo: return "all-no";
        case Mode::Seeded: return "seed:" + std::to_string(seed_);
        case Mode::Explicit: {
            std::string out = "explicit{";
            const char* sep = "";
            for (const auto& [fp, ans] : assignment_) {
                out += sep + hex64(fp) + "=" + std::string(to_string(ans));
                sep = ",";
            }
            return out + "; else " + std::string(to_string(fallback_)) + "}";
        }
    }
    return "?";
}

std::optional<AnswerPolicy> parse_policy(std::string_view text) {
    if (text == "all-yes") return AnswerPolicy::all_yes();
    if (text == "all-no") return AnswerPolicy::all_no();
    if (text.starts_with("seed:")) {
        const auto digits = text.substr(5);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
            return AnswerPolicy::seeded(seed);
        }
    }
    return std::nullopt;
}

// -----------------------------------------------------------------------------
// Log and answering
// -----------------------------------------------------------------------------

bool OracleLog::consistent() const {
    for (const auto& e : entries_) {
        if (e.truth == PromiseVerdict::Yes && e.emitted != Answer::Yes) return false;
        if (e.truth == PromiseVerdict::No && e.emitted != Answer::No) return false;
    }
    return true;
}

void OracleLog::write_jsonl(std::ostream& os) const {
    for (const auto& e : entries_) {
        nlohmann::ordered_json j;
        j["kind"] = std::string(to_string(e.query.kind));
        j["level"] = e.query.level;
        j["n"] = e.query.hamiltonian ? e.query.hamiltonian->num_qubits() : -1;
        j["a"] = e.query.a;
        j["b"] = e.query.b;
        j["fingerprint"] = hex64(e.query.fingerprint);
        j["value"] = e.value;
        j["truth"] = std::string(to_string(e.truth));
        j["answer"] = std::string(to_string(e.emitted));
        os << j.dump() << '\n';
    }
}

Answer answer(const OracleQuery& q, const AnswerPolicy& policy, OracleLog& log, int n_max) {
    const double value = query_value(q, n_max);
    const auto truth = classify(value, q.a, q.b);
    Answer emitted = Answer::No;
    switch (truth) {
        case PromiseVerdict::Yes: emitted = Answer::Yes; break;
        case PromiseVerdict::No: emitted = Answer::No; break;
        case PromiseVerdict::Invalid: emitted = policy.on_invalid(q); break;
    }
    log.append({q, value, truth, emitted});
    return emitted;
}

std::vector<AnswerPolicy> enumerate_adversaries(const std::vector<OracleQuery>& queries, int cap, int n_max) {
    std::vector<std::uint64_t> invalid;
    std::set<std::uint64_t> seen;
    for (const auto& q : queries) {
        if (seen.count(q.fingerprint) != 0) continue;
        seen.insert(q.fingerprint);
        if (truth_verdict(q, n_max) == PromiseVerdict::Invalid) invalid.push_back(q.fingerprint);
    }
    if (static_cast<int>(invalid.size()) > cap) {
        throw Error(ErrorCode::TooManyInvalid,
                    std::to_string(invalid.size()) + " invalid queries exceed the cap of " + std::to_string(cap));
    }
    std::vector<AnswerPolicy> policies;
    const std::uint64_t count = std::uint64_t{1} << invalid.size();
    policies.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::map<std::uint64_t, Answer> assignment;
        for (std::size_t i = 0; i < invalid.size(); ++i) {
            assignment[invalid[i]] = ((mask >> i) & 1U) ? Answer::Yes : Answer::No;
        }
        policies.push_back(AnswerPolicy::explicit_assignment(std::move(assignment), Answer::No));
    }
    return policies;
}

std::vector<AnswerPolicy> sample_adversaries(std::size_t count, std::uint64_t seed) {
    std::vector<AnswerPolicy> policies;
    policies.reserve(count);
    for (std::size_t i = 0; i < count; ++i) policies.push_back(AnswerPolicy::seeded(splitmix64(seed + i)));
    return policies;
}

}  // namespace gapforge
