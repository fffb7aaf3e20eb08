#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/aux_law.hpp"
#include "cmaccm/channel.hpp"
#include "cmaccm/info.hpp"
#include "cmaccm/rng.hpp"

namespace cmaccm {

using Seq = std::vector<std::uint8_t>;

struct SimConfig {
    std::size_t n = 2;         // blocklength
    std::size_t m0 = 1;        // |W0|
    std::size_t m1 = 2;        // |W1|
    std::size_t m2 = 1;        // |W2|
    std::size_t bin_size = 1;  // L, codewords per bin in the v1 layer
    double eps_typ = 0.5;      // strong-typicality slack
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::uint64_t enum_budget = 10'000'000;  // cap on |Y2|^n * m0*m1*m2*L
    std::size_t reject_cap = 1000;           // attempts per codeword

    void validate() const {
        if (n < 1) throw UsageError("SimConfig: n must be >= 1");
        if (m0 < 1 || m1 < 1 || m2 < 1 || bin_size < 1)
            throw UsageError("SimConfig: message-set sizes and bin size must be >= 1");
        if (!(eps_typ > 0.0)) throw UsageError("SimConfig: eps_typ must be > 0");
    }

    double rate0() const { return std::log2(static_cast<double>(m0)) / static_cast<double>(n); }
    double rate1() const { return std::log2(static_cast<double>(m1)) / static_cast<double>(n); }
    double rate2() const { return std::log2(static_cast<double>(m2)) / static_cast<double>(n); }

    std::string echo() const {
        std::ostringstream os;
        os << "n=" << n << " m0=" << m0 << " m1=" << m1 << " m2=" << m2 << " L=" << bin_size
           << " eps_typ=" << eps_typ << " trials=" << trials << " seed=" << seed;
        return os.str();
    }
};

// Strong typicality with per-letter slack eps*q(c) + eps/|C|, applied to the
// empirical joint type of a tuple of aligned sequences. Zero-probability
// letters tolerate at most the eps/|C| term.
inline bool strongly_typical(const std::vector<const Seq*>& seqs,
                             const std::vector<std::size_t>& sizes, const std::vector<double>& q,
                             double eps) {
    if (seqs.empty() || seqs.size() != sizes.size())
        throw UsageError("strongly_typical: tuple arity mismatch");
    const std::size_t n = seqs.front()->size();
    for (const auto* s : seqs)
        if (s->size() != n) throw UsageError("strongly_typical: sequence lengths differ");
    std::vector<std::uint32_t> counts(q.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = 0;
        for (std::size_t v = 0; v < seqs.size(); ++v) {
            const std::uint8_t sym = (*seqs[v])[i];
            if (sym >= sizes[v]) throw UsageError("strongly_typical: symbol out of alphabet");
            cell = cell * sizes[v] + sym;
        }
        ++counts[cell];
    }
    const double slack_floor = eps / static_cast<double>(q.size());
    for (std::size_t c = 0; c < q.size(); ++c) {
        const double freq = static_cast<double>(counts[c]) / static_cast<double>(n);
        if (std::abs(freq - q[c]) > eps * q[c] + slack_floor) return false;
    }
    return true;
}

// The three-layer binned random code of the achievability scheme.
// v1 words are stored flat as [w0][w1][l] (l fastest), x2 words as [w0][w2].
struct Codebook {
    InnerAuxLaw law;
    std::size_t n = 0, m0 = 0, m1 = 0, m2 = 0, bin_size = 0;
    double eps_typ = 0.0;
    std::uint64_t seed = 0;
    std::vector<Seq> u_words;
    std::vector<Seq> v1_words;
    std::vector<Seq> x2_words;

    const Seq& u_word(std::size_t w0) const {
        if (w0 >= m0) throw UsageError("Codebook: w0 out of range");
        return u_words[w0];
    }
    const Seq& v1_word(std::size_t w0, std::size_t w1, std::size_t l) const {
        if (w0 >= m0 || w1 >= m1 || l >= bin_size)
            throw UsageError("Codebook: (w0,w1,l) out of range");
        return v1_words[(w0 * m1 + w1) * bin_size + l];
    }
    const Seq& x2_word(std::size_t w0, std::size_t w2) const {
        if (w0 >= m0 || w2 >= m2) throw UsageError("Codebook: (w0,w2) out of range");
        return x2_words[w0 * m2 + w2];
    }
};

namespace sim_detail {

inline Seq draw_root_typical(const Pmf& pmf, std::size_t n, double eps, Rng& rng,
                             std::size_t cap, const char* layer) {
    std::vector<std::size_t> sizes{pmf.support_size()};
    for (std::size_t attempt = 0; attempt < cap; ++attempt) {
        Seq s(n);
        for (auto& sym : s) sym = static_cast<std::uint8_t>(rng.sample(pmf.probs()));
        if (strongly_typical({&s}, sizes, pmf.probs(), eps)) return s;
    }
    throw GenerationError(std::string("codebook generation: layer '") + layer +
                          "' failed typicality after attempt cap (law too peaked for eps at this n)");
}

inline Seq draw_child_typical(const Seq& parent, const Pmf& parent_pmf, const ConditionalPmf& cond,
                              std::size_t n, double eps, Rng& rng, std::size_t cap,
                              const char* layer) {
    const std::size_t pa = parent_pmf.support_size();
    const std::size_t ca = cond.out_size();
    std::vector<double> q(pa * ca);
    for (std::size_t a = 0; a < pa; ++a)
        for (std::size_t b = 0; b < ca; ++b) q[a * ca + b] = parent_pmf[a] * cond.prob(a, b);
    std::vector<std::size_t> sizes{pa, ca};
    for (std::size_t attempt = 0; attempt < cap; ++attempt) {
        Seq s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = static_cast<std::uint8_t>(rng.sample(cond.row(parent[i]).probs()));
        if (strongly_typical({&parent, &s}, sizes, q, eps)) return s;
    }
    throw GenerationError(std::string("codebook generation: layer '") + layer +
                          "' failed typicality after attempt cap (law too peaked for eps at this n)");
}

}  // namespace sim_detail

// Draws every layer i.i.d. from the generating law with rejection until
// eps-typical. Per-word generators are derived from (seed, layer, index), so
// the codebook is identical under any evaluation order.
inline Codebook generate_codebook(const InnerAuxLaw& law, const DmChannel& ch,
                                  const SimConfig& cfg) {
    cfg.validate();
    check_inner_chain(law, ch);
    Codebook cb{law,    cfg.n,       cfg.m0,   cfg.m1, cfg.m2,
                cfg.bin_size, cfg.eps_typ, cfg.seed, {},     {},    {}};

    cb.u_words.reserve(cfg.m0);
    for (std::size_t w0 = 0; w0 < cfg.m0; ++w0) {
        Rng rng = derived_rng(cfg.seed, 0, w0);
        cb.u_words.push_back(
            sim_detail::draw_root_typical(law.p_u, cfg.n, cfg.eps_typ, rng, cfg.reject_cap, "u"));
    }
    cb.v1_words.reserve(cfg.m0 * cfg.m1 * cfg.bin_size);
    for (std::size_t w0 = 0; w0 < cfg.m0; ++w0)
        for (std::size_t w1 = 0; w1 < cfg.m1; ++w1)
            for (std::size_t l = 0; l < cfg.bin_size; ++l) {
                const std::uint64_t index = (w0 * cfg.m1 + w1) * cfg.bin_size + l;
                Rng rng = derived_rng(cfg.seed, 1, index);
                cb.v1_words.push_back(
                    sim_detail::draw_child_typical(cb.u_words[w0], law.p_u, law.p_v1_given_u,
                                                   cfg.n, cfg.eps_typ, rng, cfg.reject_cap, "v1"));
            }
    cb.x2_words.reserve(cfg.m0 * cfg.m2);
    for (std::size_t w0 = 0; w0 < cfg.m0; ++w0)
        for (std::size_t w2 = 0; w2 < cfg.m2; ++w2) {
            Rng rng = derived_rng(cfg.seed, 2, w0 * cfg.m2 + w2);
            cb.x2_words.push_back(
                sim_detail::draw_child_typical(cb.u_words[w0], law.p_u, law.p_x2_given_u, cfg.n,
                                               cfg.eps_typ, rng, cfg.reject_cap, "x2"));
        }
    return cb;
}

struct Encode1Result {
    Seq x1;
    std::size_t bin_index = 0;  // the l the stochastic encoder picked
};

// Stochastic encoder for transmitter 1: uniform bin index, then symbol-wise
// draw from p(x1|v1) along the selected bin word (no typicality filtering of
// the emitted x1 sequence).
inline Encode1Result encode1(const Codebook& cb, std::size_t w0, std::size_t w1,
                             std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t l = rng.next_index(cb.bin_size);
    const Seq& v1 = cb.v1_word(w0, w1, l);
    Encode1Result out;
    out.bin_index = l;
    out.x1.resize(cb.n);
    for (std::size_t i = 0; i < cb.n; ++i)
        out.x1[i] = static_cast<std::uint8_t>(rng.sample(cb.law.p_x1_given_v1.row(v1[i]).probs()));
    return out;
}

// Deterministic encoder for transmitter 2.
inline const Seq& encode2(const Codebook& cb, std::size_t w0, std::size_t w2) {
    return cb.x2_word(w0, w2);
}

// Memoryless channel use: per-symbol independent draw from p(y1,y2|x1,x2).
inline std::pair<Seq, Seq> transmit(const DmChannel& ch, const Seq& x1, const Seq& x2,
                                    std::uint64_t seed) {
    if (x1.size() != x2.size() || x1.empty())
        throw UsageError("transmit: input sequences must be equal length and non-empty");
    Rng rng(seed);
    const std::size_t ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<double> slice(ny1 * ny2);
    Seq y1(x1.size()), y2(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) {
        if (x1[i] >= ch.x1_size() || x2[i] >= ch.x2_size())
            throw UsageError("transmit: symbol outside channel input alphabet");
        for (std::size_t a = 0; a < ny1; ++a)
            for (std::size_t b = 0; b < ny2; ++b) slice[a * ny2 + b] = ch.prob(x1[i], x2[i], a, b);
        const std::size_t cell = rng.sample(slice);
        y1[i] = static_cast<std::uint8_t>(cell / ny2);
        y2[i] = static_cast<std::uint8_t>(cell % ny2);
    }
    return {std::move(y1), std::move(y2)};
}

enum class DecodeStatus { Decoded, NoHit, Ambiguous };

struct Decode1Result {
    DecodeStatus status = DecodeStatus::NoHit;
    std::size_t w0 = 0, w1 = 0, w2 = 0;
    bool ok() const { return status == DecodeStatus::Decoded; }
};

struct Decode2Result {
    DecodeStatus status = DecodeStatus::NoHit;
    std::size_t w0 = 0, w2 = 0;
    bool ok() const { return status == DecodeStatus::Decoded; }
};

namespace sim_detail {

inline Decode1Result decode1_scan(const Codebook& cb, const std::vector<double>& q,
                                  const std::vector<std::size_t>& sizes, const Seq& y1,
                                  double eps) {
    Decode1Result res;
    bool have = false;
    for (std::size_t w0 = 0; w0 < cb.m0; ++w0) {
        const Seq& u = cb.u_words[w0];
        for (std::size_t w1 = 0; w1 < cb.m1; ++w1)
            for (std::size_t w2 = 0; w2 < cb.m2; ++w2) {
                const Seq& x2 = cb.x2_word(w0, w2);
                bool hit = false;
                for (std::size_t l = 0; l < cb.bin_size && !hit; ++l)
                    hit = strongly_typical({&u, &cb.v1_word(w0, w1, l), &x2, &y1}, sizes, q, eps);
                if (!hit) continue;
                if (have && (res.w0 != w0 || res.w1 != w1 || res.w2 != w2)) {
                    res.status = DecodeStatus::Ambiguous;
                    return res;
                }
                if (!have) {
                    have = true;
                    res.w0 = w0;
                    res.w1 = w1;
                    res.w2 = w2;
                }
            }
    }
    res.status = have ? DecodeStatus::Decoded : DecodeStatus::NoHit;
    return res;
}

inline Decode2Result decode2_scan(const Codebook& cb, const std::vector<double>& q,
                                  const std::vector<std::size_t>& sizes, const Seq& y2,
                                  double eps) {
    Decode2Result res;
    bool have = false;
    for (std::size_t w0 = 0; w0 < cb.m0; ++w0)
        for (std::size_t w2 = 0; w2 < cb.m2; ++w2) {
            if (!strongly_typical({&cb.u_words[w0], &cb.x2_word(w0, w2), &y2}, sizes, q, eps))
                continue;
            if (have && (res.w0 != w0 || res.w2 != w2)) {
                res.status = DecodeStatus::Ambiguous;
                return res;
            }
            if (!have) {
                have = true;
                res.w0 = w0;
                res.w2 = w2;
            }
        }
    res.status = have ? DecodeStatus::Decoded : DecodeStatus::NoHit;
    return res;
}

}  // namespace sim_detail

// Receiver-1 joint-typicality decoder: unique (w0,w1,w2) with some l making
// (u,v1,x2,y1) typical under the scheme law; ambiguity and no-hit both fail.
inline Decode1Result decode1(const Codebook& cb, const DmChannel& ch, const Seq& y1, double eps) {
    const JointPmf q = build_inner_law(cb.law, ch).marginalize({"U", "V1", "X2", "Y1"});
    return sim_detail::decode1_scan(cb, q.probs(), q.sizes(), y1, eps);
}

// Receiver-2 decoder over (u, x2, y2) typicality.
inline Decode2Result decode2(const Codebook& cb, const DmChannel& ch, const Seq& y2, double eps) {
    const JointPmf q = build_inner_law(cb.law, ch).marginalize({"U", "X2", "Y2"});
    return sim_detail::decode2_scan(cb, q.probs(), q.sizes(), y2, eps);
}

struct SimReport {
    double pe_estimate = 0.0;
    double pe_ci = 0.0;  // 95% binomial half-width
    double equivocation_per_symbol = 0.0;
    double leakage = 0.0;
    double r1 = 0.0;
    std::string method;  // "exact" or "monte_carlo"
};

// Monte-Carlo estimate of the union error event, exactly as defined:
// common message wrong at either receiver, confidential message wrong at
// receiver 1, or w2 wrong at either receiver. Decode failures count as
// errors (uniqueness is part of the decoding rule).
inline SimReport run_trials(const Codebook& cb, const DmChannel& ch, const SimConfig& cfg) {
    if (cfg.trials < 1) throw UsageError("run_trials: trials must be >= 1");
    const JointPmf q1 = build_inner_law(cb.law, ch).marginalize({"U", "V1", "X2", "Y1"});
    const JointPmf q2 = build_inner_law(cb.law, ch).marginalize({"U", "X2", "Y2"});

    std::size_t errors = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng = derived_rng(cfg.seed, 10, t);
        const std::size_t w0 = rng.next_index(cb.m0);
        const std::size_t w1 = rng.next_index(cb.m1);
        const std::size_t w2 = rng.next_index(cb.m2);
        const Encode1Result enc = encode1(cb, w0, w1, rng.next_u64());
        const Seq& x2 = encode2(cb, w0, w2);
        const auto [y1, y2] = transmit(ch, enc.x1, x2, rng.next_u64());
        const Decode1Result d1 = sim_detail::decode1_scan(cb, q1.probs(), q1.sizes(), y1, cb.eps_typ);
        const Decode2Result d2 = sim_detail::decode2_scan(cb, q2.probs(), q2.sizes(), y2, cb.eps_typ);
        const bool err = !d1.ok() || !d2.ok() || d1.w0 != w0 || d2.w0 != w0 || d1.w1 != w1 ||
                         d1.w2 != w2 || d2.w2 != w2;
        if (err) ++errors;
    }
    SimReport rep;
    rep.pe_estimate = static_cast<double>(errors) / static_cast<double>(cfg.trials);
    rep.pe_ci =
        1.96 * std::sqrt(rep.pe_estimate * (1.0 - rep.pe_estimate) / static_cast<double>(cfg.trials));
    rep.r1 = std::log2(static_cast<double>(cb.m1)) / static_cast<double>(cb.n);
    return rep;
}

namespace sim_detail {

// Per-symbol eavesdropper kernel K[v1][x2][y2] = sum_x1 p(x1|v1) p(y2|x1,x2),
// marginalizing the stochastic encoder.
inline std::vector<double> eavesdropper_kernel(const InnerAuxLaw& law, const DmChannel& ch) {
    const std::size_t nv1 = law.v1_size(), nx2 = ch.x2_size(), ny2 = ch.y2_size();
    std::vector<double> k(nv1 * nx2 * ny2, 0.0);
    for (std::size_t v1 = 0; v1 < nv1; ++v1)
        for (std::size_t x1 = 0; x1 < ch.x1_size(); ++x1) {
            const double px1 = law.p_x1_given_v1.prob(v1, x1);
            if (px1 == 0.0) continue;
            for (std::size_t x2 = 0; x2 < nx2; ++x2)
                for (std::size_t y2 = 0; y2 < ny2; ++y2)
                    k[(v1 * nx2 + x2) * ny2 + y2] += px1 * ch.prob_y2(x1, x2, y2);
        }
    return k;
}

inline double seq_prob(const std::vector<double>& kernel, std::size_t nx2, std::size_t ny2,
                       const Seq& v1, const Seq& x2, const Seq& y2) {
    double p = 1.0;
    for (std::size_t i = 0; i < y2.size(); ++i)
        p *= kernel[(static_cast<std::size_t>(v1[i]) * nx2 + x2[i]) * ny2 + y2[i]];
    return p;
}

}  // namespace sim_detail

// Exact H(W1 | Y2^n)/n in bits for the fixed codebook, marginalizing the
// uniform bin choice and the symbol-wise stochastic encoder. Enumerates all
// y2 sequences; the work unit count |Y2|^n * m0*m1*m2*L must fit the budget.
inline double exact_equivocation(const Codebook& cb, const DmChannel& ch,
                                 std::uint64_t enum_budget = 10'000'000) {
    const double work = std::pow(static_cast<double>(ch.y2_size()), static_cast<double>(cb.n)) *
                        static_cast<double>(cb.m0) * static_cast<double>(cb.m1) *
                        static_cast<double>(cb.m2) * static_cast<double>(cb.bin_size);
    if (work > static_cast<double>(enum_budget))
        throw BudgetError("exact_equivocation: |Y2|^n * m0*m1*m2*L = " +
                          std::to_string(static_cast<std::uint64_t>(work)) + " exceeds budget " +
                          std::to_string(enum_budget) + "; use Monte-Carlo mode");

    const auto kernel = sim_detail::eavesdropper_kernel(cb.law, ch);
    const std::size_t nx2 = ch.x2_size(), ny2 = ch.y2_size();
    std::uint64_t y2_total = 1;
    for (std::size_t i = 0; i < cb.n; ++i) y2_total *= ny2;

    const double prior = 1.0 / static_cast<double>(cb.m0 * cb.m1 * cb.m2 * cb.bin_size);
    double h_w1_y2 = 0.0, h_y2 = 0.0;
    Seq y2(cb.n);
    std::vector<double> pw1(cb.m1);
    for (std::uint64_t flat = 0; flat < y2_total; ++flat) {
        std::uint64_t rest = flat;
        for (std::size_t i = cb.n; i-- > 0;) {
            y2[i] = static_cast<std::uint8_t>(rest % ny2);
            rest /= ny2;
        }
        std::fill(pw1.begin(), pw1.end(), 0.0);
        for (std::size_t w0 = 0; w0 < cb.m0; ++w0)
            for (std::size_t w2 = 0; w2 < cb.m2; ++w2) {
                const Seq& x2 = cb.x2_word(w0, w2);
                for (std::size_t w1 = 0; w1 < cb.m1; ++w1)
                    for (std::size_t l = 0; l < cb.bin_size; ++l)
                        pw1[w1] += prior * sim_detail::seq_prob(kernel, nx2, ny2,
                                                                cb.v1_word(w0, w1, l), x2, y2);
            }
        double py2 = 0.0;
        for (double p : pw1) {
            py2 += p;
            if (p > 0.0) h_w1_y2 -= p * std::log2(p);
        }
        if (py2 > 0.0) h_y2 -= py2 * std::log2(py2);
    }
    return (h_w1_y2 - h_y2) / static_cast<double>(cb.n);
}

// Monte-Carlo estimate of H(W1|Y2^n)/n: samples y2 from the scheme's
// generative model and averages the exact posterior entropy H(W1 | Y2^n=y2).
inline double monte_carlo_equivocation(const Codebook& cb, const DmChannel& ch,
                                       std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw UsageError("monte_carlo_equivocation: samples must be >= 1");
    const auto kernel = sim_detail::eavesdropper_kernel(cb.law, ch);
    const std::size_t nx2 = ch.x2_size(), ny2 = ch.y2_size();

    double acc = 0.0;
    std::vector<double> post(cb.m1);
    std::vector<double> slice(ny2);
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng = derived_rng(seed, 20, s);
        const std::size_t w0 = rng.next_index(cb.m0);
        const std::size_t w1 = rng.next_index(cb.m1);
        const std::size_t w2 = rng.next_index(cb.m2);
        const Encode1Result enc = encode1(cb, w0, w1, rng.next_u64());
        const Seq& x2 = encode2(cb, w0, w2);
        Seq y2(cb.n);
        for (std::size_t i = 0; i < cb.n; ++i) {
            for (std::size_t b = 0; b < ny2; ++b) slice[b] = ch.prob_y2(enc.x1[i], x2[i], b);
            y2[i] = static_cast<std::uint8_t>(rng.sample(slice));
        }
        std::fill(post.begin(), post.end(), 0.0);
        for (std::size_t w0p = 0; w0p < cb.m0; ++w0p)
            for (std::size_t w2p = 0; w2p < cb.m2; ++w2p) {
                const Seq& x2p = cb.x2_word(w0p, w2p);
                for (std::size_t w1p = 0; w1p < cb.m1; ++w1p)
                    for (std::size_t l = 0; l < cb.bin_size; ++l)
                        post[w1p] += sim_detail::seq_prob(kernel, nx2, ny2,
                                                          cb.v1_word(w0p, w1p, l), x2p, y2);
            }
        double total = 0.0;
        for (double p : post) total += p;
        double h = 0.0;
        for (double p : post)
            if (p > 0.0) {
                const double pn = p / total;
                h -= pn * std::log2(pn);
            }
        acc += h;
    }
    return acc / static_cast<double>(samples) / static_cast<double>(cb.n);
}

// Bin size realizing the binning rate from the generating law:
// L = round(2^{n I(V1;Y2|X2,U)}), at least 1.
inline std::size_t auto_bin_size(const InnerAuxLaw& law, const DmChannel& ch, std::size_t n) {
    const JointPmf joint = build_inner_law(law, ch).marginalize({"U", "V1", "X2", "Y2"});
    const double i = group_mutual_information(joint, {"V1"}, {"Y2"}, {"X2", "U"});
    const long long l = std::llround(std::exp2(static_cast<double>(n) * i));
    return l < 1 ? 1 : static_cast<std::size_t>(l);
}

struct SimulationOptions {
    bool monte_carlo = false;
    std::size_t mc_samples = 0;  // 0: reuse cfg.trials
};

// Full pipeline: generate, measure error frequency, measure equivocation.
inline SimReport run_simulation(const InnerAuxLaw& law, const DmChannel& ch, const SimConfig& cfg,
                                const SimulationOptions& opt = {}) {
    const Codebook cb = generate_codebook(law, ch, cfg);
    SimReport rep = run_trials(cb, ch, cfg);
    if (opt.monte_carlo) {
        const std::size_t samples = opt.mc_samples > 0 ? opt.mc_samples : cfg.trials;
        rep.equivocation_per_symbol = monte_carlo_equivocation(cb, ch, samples, cfg.seed);
        rep.method = "monte_carlo";
    } else {
        rep.equivocation_per_symbol = exact_equivocation(cb, ch, cfg.enum_budget);
        rep.method = "exact";
    }
    rep.leakage = rep.r1 - rep.equivocation_per_symbol;
    return rep;
}

}  // namespace cmaccm
