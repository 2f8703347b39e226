#ifndef WORDRANK_ENUMERATE_HPP
#define WORDRANK_ENUMERATE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"

namespace wordrank {

// One entry of the ranked list p(t).
struct RankedWord {
    std::uint64_t rank = 0;
    double prob = 0.0;
    double log_prob = 0.0;
    std::vector<std::size_t> states;  // ends with 0; (0) alone is the empty word

    std::size_t length() const { return states.empty() ? 0 : states.size() - 1; }
};

namespace detail {

// Log-probabilities that agree within the tie band are treated as equal and
// ordered by the deterministic tie-break instead. Quantizing to fixed cells
// keeps the comparison a strict weak ordering, which float-tolerance
// comparisons are not.
inline std::int64_t quantize_log(double logp, double band) {
    return static_cast<std::int64_t>(std::floor(logp / band));
}

// The canonical total order of the ranked list: nonincreasing probability,
// ties by shorter word first, then lexicographic state sequence.
inline bool ranked_before(double logp_a, const std::vector<std::size_t>& states_a,
                          double logp_b, const std::vector<std::size_t>& states_b,
                          double band) {
    std::int64_t qa = quantize_log(logp_a, band), qb = quantize_log(logp_b, band);
    if (qa != qb) return qa > qb;
    if (states_a.size() != states_b.size()) return states_a.size() < states_b.size();
    return states_a < states_b;
}

}  // namespace detail

struct EnumerationStats {
    std::uint64_t emitted = 0;
    std::uint64_t expansions = 0;   // frontier pops
    double probability_sum = 0.0;   // Kahan-compensated sum of emitted probabilities
    bool exhausted = false;         // the chain ran out of words before the limits
};

// Best-first enumeration of words in the canonical order. Prefixes live in
// a max-priority frontier keyed by the canonical order itself; since every
// extension multiplies by a factor <= 1, a popped entry can never be beaten
// by a descendant of anything still queued, so words leave the frontier in
// exact rank order. The sink receives each word (its buffers are reused
// between calls) and may stop the stream by returning false.
template <typename Sink>
EnumerationStats enumerate_words(const ChainSpec& spec, std::uint64_t top, Sink&& sink,
                                 const AnalysisOptions& opts = {}, double min_prob = 0.0) {
    struct PathNode {
        std::uint32_t parent;
        std::uint32_t state;
    };
    static constexpr std::uint32_t kNil = 0xffffffffu;

    struct Entry {
        double logp;
        std::uint32_t node;  // last path node; kNil for the empty word
        std::uint32_t len;   // number of non-absorbing states
        bool complete;
    };

    std::vector<PathNode> pool;

    auto materialize = [&pool](const Entry& e, std::vector<std::size_t>& out) {
        out.clear();
        for (std::uint32_t id = e.node; id != kNil; id = pool[id].parent)
            out.push_back(pool[id].state);
        std::reverse(out.begin(), out.end());
        if (e.complete) out.push_back(0);
    };

    const double band = opts.tie_band;
    auto entry_after = [&, band](const Entry& a, const Entry& b) {
        // True when a ranks strictly after b; the priority queue then pops
        // the first-ranking entry.
        std::int64_t qa = detail::quantize_log(a.logp, band);
        std::int64_t qb = detail::quantize_log(b.logp, band);
        if (qa != qb) return qa < qb;
        if (a.len != b.len) return a.len > b.len;
        static thread_local std::vector<std::size_t> sa, sb;
        materialize(a, sa);
        materialize(b, sb);
        return sb < sa;
    };

    std::priority_queue<Entry, std::vector<Entry>, decltype(entry_after)> frontier(entry_after);

    const double log_cut =
        min_prob > 0.0 ? std::log(min_prob) - 2.0 * band : -std::numeric_limits<double>::infinity();

    struct Arc {
        std::uint32_t to;
        double p;
        double log_p;
    };
    std::vector<std::vector<Arc>> arcs(spec.n + 1);
    for (std::size_t s = 1; s <= spec.n; ++s)
        for (std::size_t j = 0; j <= spec.n; ++j)
            if (spec.p0(s, j) > 0.0)
                arcs[s].push_back({static_cast<std::uint32_t>(j), spec.p0(s, j),
                                   std::log(spec.p0(s, j))});

    for (std::size_t i = 1; i <= spec.n; ++i)
        if (spec.initial[i - 1] > 0.0) {
            pool.push_back({kNil, static_cast<std::uint32_t>(i)});
            frontier.push({std::log(spec.initial[i - 1]),
                           static_cast<std::uint32_t>(pool.size() - 1), 1, false});
        }
    if (spec.a0() > 0.0) frontier.push({std::log(spec.a0()), kNil, 0, true});

    EnumerationStats stats;
    double kahan_c = 0.0;
    RankedWord rw;

    while (!frontier.empty() && stats.emitted < top) {
        Entry e = frontier.top();
        frontier.pop();
        if (++stats.expansions > opts.expansion_cap)
            throw CapError("enumeration expansion cap of " + std::to_string(opts.expansion_cap) +
                           " exceeded after " + std::to_string(stats.emitted) + " words");
        if (e.logp < log_cut) break;

        if (e.complete) {
            materialize(e, rw.states);
            rw.rank = stats.emitted + 1;
            rw.log_prob = e.logp;
            if (rw.states.size() == 1) {
                rw.prob = spec.a0();
            } else {
                double p = spec.a(rw.states[0]);
                for (std::size_t k = 0; k + 1 < rw.states.size(); ++k)
                    p *= spec.p0(rw.states[k], rw.states[k + 1]);
                rw.prob = p;
            }
            if (min_prob > 0.0 && rw.prob < min_prob) continue;
            ++stats.emitted;
            double yy = rw.prob - kahan_c;
            double tt = stats.probability_sum + yy;
            kahan_c = (tt - stats.probability_sum) - yy;
            stats.probability_sum = tt;
            if (!sink(static_cast<const RankedWord&>(rw))) return stats;
        } else {
            std::size_t s = pool[e.node].state;
            for (const Arc& arc : arcs[s]) {
                double lp = e.logp + arc.log_p;
                if (lp < log_cut) continue;
                if (arc.to == 0) {
                    frontier.push({lp, e.node, e.len, true});
                } else {
                    pool.push_back({e.node, arc.to});
                    frontier.push({lp, static_cast<std::uint32_t>(pool.size() - 1), e.len + 1,
                                   false});
                }
            }
        }
    }
    stats.exhausted = frontier.empty();
    return stats;
}

inline std::vector<RankedWord> top_words(const ChainSpec& spec, std::uint64_t top,
                                         const AnalysisOptions& opts = {},
                                         double min_prob = 0.0) {
    std::vector<RankedWord> out;
    enumerate_words(
        spec, top,
        [&out](const RankedWord& w) {
            out.push_back(w);
            return true;
        },
        opts, min_prob);
    return out;
}

// Exhaustive generation of every word of length at most max_length, sorted
// into the canonical order. Deliberately naive: this is the oracle the
// best-first enumerator is checked against, so it shares no frontier logic
// with it. Probabilities and log-probabilities accumulate left to right,
// exactly as the streaming path computes them.
inline std::vector<RankedWord> brute_force_words(const ChainSpec& spec, std::size_t max_length,
                                                 const AnalysisOptions& opts = {}) {
    struct Rec {
        std::uint64_t begin;
        std::uint32_t len;  // including the final 0
        double prob;
        double logp;
    };
    std::vector<Rec> recs;
    std::vector<std::uint32_t> arena;
    std::vector<std::size_t> cur;

    auto record = [&](double prob, double logp) {
        if (recs.size() >= opts.word_list_cap)
            throw CapError("brute-force word list exceeds cap of " +
                           std::to_string(opts.word_list_cap));
        Rec r;
        r.begin = arena.size();
        r.len = static_cast<std::uint32_t>(cur.size() + 1);
        r.prob = prob;
        r.logp = logp;
        for (std::size_t s : cur) arena.push_back(static_cast<std::uint32_t>(s));
        arena.push_back(0);
        recs.push_back(r);
    };

    std::function<void(std::size_t, double, double)> dfs = [&](std::size_t s, double prob,
                                                               double logp) {
        double exit_arc = spec.p0(s, 0);
        if (exit_arc > 0.0) record(prob * exit_arc, logp + std::log(exit_arc));
        if (cur.size() >= max_length) return;
        for (std::size_t j = 1; j <= spec.n; ++j) {
            double arc = spec.p0(s, j);
            if (arc <= 0.0) continue;
            cur.push_back(j);
            dfs(j, prob * arc, logp + std::log(arc));
            cur.pop_back();
        }
    };

    if (spec.a0() > 0.0) record(spec.a0(), std::log(spec.a0()));
    for (std::size_t i = 1; i <= spec.n && max_length >= 1; ++i) {
        if (spec.initial[i - 1] <= 0.0) continue;
        cur.assign(1, i);
        dfs(i, spec.initial[i - 1], std::log(spec.initial[i - 1]));
    }

    std::vector<std::size_t> order(recs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    const double band = opts.tie_band;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Rec& ra = recs[a];
        const Rec& rb = recs[b];
        std::int64_t qa = detail::quantize_log(ra.logp, band);
        std::int64_t qb = detail::quantize_log(rb.logp, band);
        if (qa != qb) return qa > qb;
        if (ra.len != rb.len) return ra.len < rb.len;
        return std::lexicographical_compare(arena.begin() + ra.begin,
                                            arena.begin() + ra.begin + ra.len,
                                            arena.begin() + rb.begin,
                                            arena.begin() + rb.begin + rb.len);
    });

    std::vector<RankedWord> out(order.size());
    for (std::size_t t = 0; t < order.size(); ++t) {
        const Rec& r = recs[order[t]];
        out[t].rank = t + 1;
        out[t].prob = r.prob;
        out[t].log_prob = r.logp;
        out[t].states.assign(arena.begin() + r.begin, arena.begin() + r.begin + r.len);
    }
    return out;
}

// Exact size of the ranked list at threshold q: the number of words whose
// probability is at least q. A prefix whose probability already dropped
// below q cannot recover (all remaining factors are <= 1), so the search
// prunes there; it terminates because every cycle of a valid chain has
// weight strictly below 1.
inline std::uint64_t count_words_with_probability_at_least(const ChainSpec& spec, double q,
                                                           const AnalysisOptions& opts = {}) {
    if (!(q > 0.0) || q > 1.0)
        throw ValidationError("threshold must lie in (0, 1]");

    struct Frame {
        std::size_t state;
        std::size_t next;
        double prob;
    };
    std::uint64_t count = spec.a0() >= q ? 1 : 0;
    std::uint64_t steps = 0;
    std::vector<Frame> stack;

    auto enter = [&](std::size_t s, double prob) {
        if (++steps > opts.expansion_cap)
            throw CapError("threshold count exceeded the expansion cap");
        double exit_arc = spec.p0(s, 0);
        if (exit_arc > 0.0 && prob * exit_arc >= q) ++count;
        stack.push_back({s, 1, prob});
    };

    for (std::size_t i = 1; i <= spec.n; ++i) {
        if (spec.initial[i - 1] < q) continue;
        enter(i, spec.initial[i - 1]);
        while (!stack.empty()) {
            // Re-borrow every round: enter() may reallocate the stack.
            std::size_t j = stack.back().next;
            if (j > spec.n) {
                stack.pop_back();
                continue;
            }
            ++stack.back().next;
            double child = stack.back().prob * spec.p0(stack.back().state, j);
            if (spec.p0(stack.back().state, j) > 0.0 && child >= q) enter(j, child);
        }
    }
    return count;
}

// All words that visit no state twice: the simple paths of the walk graph
// from the initial support to absorption.
inline std::vector<std::vector<std::size_t>> words_with_nonrepeating_states(
    const ChainSpec& spec, const AnalysisOptions& opts = {}) {
    std::vector<std::vector<std::size_t>> words;
    std::vector<bool> visited(spec.n + 1, false);
    std::vector<std::size_t> cur;

    std::function<void(std::size_t)> dfs = [&](std::size_t s) {
        if (spec.p0(s, 0) > 0.0) {
            if (words.size() >= opts.word_list_cap)
                throw CapError("nonrepeating word set exceeds cap of " +
                               std::to_string(opts.word_list_cap));
            std::vector<std::size_t> w = cur;
            w.push_back(0);
            words.push_back(std::move(w));
        }
        for (std::size_t j = 1; j <= spec.n; ++j) {
            if (visited[j] || spec.p0(s, j) <= 0.0) continue;
            visited[j] = true;
            cur.push_back(j);
            dfs(j);
            cur.pop_back();
            visited[j] = false;
        }
    };

    for (std::size_t i = 1; i <= spec.n; ++i) {
        if (spec.initial[i - 1] <= 0.0) continue;
        visited[i] = true;
        cur.assign(1, i);
        dfs(i);
        cur.clear();
        visited[i] = false;
    }
    return words;
}

// Number of words of length at most max_length, by dynamic programming
// over prefix counts. Saturates instead of overflowing.
inline std::uint64_t count_words_up_to_length(const ChainSpec& spec, std::size_t max_length) {
    std::uint64_t total = spec.a0() > 0.0 ? 1 : 0;
    std::vector<std::uint64_t> cur(spec.n + 1, 0), next(spec.n + 1, 0);
    for (std::size_t i = 1; i <= spec.n; ++i) cur[i] = spec.initial[i - 1] > 0.0 ? 1 : 0;
    for (std::size_t len = 1; len <= max_length; ++len) {
        for (std::size_t j = 1; j <= spec.n; ++j)
            if (cur[j] > 0 && spec.p0(j, 0) > 0.0) total = detail::sat_add(total, cur[j]);
        if (len == max_length) break;
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t i = 1; i <= spec.n; ++i) {
            if (cur[i] == 0) continue;
            for (std::size_t j = 1; j <= spec.n; ++j)
                if (spec.p0(i, j) > 0.0) next[j] = detail::sat_add(next[j], cur[i]);
        }
        cur.swap(next);
    }
    return total;
}

// Largest log-probability of any prefix with exactly `length` non-absorbing
// states. Every word longer than L is bounded by the value at L+1, which
// makes a length-truncated word list provably complete above that bound.
inline double max_prefix_log_prob(const ChainSpec& spec, std::size_t length) {
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> cur(spec.n + 1, ninf), next(spec.n + 1, ninf);
    for (std::size_t i = 1; i <= spec.n; ++i)
        if (spec.initial[i - 1] > 0.0) cur[i] = std::log(spec.initial[i - 1]);
    for (std::size_t len = 1; len < length; ++len) {
        std::fill(next.begin(), next.end(), ninf);
        for (std::size_t i = 1; i <= spec.n; ++i) {
            if (cur[i] == ninf) continue;
            for (std::size_t j = 1; j <= spec.n; ++j)
                if (spec.p0(i, j) > 0.0)
                    next[j] = std::max(next[j], cur[i] + std::log(spec.p0(i, j)));
        }
        cur.swap(next);
    }
    double best = ninf;
    for (std::size_t i = 1; i <= spec.n; ++i) best = std::max(best, cur[i]);
    return best;
}

// Number of nonrepeating words that pass through at least one vertex of
// the given cycle.
inline std::uint64_t k_of_cycle(const std::vector<std::vector<std::size_t>>& words,
                                const std::vector<std::uint32_t>& cycle_vertices) {
    std::uint64_t k = 0;
    for (const auto& w : words) {
        bool meets = false;
        for (std::size_t s : w) {
            if (s == 0) continue;
            if (std::find(cycle_vertices.begin(), cycle_vertices.end(),
                          static_cast<std::uint32_t>(s)) != cycle_vertices.end()) {
                meets = true;
                break;
            }
        }
        if (meets) ++k;
    }
    return k;
}

}  // namespace wordrank

#endif  // WORDRANK_ENUMERATE_HPP
