#ifndef WORDRANK_CHAIN_HPP
#define WORDRANK_CHAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "wordrank/common.hpp"

namespace wordrank {

// An absorbing Markov chain over states {0, ..., n}. State 0 is the
// absorbing "space"; states 1..n are the transient letters. The full
// transition matrix includes row 0 (which must be (1, 0, ..., 0)); the
// initial distribution is stored for states 1..n only, the deficit
// 1 - sum(initial) being the probability of starting absorbed.
struct ChainSpec {
    std::size_t n = 0;
    Matrix p0;                         // (n+1) x (n+1)
    std::vector<double> initial;       // size n, entry i-1 is a_i
    std::vector<std::string> labels;   // optional, size n+1 (index 0 = absorbing)

    double a(std::size_t state) const { return state == 0 ? a0() : initial[state - 1]; }

    double a0() const {
        double s = std::accumulate(initial.begin(), initial.end(), 0.0);
        return std::max(0.0, 1.0 - s);
    }

    // Substochastic interior block P = (p_ij), i,j in 1..n.
    Matrix interior() const {
        Matrix p(n, n);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j)
                p(i - 1, j - 1) = p0(i, j);
        return p;
    }

    std::string label(std::size_t state) const {
        if (state < labels.size() && !labels[state].empty()) return labels[state];
        return "E" + std::to_string(state);
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 1; i <= n; ++i)
            if (initial[i - 1] > 0.0) s.push_back(i);
        return s;
    }
};

enum class IssueSeverity { Error, Warning };

struct ValidationIssue {
    IssueSeverity severity;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const {
        return std::none_of(issues.begin(), issues.end(), [](const ValidationIssue& v) {
            return v.severity == IssueSeverity::Error;
        });
    }
    std::size_t error_count() const {
        return static_cast<std::size_t>(
            std::count_if(issues.begin(), issues.end(), [](const ValidationIssue& v) {
                return v.severity == IssueSeverity::Error;
            }));
    }
    void error(std::string msg) { issues.push_back({IssueSeverity::Error, std::move(msg)}); }
    void warning(std::string msg) { issues.push_back({IssueSeverity::Warning, std::move(msg)}); }
};

namespace detail {

// Forward reachability over arcs p_ij > 0, restricted to rows the walk can
// actually leave from (row 0 is absorbing and never expanded).
inline std::vector<bool> reachable_states(const ChainSpec& spec,
                                          const std::vector<std::size_t>& sources) {
    std::vector<bool> seen(spec.n + 1, false);
    std::vector<std::size_t> stack;
    for (std::size_t s : sources)
        if (!seen[s]) { seen[s] = true; stack.push_back(s); }
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        if (u == 0) continue;
        for (std::size_t v = 0; v <= spec.n; ++v)
            if (spec.p0(u, v) > 0.0 && !seen[v]) { seen[v] = true; stack.push_back(v); }
    }
    return seen;
}

// States from which the absorbing state is reachable (backward search).
inline std::vector<bool> can_reach_absorbing(const ChainSpec& spec) {
    std::vector<bool> seen(spec.n + 1, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t u = 1; u <= spec.n; ++u)
            if (!seen[u] && spec.p0(u, v) > 0.0) { seen[u] = true; stack.push_back(u); }
    }
    return seen;
}

}  // namespace detail

// Checks the defining conditions of an absorbing chain: row stochasticity,
// the absorbing row, nonrecurrence of every transient state, and a valid
// initial distribution. Unreachability from the support of the initial
// distribution is reported as a warning only; analyses that depend on it
// restrict themselves to the reachable part.
inline ValidationReport validate_chain(const ChainSpec& spec, const AnalysisOptions& opts = {}) {
    if (spec.p0.rows() != spec.n + 1 || spec.p0.cols() != spec.n + 1)
        throw ValidationError("transition matrix must be (n+1) x (n+1), n = " +
                              std::to_string(spec.n));
    if (spec.initial.size() != spec.n)
        throw ValidationError("initial distribution must have n = " + std::to_string(spec.n) +
                              " entries");

    ValidationReport report;

    for (std::size_t i = 0; i <= spec.n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j <= spec.n; ++j) {
            double p = spec.p0(i, j);
            if (p < 0.0 || p > 1.0)
                report.error("entry p[" + std::to_string(i) + "][" + std::to_string(j) +
                             "] = " + std::to_string(p) + " outside [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > opts.row_sum_tol)
            report.error("row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                         ", not 1");
    }

    bool absorbing_ok = spec.p0(0, 0) == 1.0;
    for (std::size_t j = 1; j <= spec.n && absorbing_ok; ++j)
        if (spec.p0(0, j) != 0.0) absorbing_ok = false;
    if (!absorbing_ok) report.error("row 0 must be exactly (1, 0, ..., 0)");

    auto reaches0 = detail::can_reach_absorbing(spec);
    for (std::size_t i = 1; i <= spec.n; ++i)
        if (!reaches0[i])
            report.error("state " + spec.label(i) +
                         " cannot reach the absorbing state (recurrent)");

    double total = 0.0;
    for (std::size_t i = 1; i <= spec.n; ++i) {
        if (spec.initial[i - 1] < 0.0)
            report.error("initial probability of " + spec.label(i) + " is negative");
        total += spec.initial[i - 1];
    }
    if (total > 1.0 + opts.row_sum_tol)
        report.error("initial probabilities sum to " + std::to_string(total) + " > 1");

    auto reached = detail::reachable_states(spec, spec.support());
    for (std::size_t i = 1; i <= spec.n; ++i)
        if (!reached[i])
            report.warning("state " + spec.label(i) +
                           " is unreachable from the initial distribution");

    return report;
}

// Probability of a trajectory: the initial weight of its first state times
// the product of its arc probabilities, taken left to right. The lone
// sequence (0) is the empty word and yields the starting-absorbed mass a_0
// (possibly zero); any other sequence must be a genuine word.
inline double word_probability(const ChainSpec& spec, const std::vector<std::size_t>& states) {
    if (states.empty()) throw ValidationError("empty state sequence");
    for (std::size_t s : states)
        if (s > spec.n)
            throw ValidationError("state index " + std::to_string(s) + " out of range");
    if (states.back() != 0)
        throw ValidationError("word must end at the absorbing state " + spec.label(0));
    if (states.size() == 1) return spec.a0();

    for (std::size_t k = 0; k + 1 < states.size(); ++k)
        if (states[k] == 0)
            throw ValidationError("absorbing state at position " + std::to_string(k) +
                                  " before the end of the word");
    if (spec.a(states[0]) <= 0.0)
        throw ValidationError("initial state " + spec.label(states[0]) +
                              " has zero initial probability");

    double p = spec.a(states[0]);
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        double arc = spec.p0(states[k], states[k + 1]);
        if (arc <= 0.0)
            throw ValidationError("transition " + spec.label(states[k]) + " -> " +
                                  spec.label(states[k + 1]) + " has zero probability");
        p *= arc;
    }
    return p;
}

// Explicitly rescales every interior row to sum to 1. Validation never does
// this on its own; near-miss inputs must opt in.
inline ChainSpec normalized_rows(const ChainSpec& spec) {
    ChainSpec out = spec;
    for (std::size_t i = 1; i <= out.n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j <= out.n; ++j) sum += out.p0(i, j);
        if (sum <= 0.0)
            throw ValidationError("row " + std::to_string(i) + " has no mass to normalize");
        for (std::size_t j = 0; j <= out.n; ++j) out.p0(i, j) /= sum;
    }
    return out;
}

// Memoryless letter model: successive states are drawn independently with
// probabilities (p_0, ..., p_n), p_0 being the space. Every interior row of
// the resulting matrix equals the letter distribution, and the first letter
// is drawn from it conditioned on not being the space, so a_0 = 0.
inline ChainSpec from_letter_probabilities(const std::vector<double>& p,
                                           const AnalysisOptions& opts = {}) {
    if (p.empty()) throw ValidationError("letter distribution is empty");
    if (p[0] <= 0.0) throw ValidationError("space probability p_0 must be positive");
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > opts.row_sum_tol)
        throw ValidationError("letter probabilities sum to " + std::to_string(sum) + ", not 1");
    for (double v : p)
        if (v < 0.0) throw ValidationError("negative letter probability");

    ChainSpec spec;
    spec.n = p.size() - 1;
    spec.p0 = Matrix(spec.n + 1, spec.n + 1, 0.0);
    spec.p0(0, 0) = 1.0;
    for (std::size_t i = 1; i <= spec.n; ++i)
        for (std::size_t j = 0; j <= spec.n; ++j) spec.p0(i, j) = p[j];
    spec.initial.resize(spec.n);
    for (std::size_t i = 1; i <= spec.n; ++i) spec.initial[i - 1] = p[i] / (1.0 - p[0]);
    return spec;
}

// Disjoint union of chains sharing one absorbing state; the initial
// distribution is the weighted mixture of the parts' distributions.
inline ChainSpec compose_parallel(const std::vector<ChainSpec>& specs,
                                  const std::vector<double>& weights,
                                  const AnalysisOptions& opts = {}) {
    if (specs.size() < 2) throw ValidationError("parallel composition needs at least 2 chains");
    if (weights.size() != specs.size())
        throw ValidationError("need one weight per chain");
    double wsum = 0.0;
    for (double w : weights) {
        if (w <= 0.0) throw ValidationError("weights must be positive");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > opts.row_sum_tol)
        throw ValidationError("weights sum to " + std::to_string(wsum) + ", not 1");
    for (const ChainSpec& s : specs)
        if (!validate_chain(s, opts).ok())
            throw ValidationError("parallel composition of an invalid chain");

    ChainSpec out;
    out.n = 0;
    for (const ChainSpec& s : specs) out.n += s.n;
    out.p0 = Matrix(out.n + 1, out.n + 1, 0.0);
    out.p0(0, 0) = 1.0;
    out.initial.assign(out.n, 0.0);

    std::size_t offset = 0;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const ChainSpec& s = specs[k];
        for (std::size_t i = 1; i <= s.n; ++i) {
            out.p0(offset + i, 0) = s.p0(i, 0);
            for (std::size_t j = 1; j <= s.n; ++j) out.p0(offset + i, offset + j) = s.p0(i, j);
            out.initial[offset + i - 1] = weights[k] * s.initial[i - 1];
        }
        offset += s.n;
    }
    return out;
}

// One redirected absorption arc: `fraction` of state `from`'s absorption
// mass is rerouted to state `to` of the second chain.
struct Redirect {
    std::size_t from = 0;    // state of the first chain, 1..n1
    double fraction = 0.0;   // in (0, 1]
    std::size_t to = 0;      // state of the second chain, 1..n2
};

// Chains in series: part of the first chain's absorption mass feeds the
// second chain's states instead of the shared absorbing state. Every state
// of the second chain must be reachable from the redirected entry points.
inline ChainSpec compose_sequential(const ChainSpec& first, const ChainSpec& second,
                                    const std::vector<Redirect>& redirects,
                                    const AnalysisOptions& opts = {}) {
    if (redirects.empty())
        throw ValidationError("sequential composition requires at least one redirected arc");
    if (!validate_chain(first, opts).ok() || !validate_chain(second, opts).ok())
        throw ValidationError("sequential composition of an invalid chain");

    std::vector<double> redirected_mass(first.n + 1, 0.0);
    for (const Redirect& r : redirects) {
        if (r.from < 1 || r.from > first.n)
            throw ValidationError("redirect source out of range");
        if (r.to < 1 || r.to > second.n)
            throw ValidationError("redirect target out of range");
        if (r.fraction <= 0.0 || r.fraction > 1.0)
            throw ValidationError("redirect fraction must lie in (0, 1]");
        if (first.p0(r.from, 0) <= 0.0)
            throw ValidationError("state " + first.label(r.from) +
                                  " has no absorption mass to redirect");
        redirected_mass[r.from] += r.fraction;
    }
    for (std::size_t i = 1; i <= first.n; ++i)
        if (redirected_mass[i] > 1.0 + opts.row_sum_tol)
            throw ValidationError("redirected fractions of state " + first.label(i) +
                                  " exceed 1");

    ChainSpec out;
    out.n = first.n + second.n;
    out.p0 = Matrix(out.n + 1, out.n + 1, 0.0);
    out.p0(0, 0) = 1.0;
    const std::size_t off = first.n;

    for (std::size_t i = 1; i <= first.n; ++i) {
        for (std::size_t j = 1; j <= first.n; ++j) out.p0(i, j) = first.p0(i, j);
        out.p0(i, 0) = first.p0(i, 0) * (1.0 - redirected_mass[i]);
    }
    for (const Redirect& r : redirects)
        out.p0(r.from, off + r.to) += first.p0(r.from, 0) * r.fraction;
    for (std::size_t i = 1; i <= second.n; ++i) {
        out.p0(off + i, 0) = second.p0(i, 0);
        for (std::size_t j = 1; j <= second.n; ++j) out.p0(off + i, off + j) = second.p0(i, j);
    }

    out.initial.assign(out.n, 0.0);
    for (std::size_t i = 1; i <= first.n; ++i) out.initial[i - 1] = first.initial[i - 1];

    // Reachability of the whole second chain through the redirected arcs.
    std::vector<bool> seen(second.n + 1, false);
    std::vector<std::size_t> stack;
    for (const Redirect& r : redirects)
        if (!seen[r.to]) { seen[r.to] = true; stack.push_back(r.to); }
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 1; v <= second.n; ++v)
            if (second.p0(u, v) > 0.0 && !seen[v]) { seen[v] = true; stack.push_back(v); }
    }
    for (std::size_t i = 1; i <= second.n; ++i)
        if (!seen[i])
            throw ValidationError("state " + second.label(i) +
                                  " of the second chain is unreachable through the redirects");

    return out;
}

}  // namespace wordrank

#endif  // WORDRANK_CHAIN_HPP
