#ifndef WORDRANK_ASYMPTOTICS_HPP
#define WORDRANK_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/enumerate.hpp"
#include "wordrank/graph.hpp"

namespace wordrank {

// One point of the ranked series. Log-probabilities are the primary value:
// plain products underflow for words a few thousand states long, which the
// exponential regime reaches quickly.
struct SeriesPoint {
    std::uint64_t t = 0;
    double p = 0.0;
    double log_p = 0.0;
};

inline std::vector<SeriesPoint> enumerate_series(const ChainSpec& spec, std::uint64_t top,
                                                 const AnalysisOptions& opts = {}) {
    std::vector<SeriesPoint> series;
    series.reserve(top < (1u << 20) ? top : (1u << 20));
    enumerate_words(
        spec, top,
        [&series](const RankedWord& w) {
            series.push_back({w.rank, w.prob, w.log_prob});
            return true;
        },
        opts);
    return series;
}

// Exponential decay parameters of the ranked list: the rate is assembled
// cycle by cycle, each simple cycle contributing k(c) / (-ln weight(c))
// to 1/nu, where k(c) counts the nonrepeating words meeting that cycle.
struct RateParameters {
    double nu = 0.0;
    double inv_nu = 0.0;  // the sum of the contributions, exactly
    double alpha = 0.0;   // heaviest simple-cycle weight

    struct CycleEntry {
        std::vector<std::size_t> states;
        double weight = 0.0;
        std::uint64_t k = 0;
        double contribution = 0.0;  // -k / ln weight
    };
    std::vector<CycleEntry> table;
};

inline RateParameters compute_nu(const CycleCatalog& catalog,
                                 const std::vector<std::uint64_t>& k_values) {
    if (catalog.cycles.size() != k_values.size())
        throw ValidationError("need one k value per cycle");
    if (catalog.cycles.empty())
        throw ValidationError("exponential rate undefined without cycles");

    RateParameters out;
    for (std::size_t i = 0; i < catalog.cycles.size(); ++i) {
        RateParameters::CycleEntry e;
        e.states.assign(catalog.cycles[i].vertices.begin(), catalog.cycles[i].vertices.end());
        e.weight = catalog.cycles[i].weight;
        e.k = k_values[i];
        if (!(e.weight > 0.0) || e.weight >= 1.0)
            throw ValidationError("cycle weight outside (0, 1)");
        e.contribution = -static_cast<double>(e.k) / std::log(e.weight);
        out.inv_nu += e.contribution;
        out.alpha = std::max(out.alpha, e.weight);
        out.table.push_back(std::move(e));
    }
    if (!(out.inv_nu > 0.0))
        throw ValidationError("no nonrepeating word meets any cycle; rate undefined");
    out.nu = 1.0 / out.inv_nu;
    return out;
}

namespace detail {

struct ReachableChain {
    ChainSpec chain;
    std::vector<std::size_t> to_original;  // index 0 unused; maps restricted state -> original
    std::vector<std::size_t> dropped;      // original states that were unreachable
};

// The part of the chain reachable from the support of the initial
// distribution; only it contributes words, cycles, or rate parameters.
inline ReachableChain restrict_to_reachable(const ChainSpec& spec) {
    auto reached = detail::reachable_states(spec, spec.support());
    ReachableChain out;
    out.to_original.push_back(0);
    std::vector<std::size_t> to_new(spec.n + 1, 0);
    for (std::size_t i = 1; i <= spec.n; ++i) {
        if (reached[i]) {
            to_new[i] = out.to_original.size();
            out.to_original.push_back(i);
        } else {
            out.dropped.push_back(i);
        }
    }
    std::size_t m = out.to_original.size() - 1;
    out.chain.n = m;
    out.chain.p0 = Matrix(m + 1, m + 1, 0.0);
    out.chain.p0(0, 0) = 1.0;
    out.chain.initial.assign(m, 0.0);
    for (std::size_t i = 1; i <= spec.n; ++i) {
        if (!reached[i]) continue;
        out.chain.initial[to_new[i] - 1] = spec.initial[i - 1];
        out.chain.p0(to_new[i], 0) = spec.p0(i, 0);
        for (std::size_t j = 1; j <= spec.n; ++j)
            if (reached[j]) out.chain.p0(to_new[i], to_new[j]) = spec.p0(i, j);
    }
    if (!spec.labels.empty()) {
        out.chain.labels.resize(m + 1);
        for (std::size_t i = 0; i <= m; ++i)
            out.chain.labels[i] = spec.labels[out.to_original[i]];
    }
    return out;
}

// Rate parameters of a chain already known (and required) to be in the
// exponential regime, with cycle states reported in the chain's own
// indexing.
inline RateParameters exponential_parameters(const ChainSpec& chain,
                                             const AnalysisOptions& opts) {
    CycleCatalog catalog = simple_cycles(chain, opts.cycle_cap);
    auto words = words_with_nonrepeating_states(chain, opts);
    std::vector<std::uint64_t> ks;
    ks.reserve(catalog.cycles.size());
    for (const SimpleCycle& c : catalog.cycles) ks.push_back(k_of_cycle(words, c.vertices));
    return compute_nu(catalog, ks);
}

}  // namespace detail

// Verifies the chain decays exponentially (cycles exist, no vertex lies on
// two cycles, and no walk can meet two cycles) over its reachable part,
// then evaluates the rate formula there. Cycle states in the table are
// reported in the original indexing.
inline RateParameters compute_nu(const ChainSpec& spec, const AnalysisOptions& opts = {}) {
    auto report = validate_chain(spec, opts);
    if (!report.ok())
        throw ValidationError("invalid chain: " + report.issues.front().message);

    auto restricted = detail::restrict_to_reachable(spec);
    DirectedGraph g = interior_graph(restricted.chain);
    Condensation cond = strongly_connected_components(g);
    if (!cond.has_cycle())
        throw ValidationError("regime mismatch: the reachable interior graph is acyclic");
    if (vertex_on_two_cycles(g))
        throw ValidationError(
            "regime mismatch: a vertex lies on two simple cycles (power regime)");
    if (!paths_touch_at_most_one_cycle(g, cond))
        throw ValidationError(
            "regime mismatch: a walk can meet two cycles (super-polynomial regime)");

    RateParameters rate = detail::exponential_parameters(restricted.chain, opts);
    for (auto& entry : rate.table)
        for (auto& s : entry.states) s = restricted.to_original[s];
    return rate;
}

struct WindowPolicy {
    double trailing_fraction = 0.5;  // portion of [1, T] used, counted from the tail
    double ratio = 1.05;             // geometric sample spacing
    std::size_t min_points = 50;     // densify below this many samples
};

struct FitResult {
    enum class Model { Power, Exponential };
    Model model = Model::Power;
    double slope = 0.0;      // d ln p / d ln t   (power)  or  d ln p / d t  (exponential)
    double intercept = 0.0;
    std::uint64_t t_min = 0;
    std::uint64_t t_max = 0;
    double residual = 0.0;   // root-mean-square in log space
    std::size_t samples = 0;
};

namespace detail {

// Geometric subsample of the trailing window. Oscillation inside rank tie
// groups is expected; log-spaced samples weight each decade equally.
inline std::vector<std::size_t> window_samples(const std::vector<SeriesPoint>& series,
                                               const WindowPolicy& policy) {
    if (series.size() < 100)
        throw ValidationError("series too short to fit: need at least 100 points");
    const std::uint64_t t_max = series.back().t;
    std::uint64_t t_lo = static_cast<std::uint64_t>(
        static_cast<double>(t_max) * (1.0 - policy.trailing_fraction));
    t_lo = std::max<std::uint64_t>(t_lo, series.front().t);

    double span = static_cast<double>(t_max) / static_cast<double>(t_lo);
    double ratio = policy.ratio;
    std::size_t count_at_ratio =
        static_cast<std::size_t>(std::floor(std::log(span) / std::log(ratio))) + 1;
    std::size_t points = count_at_ratio;
    if (count_at_ratio < policy.min_points) {
        points = policy.min_points;
        ratio = std::pow(span, 1.0 / static_cast<double>(policy.min_points - 1));
    }

    std::vector<std::uint64_t> ts;
    for (std::size_t k = 0; k < points; ++k) {
        double target = static_cast<double>(t_lo) * std::pow(ratio, static_cast<double>(k));
        std::uint64_t t = static_cast<std::uint64_t>(std::llround(target));
        if (t > t_max) break;
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<std::size_t> idx;
    for (std::uint64_t t : ts) {
        auto it = std::lower_bound(series.begin(), series.end(), t,
                                   [](const SeriesPoint& sp, std::uint64_t v) { return sp.t < v; });
        if (it == series.end()) continue;
        std::size_t i = static_cast<std::size_t>(it - series.begin());
        if (idx.empty() || idx.back() != i) idx.push_back(i);
    }
    if (idx.size() < 10) throw ValidationError("degenerate fit window: fewer than 10 samples");
    return idx;
}

inline FitResult least_squares(const std::vector<SeriesPoint>& series,
                               const std::vector<std::size_t>& idx, FitResult::Model model) {
    std::vector<double> xs, ys;
    xs.reserve(idx.size());
    ys.reserve(idx.size());
    for (std::size_t i : idx) {
        xs.push_back(model == FitResult::Model::Power
                         ? std::log(static_cast<double>(series[i].t))
                         : static_cast<double>(series[i].t));
        ys.push_back(series[i].log_p);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx == 0.0) throw ValidationError("degenerate fit window: no spread in t");

    FitResult fit;
    fit.model = model;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.t_min = series[idx.front()].t;
    fit.t_max = series[idx.back()].t;
    fit.samples = idx.size();
    double ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(xs.size()));
    return fit;
}

}  // namespace detail

// Least-squares slope of ln p against ln t over the trailing window; the
// negated slope estimates the power-law exponent of the ranked list.
inline FitResult fit_power_exponent(const std::vector<SeriesPoint>& series,
                                    const WindowPolicy& policy = {}) {
    return detail::least_squares(series, detail::window_samples(series, policy),
                                 FitResult::Model::Power);
}

// Least-squares slope of ln p against t over the trailing window; the
// negated slope estimates the exponential decay rate.
inline FitResult fit_exponential_rate(const std::vector<SeriesPoint>& series,
                                      const WindowPolicy& policy = {}) {
    return detail::least_squares(series, detail::window_samples(series, policy),
                                 FitResult::Model::Exponential);
}

// Qualitative checks for the regime between power and exponential decay:
// t^lambda p(t) should eventually fall for every lambda, while
// ln(1/p(t))/sqrt(t) should stay bounded.
struct IntermediateDiagnostics {
    double sup_log_inv_p_over_sqrt_t = 0.0;
    double ratio_first = 0.0;
    double ratio_last = 0.0;
    bool t2_eventually_decreasing = false;
    bool t5_eventually_decreasing = false;
    std::string hint;  // "power-like", "exponential-like" or "intermediate-like"
};

inline IntermediateDiagnostics intermediate_diagnostics(const std::vector<SeriesPoint>& series) {
    WindowPolicy decade;
    decade.trailing_fraction = 0.9;  // [T/10, T]
    auto idx = detail::window_samples(series, decade);

    IntermediateDiagnostics d;
    auto decreasing_for = [&](double lambda) {
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            double a = lambda * std::log(static_cast<double>(series[idx[k]].t)) +
                       series[idx[k]].log_p;
            double b = lambda * std::log(static_cast<double>(series[idx[k + 1]].t)) +
                       series[idx[k + 1]].log_p;
            if (b > a + 1e-9) return false;
        }
        return true;
    };
    d.t2_eventually_decreasing = decreasing_for(2.0);
    d.t5_eventually_decreasing = decreasing_for(5.0);

    for (std::size_t k = 0; k < idx.size(); ++k) {
        double ratio = -series[idx[k]].log_p / std::sqrt(static_cast<double>(series[idx[k]].t));
        d.sup_log_inv_p_over_sqrt_t = std::max(d.sup_log_inv_p_over_sqrt_t, ratio);
        if (k == 0) d.ratio_first = ratio;
        if (k + 1 == idx.size()) d.ratio_last = ratio;
    }
    if (d.ratio_last <= 0.5 * d.ratio_first)
        d.hint = "power-like";
    else if (d.ratio_last >= 2.0 * d.ratio_first)
        d.hint = "exponential-like";
    else
        d.hint = "intermediate-like";
    return d;
}

// Writes the series as CSV with 17 significant digits, which round-trips
// doubles exactly. An optional theory column (for overlaying a fitted law)
// is appended when provided.
inline void emit_series(const std::vector<SeriesPoint>& series, std::ostream& os,
                        const std::function<double(std::uint64_t)>& theory = nullptr,
                        const std::string& theory_name = "theory_p") {
    os << "t,p,log_t,log_p";
    if (theory) os << ',' << theory_name;
    os << '\n';
    char buf[256];
    for (const SeriesPoint& sp : series) {
        double log_t = std::log(static_cast<double>(sp.t));
        if (theory)
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g\n",
                          static_cast<unsigned long long>(sp.t), sp.p, log_t, sp.log_p,
                          theory(sp.t));
        else
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g\n",
                          static_cast<unsigned long long>(sp.t), sp.p, log_t, sp.log_p);
        os << buf;
    }
    if (!os) throw IoError("failed to write series");
}

inline std::vector<SeriesPoint> read_series(std::istream& is) {
    std::vector<SeriesPoint> series;
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty series file");
    if (line.rfind("t,p,log_t,log_p", 0) != 0)
        throw IoError("unrecognized series header: " + line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        SeriesPoint sp;
        double log_t_ignored = 0.0;
        unsigned long long t = 0;
        if (std::sscanf(line.c_str(), "%llu,%lg,%lg,%lg", &t, &sp.p, &log_t_ignored,
                        &sp.log_p) != 4)
            throw IoError("malformed series row: " + line);
        sp.t = t;
        series.push_back(sp);
    }
    return series;
}

}  // namespace wordrank

#endif  // WORDRANK_ASYMPTOTICS_HPP
