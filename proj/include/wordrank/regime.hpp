#ifndef WORDRANK_REGIME_HPP
#define WORDRANK_REGIME_HPP

#include <optional>
#include <string>
#include <vector>

#include "wordrank/asymptotics.hpp"
#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/enumerate.hpp"
#include "wordrank/graph.hpp"
#include "wordrank/spectral.hpp"

namespace wordrank {

// Decay regimes of the ranked word-probability list p(t):
//   Finitary     - finitely many words (acyclic interior graph);
//   Power        - p(t) falls like t^(-1/beta), exactly so when no walk
//                  meets two components pinned at radius 1;
//   Intermediate - faster than every power, slower than every exponential;
//   Exponential  - p(t) falls like exp(-nu t).
enum class Regime { Finitary, Power, Intermediate, Exponential };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Finitary: return "Finitary";
        case Regime::Power: return "Power";
        case Regime::Intermediate: return "Intermediate";
        case Regime::Exponential: return "Exponential";
    }
    return "?";
}

struct RegimeReport {
    Regime regime = Regime::Finitary;

    std::optional<double> beta;        // Power
    std::optional<bool> exact_order;   // Power
    std::optional<double> nu;          // Exponential
    std::optional<double> alpha;       // Intermediate and Exponential
    std::optional<RateParameters> rate;

    // Evidence backing the verdict.
    std::optional<std::size_t> shared_cycle_vertex;            // original state index
    std::vector<std::vector<std::size_t>> critical_components; // states per critical block
    std::vector<std::size_t> max_weight_cycle;                 // states of the heaviest cycle
    std::vector<std::size_t> unreachable_states;               // ignored, with a warning
    std::vector<std::string> warnings;
};

// The regime decision tree. Only states reachable from the support of the
// initial distribution take part: unreachable states contribute no words,
// and the exponential rate genuinely depends on where the walk can start.
inline RegimeReport classify(const ChainSpec& spec, const AnalysisOptions& opts = {}) {
    auto validation = validate_chain(spec, opts);
    if (!validation.ok())
        throw ValidationError("invalid chain: " + validation.issues.front().message);

    auto restricted = detail::restrict_to_reachable(spec);
    const ChainSpec& chain = restricted.chain;

    RegimeReport report;
    report.unreachable_states = restricted.dropped;
    if (!restricted.dropped.empty())
        report.warnings.push_back(std::to_string(restricted.dropped.size()) +
                                  " state(s) unreachable from the initial distribution were "
                                  "ignored");

    DirectedGraph g = interior_graph(chain);
    Condensation cond = strongly_connected_components(g);

    if (!cond.has_cycle()) {
        report.regime = Regime::Finitary;
        return report;
    }

    if (auto witness = vertex_on_two_cycles(g)) {
        report.regime = Regime::Power;
        report.shared_cycle_vertex = restricted.to_original[*witness];
        BetaResult beta = solve_beta(chain, opts);
        report.beta = beta.beta;

        CriticalComponents cc = critical_components(chain, beta.beta, opts);
        for (std::size_t k : cc.critical) {
            std::vector<std::size_t> states;
            for (std::uint32_t v : cc.cond.members[k])
                states.push_back(restricted.to_original[v]);
            report.critical_components.push_back(std::move(states));
        }

        // Exact power order fails as soon as one walk can pass through two
        // critical components; in the quotient that is plain reachability
        // between members of the critical set.
        bool exact = true;
        std::vector<bool> is_critical(cc.cond.num_components, false);
        for (std::size_t k : cc.critical) is_critical[k] = true;
        for (std::size_t k : cc.critical) {
            std::vector<bool> seen(cc.cond.num_components, false);
            std::vector<std::uint32_t> stack(cc.cond.comp_adj[k].begin(),
                                             cc.cond.comp_adj[k].end());
            while (!stack.empty() && exact) {
                std::uint32_t c = stack.back();
                stack.pop_back();
                if (seen[c]) continue;
                seen[c] = true;
                if (is_critical[c]) exact = false;
                for (std::uint32_t next : cc.cond.comp_adj[c]) stack.push_back(next);
            }
            if (!exact) break;
        }
        report.exact_order = exact;
        return report;
    }

    // Each vertex lies on at most one simple cycle; the catalog is the set
    // of cycle components and has at most n entries.
    CycleCatalog catalog = simple_cycles(chain, opts.cycle_cap);
    const SimpleCycle* heaviest = catalog.heaviest();
    report.alpha = heaviest->weight;
    for (std::uint32_t v : heaviest->vertices)
        report.max_weight_cycle.push_back(restricted.to_original[v]);

    if (paths_touch_at_most_one_cycle(g, cond)) {
        report.regime = Regime::Exponential;
        RateParameters rate = detail::exponential_parameters(chain, opts);
        for (auto& entry : rate.table)
            for (auto& s : entry.states) s = restricted.to_original[s];
        report.nu = rate.nu;
        report.alpha = rate.alpha;
        report.rate = std::move(rate);
    } else {
        report.regime = Regime::Intermediate;
    }
    return report;
}

}  // namespace wordrank

#endif  // WORDRANK_REGIME_HPP
