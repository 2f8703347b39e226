#ifndef WORDRANK_SELFTEST_HPP
#define WORDRANK_SELFTEST_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wordrank/asymptotics.hpp"
#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/enumerate.hpp"
#include "wordrank/graph.hpp"
#include "wordrank/io.hpp"
#include "wordrank/random_chain.hpp"
#include "wordrank/regime.hpp"
#include "wordrank/spectral.hpp"

namespace wordrank {

struct SelftestOptions {
    std::uint64_t seed = 1;
    std::size_t chains = 100;
    // Test hook: deliberately corrupts one comparison so the failure path
    // itself can be exercised.
    bool inject_fault = false;
};

struct SelftestReport {
    struct Suite {
        std::string name;
        std::size_t passed = 0;
        std::size_t failed = 0;
    };
    std::vector<Suite> suites;
    std::uint64_t seed = 0;
    std::string first_failure;        // property + detail
    std::string counterexample_json;  // offending chain, if any

    std::size_t total_failed() const {
        std::size_t f = 0;
        for (const auto& s : suites) f += s.failed;
        return f;
    }
};

// Property suites over seeded random chains: spectral monotonicity and
// bracketing, the exponent/two-cycles equivalence, agreement of the
// structural positive-eigenvector criterion with direct construction,
// frontier-versus-exhaustive enumeration, measure completeness, and the
// regime decision tree.
inline SelftestReport run_selftest(const SelftestOptions& st, const AnalysisOptions& opts = {}) {
    SelftestReport report;
    report.seed = st.seed;
    auto& suites = report.suites;
    suites.assign({{"spectral-monotonicity"},
                   {"spectral-bracketing"},
                   {"beta-iff-two-cycles"},
                   {"positive-eigenvector-agreement"},
                   {"enumeration-oracle"},
                   {"measure-completeness"},
                   {"regime-decision-tree"}});
    auto& mono = suites[0];
    auto& bracket = suites[1];
    auto& beta_iff = suites[2];
    auto& prop_agree = suites[3];
    auto& oracle = suites[4];
    auto& measure = suites[5];
    auto& decision = suites[6];

    std::mt19937_64 eng(st.seed);

    auto fail = [&](SelftestReport::Suite& suite, const ChainSpec& chain,
                    const std::string& what) {
        ++suite.failed;
        if (report.first_failure.empty()) {
            report.first_failure = suite.name + ": " + what;
            report.counterexample_json = chain_to_json(chain).dump();
        }
    };

    for (std::size_t trial = 0; trial < st.chains; ++trial) {
        ChainSpec chain = randomchain::random_chain(eng);
        Matrix p = chain.interior();
        DirectedGraph g = interior_graph(chain);
        bool has_cycle = strongly_connected_components(g).has_cycle();
        bool two_cycles = vertex_on_two_cycles(g).has_value();

        // Monotonicity of the powered radius.
        {
            double psi1 = randomchain::uniform01(eng);
            double psi2 = psi1 + (1.0 - psi1) * randomchain::uniform01(eng);
            double r1 = spectral_radius_value(powered(p, psi1).entries, opts);
            double r2 = spectral_radius_value(powered(p, psi2).entries, opts);
            if (r1 >= r2 - 1e-12)
                ++mono.passed;
            else
                fail(mono, chain,
                     "r(" + std::to_string(psi1) + ") = " + std::to_string(r1) + " < r(" +
                         std::to_string(psi2) + ") = " + std::to_string(r2));
        }

        // Bracketing r(1) < 1 <= r(0) for a non-nilpotent interior.
        if (has_cycle) {
            double r1 = spectral_radius_value(p, opts);
            double r0 = spectral_radius_value(powered(p, 0.0).entries, opts);
            if (r1 < 1.0 && r0 >= 1.0 - 1e-12)
                ++bracket.passed;
            else
                fail(bracket, chain,
                     "r(1) = " + std::to_string(r1) + ", r(0) = " + std::to_string(r0));
        }

        // beta > 0 exactly when two simple cycles share a vertex.
        double beta = 0.0;
        if (has_cycle) {
            beta = solve_beta(chain, opts).beta;
            if ((beta > 0.0) == two_cycles)
                ++beta_iff.passed;
            else
                fail(beta_iff, chain,
                     "beta = " + std::to_string(beta) + " but shared-cycle vertex " +
                         (two_cycles ? "exists" : "does not exist"));
        }

        // Structural positive-eigenvector verdict vs direct propagation.
        if (has_cycle && beta > 0.0) {
            bool structural = positive_left_eigenvector(chain, beta, opts).exists;
            bool direct = direct_positive_left_eigenvector(chain, beta, opts).has_value();
            if (structural == direct)
                ++prop_agree.passed;
            else
                fail(prop_agree, chain,
                     std::string("structural says ") + (structural ? "yes" : "no") +
                         ", direct construction says " + (direct ? "yes" : "no"));
        }

        // Frontier enumeration against the exhaustive list, on the prefix
        // the truncated list provably covers.
        {
            const std::size_t max_len = 14;
            std::uint64_t count = count_words_up_to_length(chain, max_len);
            if (count <= 60000) {
                auto full = brute_force_words(chain, max_len, opts);
                // Omitted longer words tie the length-(max_len+1) prefix
                // bound at best and then lose the shorter-first tie-break.
                double bound = max_prefix_log_prob(chain, max_len + 1);
                std::int64_t qb = detail::quantize_log(bound, opts.tie_band);
                std::uint64_t provable = 0;
                for (const auto& w : full) {
                    if (detail::quantize_log(w.log_prob, opts.tie_band) >= qb)
                        ++provable;
                    else
                        break;
                }
                std::uint64_t compare = std::min<std::uint64_t>(200, provable);
                auto got = top_words(chain, compare, opts);
                bool same = got.size() == compare;
                for (std::size_t i = 0; same && i < got.size(); ++i)
                    same = got[i].states == full[i].states && got[i].prob == full[i].prob &&
                           got[i].log_prob == full[i].log_prob;
                if (same)
                    ++oracle.passed;
                else
                    fail(oracle, chain, "ranked lists differ within the first " +
                                            std::to_string(compare) + " words");
            }
        }

        // Partial sums of emitted probabilities stay below 1 and the
        // emission is monotone.
        {
            double prev_log = 0.0;
            bool monotone = true;
            bool empty_word_emitted = false;
            std::uint64_t seen = 0;
            auto stats = enumerate_words(
                chain, 400,
                [&](const RankedWord& w) {
                    if (seen++ > 0 && w.log_prob > prev_log + opts.tie_band) monotone = false;
                    prev_log = w.log_prob;
                    if (w.states.size() == 1) empty_word_emitted = true;
                    return true;
                },
                opts);
            double total = stats.probability_sum + (empty_word_emitted ? 0.0 : chain.a0());
            if (monotone && total <= 1.0 + 1e-9)
                ++measure.passed;
            else
                fail(measure, chain,
                     monotone ? "partial sum " + std::to_string(total) + " exceeds 1"
                              : "emission not monotone");
        }

        // Decision tree: the verdict must match the structural predicates
        // of the reachable interior graph, with the right parameters set.
        {
            RegimeReport r = classify(chain, opts);
            auto restricted = detail::restrict_to_reachable(chain);
            DirectedGraph rg = interior_graph(restricted.chain);
            Condensation rcond = strongly_connected_components(rg);
            Regime expected;
            if (!rcond.has_cycle())
                expected = Regime::Finitary;
            else if (vertex_on_two_cycles(rg))
                expected = Regime::Power;
            else if (paths_touch_at_most_one_cycle(rg, rcond))
                expected = Regime::Exponential;
            else
                expected = Regime::Intermediate;
            if (st.inject_fault && trial == 0)
                expected = expected == Regime::Finitary ? Regime::Power : Regime::Finitary;

            bool ok = r.regime == expected;
            if (ok && r.regime == Regime::Power)
                ok = r.beta && *r.beta > 0.0 && *r.beta < 1.0 && r.exact_order.has_value();
            if (ok && r.regime == Regime::Exponential)
                ok = r.nu && *r.nu > 0.0 && r.alpha && *r.alpha > 0.0 && *r.alpha < 1.0;
            if (ok && r.regime == Regime::Intermediate)
                ok = r.alpha && *r.alpha > 0.0 && *r.alpha < 1.0;
            if (ok)
                ++decision.passed;
            else
                fail(decision, chain,
                     std::string("classified ") + regime_name(r.regime) + ", predicates say " +
                         regime_name(expected));
        }
    }
    return report;
}

}  // namespace wordrank

#endif  // WORDRANK_SELFTEST_HPP
