#ifndef WORDRANK_RANDOM_CHAIN_HPP
#define WORDRANK_RANDOM_CHAIN_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"

namespace wordrank {

// Seeded generators for property testing. Draws go through the raw engine
// only (no distribution objects), so a seed reproduces the same chain on
// every standard library.
namespace randomchain {

inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline std::size_t below(std::mt19937_64& eng, std::size_t n) {
    return static_cast<std::size_t>(eng() % n);
}

struct GenOptions {
    std::size_t max_states = 6;
    bool sparse = false;  // at most 2 outgoing arcs per state, milder probabilities
};

// A valid absorbing chain: row-stochastic, absorbing row 0, every state
// able to reach 0. The initial distribution varies between full support,
// a single state, a random subset, and a deficit (a_0 > 0) variant.
inline ChainSpec random_chain(std::mt19937_64& eng, const GenOptions& gen = {}) {
    ChainSpec spec;
    spec.n = 1 + below(eng, gen.max_states);
    spec.p0 = Matrix(spec.n + 1, spec.n + 1, 0.0);
    spec.p0(0, 0) = 1.0;

    std::vector<std::size_t> targets(spec.n + 1);
    for (std::size_t i = 1; i <= spec.n; ++i) {
        std::size_t out = 1 + below(eng, gen.sparse ? 2 : 3);
        for (std::size_t k = 0; k <= spec.n; ++k) targets[k] = k;
        for (std::size_t k = spec.n + 1; k > 1; --k)
            std::swap(targets[k - 1], targets[below(eng, k)]);
        out = std::min(out, spec.n + 1);
        double sum = 0.0;
        for (std::size_t k = 0; k < out; ++k) {
            double w = 0.15 + 0.85 * uniform01(eng);
            spec.p0(i, targets[k]) = w;
            sum += w;
        }
        for (std::size_t j = 0; j <= spec.n; ++j) spec.p0(i, j) /= sum;
    }

    // Repair recurrence: every state must reach the absorbing state.
    for (;;) {
        std::vector<bool> reaches(spec.n + 1, false);
        reaches[0] = true;
        std::vector<std::size_t> stack{0};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t u = 1; u <= spec.n; ++u)
                if (!reaches[u] && spec.p0(u, v) > 0.0) {
                    reaches[u] = true;
                    stack.push_back(u);
                }
        }
        std::size_t bad = 0;
        for (std::size_t i = 1; i <= spec.n; ++i)
            if (!reaches[i]) { bad = i; break; }
        if (bad == 0) break;
        for (std::size_t j = 0; j <= spec.n; ++j) spec.p0(bad, j) *= 0.7;
        spec.p0(bad, 0) += 0.3;
    }

    spec.initial.assign(spec.n, 0.0);
    std::size_t mode = below(eng, 4);
    if (mode == 0 || spec.n == 1) {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i) {
            spec.initial[i] = 0.2 + uniform01(eng);
            sum += spec.initial[i];
        }
        for (double& v : spec.initial) v /= sum;
    } else if (mode == 1) {
        spec.initial[below(eng, spec.n)] = 1.0;
    } else if (mode == 2) {
        std::size_t picks = 1 + below(eng, spec.n);
        double sum = 0.0;
        for (std::size_t k = 0; k < picks; ++k) {
            std::size_t i = below(eng, spec.n);
            if (spec.initial[i] == 0.0) {
                spec.initial[i] = 0.2 + uniform01(eng);
                sum += spec.initial[i];
            }
        }
        for (double& v : spec.initial)
            if (v > 0.0) v /= sum;
    } else {
        // Deficit variant: the walk starts absorbed with probability 0.25.
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i) {
            spec.initial[i] = 0.2 + uniform01(eng);
            sum += spec.initial[i];
        }
        for (double& v : spec.initial) v *= 0.75 / sum;
    }
    return spec;
}

// A letter distribution (p_0, ..., p_n) with a comfortably positive space
// probability, for testing the memoryless construction.
inline std::vector<double> random_letter_distribution(std::mt19937_64& eng,
                                                      std::size_t max_letters = 6) {
    std::size_t n = 1 + below(eng, max_letters);
    std::vector<double> p(n + 1);
    p[0] = 0.1 + 0.5 * uniform01(eng);
    double rest = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        p[i] = 0.1 + uniform01(eng);
        rest += p[i];
    }
    for (std::size_t i = 1; i <= n; ++i) p[i] *= (1.0 - p[0]) / rest;
    return p;
}

}  // namespace randomchain

}  // namespace wordrank

#endif  // WORDRANK_RANDOM_CHAIN_HPP
