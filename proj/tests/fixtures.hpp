#ifndef WORDRANK_TESTS_FIXTURES_HPP
#define WORDRANK_TESTS_FIXTURES_HPP

#include <cstdlib>
#include <string>

#include "wordrank/chain.hpp"

// The bundled three- and five-state reference chains, built in code so the
// unit tests do not depend on the files in chains/ (a separate test pins
// the files to these fixtures).
namespace fixtures {

using wordrank::ChainSpec;
using wordrank::Matrix;

inline ChainSpec three_state(double r10, double r11, double r12, double r20, double r21,
                             double r22, double a1, double a2) {
    ChainSpec s;
    s.n = 2;
    s.p0 = Matrix(3, 3, 0.0);
    s.p0(0, 0) = 1.0;
    s.p0(1, 0) = r10;
    s.p0(1, 1) = r11;
    s.p0(1, 2) = r12;
    s.p0(2, 0) = r20;
    s.p0(2, 1) = r21;
    s.p0(2, 2) = r22;
    s.initial = {a1, a2};
    return s;
}

// No cycle at all: three words, then silence.
inline ChainSpec acyclic() { return three_state(0.5, 0.0, 0.5, 1.0, 0.0, 0.0, 0.5, 0.5); }

// A self-loop and a two-cycle through the same vertex; the word count of
// length L grows like a Fibonacci number. Power regime.
inline ChainSpec golden_mean() { return three_state(0.0, 0.5, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5); }

// Two loops joined by a path: faster than any power, slower than any
// exponential.
inline ChainSpec cascaded_loops() { return three_state(0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 1.0, 0.0); }

// Two loops with no path between them: exponential decay.
inline ChainSpec parallel_loops() { return three_state(0.5, 0.5, 0.0, 0.5, 0.0, 0.5, 0.5, 0.5); }

// One two-cycle; exponential decay whose rate depends on the support of
// the initial distribution.
inline ChainSpec single_cycle(bool full_support = true) {
    return three_state(0.5, 0.0, 0.5, 0.5, 0.5, 0.0, full_support ? 0.5 : 1.0,
                       full_support ? 0.5 : 0.0);
}

// Two all-equal 2x2 blocks in series, every outgoing probability 1/3:
// power regime, but without the exact power order.
inline ChainSpec two_block_cascade() {
    ChainSpec s;
    s.n = 4;
    s.p0 = Matrix(5, 5, 0.0);
    s.p0(0, 0) = 1.0;
    const double t = 1.0 / 3.0;
    s.p0(1, 1) = t; s.p0(1, 2) = t; s.p0(1, 3) = t;
    s.p0(2, 1) = t; s.p0(2, 2) = t; s.p0(2, 4) = t;
    s.p0(3, 3) = t; s.p0(3, 4) = t; s.p0(3, 0) = t;
    s.p0(4, 3) = t; s.p0(4, 4) = t; s.p0(4, 0) = t;
    s.initial = {0.5, 0.5, 0.0, 0.0};
    return s;
}

inline ChainSpec single_state() {
    ChainSpec s;
    s.n = 1;
    s.p0 = Matrix(2, 2, 0.0);
    s.p0(0, 0) = 1.0;
    s.p0(1, 0) = 1.0;
    s.initial = {1.0};
    return s;
}

// One loop state: p(t) is exactly geometric.
inline ChainSpec loop_state(double stay = 0.5) {
    ChainSpec s;
    s.n = 1;
    s.p0 = Matrix(2, 2, 0.0);
    s.p0(0, 0) = 1.0;
    s.p0(1, 0) = 1.0 - stay;
    s.p0(1, 1) = stay;
    s.initial = {1.0};
    return s;
}

inline std::string chains_dir() {
    const char* env = std::getenv("WORDRANK_CHAINS");
    return env ? env : "chains";
}

}  // namespace fixtures

#endif  // WORDRANK_TESTS_FIXTURES_HPP
