#ifndef WORDRANK_GRAPH_HPP
#define WORDRANK_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"

namespace wordrank {

// Directed graph whose arcs mirror the strictly positive entries of a
// transition matrix. Vertices are matrix indices.
struct DirectedGraph {
    std::size_t num_vertices = 0;
    std::vector<std::vector<std::uint32_t>> adj;  // targets, kept sorted

    static DirectedGraph from_positive_entries(const Matrix& m) {
        DirectedGraph g;
        g.num_vertices = m.rows();
        g.adj.resize(g.num_vertices);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(i, j) > 0.0) g.adj[i].push_back(static_cast<std::uint32_t>(j));
        return g;
    }

    std::size_t num_arcs() const {
        std::size_t a = 0;
        for (const auto& row : adj) a += row.size();
        return a;
    }
};

// The walk graph over all states {0..n}. The trivial self-loop of the
// absorbing state is omitted; it never carries information.
inline DirectedGraph transition_graph(const ChainSpec& spec) {
    DirectedGraph g;
    g.num_vertices = spec.n + 1;
    g.adj.resize(g.num_vertices);
    for (std::size_t i = 1; i <= spec.n; ++i)
        for (std::size_t j = 0; j <= spec.n; ++j)
            if (spec.p0(i, j) > 0.0) g.adj[i].push_back(static_cast<std::uint32_t>(j));
    return g;
}

// The subgraph generated by the transient states: same vertex set, arcs
// among states 1..n only. This is the graph whose cycle structure decides
// the decay regime.
inline DirectedGraph interior_graph(const ChainSpec& spec) {
    DirectedGraph g;
    g.num_vertices = spec.n + 1;
    g.adj.resize(g.num_vertices);
    for (std::size_t i = 1; i <= spec.n; ++i)
        for (std::size_t j = 1; j <= spec.n; ++j)
            if (spec.p0(i, j) > 0.0) g.adj[i].push_back(static_cast<std::uint32_t>(j));
    return g;
}

enum class ComponentKind {
    Trivial,  // single vertex, no self-loop: no cycle at all
    Cycle,    // the component is exactly one simple cycle
    Complex,  // some vertex lies on two different simple cycles
};

// Strongly connected components plus the induced acyclic quotient.
// Component ids are assigned in reverse topological order: every arc of
// the quotient goes from a higher id to a lower one.
struct Condensation {
    std::size_t num_components = 0;
    std::vector<std::int32_t> component;               // per vertex
    std::vector<std::vector<std::uint32_t>> members;   // per component, sorted
    std::vector<std::vector<std::uint32_t>> comp_adj;  // quotient arcs, deduped, no self-arcs
    std::vector<std::uint32_t> internal_arcs;          // arcs inside each component
    std::vector<ComponentKind> kind;

    bool has_cycle() const {
        return std::any_of(kind.begin(), kind.end(),
                           [](ComponentKind k) { return k != ComponentKind::Trivial; });
    }
};

// Iterative Tarjan. Deterministic for a given adjacency order.
inline Condensation strongly_connected_components(const DirectedGraph& g) {
    const std::size_t n = g.num_vertices;
    constexpr std::int32_t kUnvisited = -1;

    Condensation c;
    c.component.assign(n, kUnvisited);

    std::vector<std::int32_t> index(n, kUnvisited), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::int32_t next_index = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t child;
    };
    std::vector<Frame> call;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < g.adj[f.v].size()) {
                std::uint32_t w = g.adj[f.v][f.child++];
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                std::uint32_t v = f.v;
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    std::int32_t id = static_cast<std::int32_t>(c.num_components++);
                    std::uint32_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        c.component[w] = id;
                    } while (w != v);
                }
            }
        }
    }

    c.members.resize(c.num_components);
    for (std::uint32_t v = 0; v < n; ++v)
        c.members[static_cast<std::size_t>(c.component[v])].push_back(v);

    c.comp_adj.resize(c.num_components);
    c.internal_arcs.assign(c.num_components, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::int32_t cv = c.component[v];
        for (std::uint32_t w : g.adj[v]) {
            std::int32_t cw = c.component[w];
            if (cv == cw)
                ++c.internal_arcs[static_cast<std::size_t>(cv)];
            else
                c.comp_adj[static_cast<std::size_t>(cv)].push_back(
                    static_cast<std::uint32_t>(cw));
        }
    }
    for (auto& row : c.comp_adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    // A strongly connected set with as many internal arcs as vertices is a
    // bare simple cycle; any extra arc creates a second cycle through one
    // of its vertices.
    c.kind.resize(c.num_components);
    for (std::size_t k = 0; k < c.num_components; ++k) {
        if (c.members[k].size() == 1 && c.internal_arcs[k] == 0)
            c.kind[k] = ComponentKind::Trivial;
        else if (c.internal_arcs[k] == c.members[k].size())
            c.kind[k] = ComponentKind::Cycle;
        else
            c.kind[k] = ComponentKind::Complex;
    }
    return c;
}

struct SimpleCycle {
    std::vector<std::uint32_t> vertices;  // rotated so the smallest vertex is first
    double weight = 0.0;                  // product of arc probabilities around the cycle
};

struct CycleCatalog {
    std::vector<SimpleCycle> cycles;

    const SimpleCycle* heaviest() const {
        const SimpleCycle* best = nullptr;
        for (const SimpleCycle& c : cycles)
            if (!best || c.weight > best->weight) best = &c;
        return best;
    }
};

namespace detail {

// Johnson-style circuit search within one strongly connected component.
class CycleSearch {
public:
    CycleSearch(const DirectedGraph& g, const Matrix& weights, std::uint64_t cap,
                CycleCatalog& out)
        : g_(g), weights_(weights), cap_(cap), out_(out),
          blocked_(g.num_vertices, false), blist_(g.num_vertices) {}

    void run_from(std::uint32_t start, const std::vector<bool>& allowed) {
        start_ = start;
        allowed_ = &allowed;
        path_.clear();
        std::fill(blocked_.begin(), blocked_.end(), false);
        for (auto& lst : blist_) lst.clear();
        dfs(start);
    }

private:
    bool dfs(std::uint32_t v) {
        bool found = false;
        blocked_[v] = true;
        path_.push_back(v);
        for (std::uint32_t w : g_.adj[v]) {
            if (!(*allowed_)[w] || w < start_) continue;
            if (w == start_) {
                record();
                found = true;
            } else if (!blocked_[w]) {
                if (dfs(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (std::uint32_t w : g_.adj[v])
                if ((*allowed_)[w] && w >= start_) blist_[w].push_back(v);
        }
        path_.pop_back();
        return found;
    }

    void unblock(std::uint32_t v) {
        blocked_[v] = false;
        for (std::uint32_t u : blist_[v])
            if (blocked_[u]) unblock(u);
        blist_[v].clear();
    }

    void record() {
        if (out_.cycles.size() >= cap_)
            throw CapError(
                "simple-cycle catalog exceeds cap (" + std::to_string(cap_) +
                "); regime classification is still possible from component structure");
        SimpleCycle c;
        c.vertices = path_;
        double w = 1.0;
        for (std::size_t k = 0; k < path_.size(); ++k)
            w *= weights_(path_[k], path_[(k + 1) % path_.size()]);
        c.weight = w;
        out_.cycles.push_back(std::move(c));
    }

    const DirectedGraph& g_;
    const Matrix& weights_;
    std::uint64_t cap_;
    CycleCatalog& out_;
    std::uint32_t start_ = 0;
    const std::vector<bool>* allowed_ = nullptr;
    std::vector<bool> blocked_;
    std::vector<std::vector<std::uint32_t>> blist_;
    std::vector<std::uint32_t> path_;
};

}  // namespace detail

// All simple cycles of the graph, weighted by the matching matrix entries.
// Cycles start at their smallest vertex; the catalog is ordered by that
// starting vertex, which makes the output deterministic.
inline CycleCatalog simple_cycles(const DirectedGraph& g, const Matrix& weights,
                                  std::uint64_t cap = 1000000) {
    CycleCatalog catalog;
    Condensation cond = strongly_connected_components(g);
    detail::CycleSearch search(g, weights, cap, catalog);
    std::vector<bool> allowed(g.num_vertices, false);
    for (std::size_t k = 0; k < cond.num_components; ++k) {
        if (cond.kind[k] == ComponentKind::Trivial) continue;
        for (std::uint32_t v : cond.members[k]) allowed[v] = true;
        for (std::uint32_t v : cond.members[k]) search.run_from(v, allowed);
        for (std::uint32_t v : cond.members[k]) allowed[v] = false;
    }
    std::sort(catalog.cycles.begin(), catalog.cycles.end(),
              [](const SimpleCycle& a, const SimpleCycle& b) {
                  return a.vertices < b.vertices;
              });
    return catalog;
}

inline CycleCatalog simple_cycles(const ChainSpec& spec, std::uint64_t cap = 1000000) {
    return simple_cycles(interior_graph(spec), spec.p0, cap);
}

// True iff some vertex lies on two different simple cycles, i.e. some
// strongly connected component carries more internal arcs than vertices.
// Returns such a vertex (one of internal out-degree >= 2) as the witness.
inline std::optional<std::uint32_t> vertex_on_two_cycles(const DirectedGraph& g) {
    Condensation cond = strongly_connected_components(g);
    for (std::size_t k = 0; k < cond.num_components; ++k) {
        if (cond.kind[k] != ComponentKind::Complex) continue;
        for (std::uint32_t v : cond.members[k]) {
            std::size_t internal_out = 0;
            for (std::uint32_t w : g.adj[v])
                if (cond.component[w] == cond.component[v]) ++internal_out;
            if (internal_out >= 2) return v;
        }
        return cond.members[k].front();  // unreachable for a well-formed condensation
    }
    return std::nullopt;
}

// Assuming every vertex lies on at most one simple cycle, decides whether
// every path meets at most one cycle: no cycle component may reach another
// cycle component in the quotient graph.
inline bool paths_touch_at_most_one_cycle(const DirectedGraph&, const Condensation& cond) {
    for (std::size_t k = 0; k < cond.num_components; ++k) {
        if (cond.kind[k] == ComponentKind::Trivial) continue;
        // Depth-first over the quotient from component k.
        std::vector<bool> seen(cond.num_components, false);
        std::vector<std::uint32_t> stack(cond.comp_adj[k].begin(), cond.comp_adj[k].end());
        while (!stack.empty()) {
            std::uint32_t c = stack.back();
            stack.pop_back();
            if (seen[c]) continue;
            seen[c] = true;
            if (cond.kind[c] != ComponentKind::Trivial) return false;
            for (std::uint32_t next : cond.comp_adj[c]) stack.push_back(next);
        }
    }
    return true;
}

inline bool paths_touch_at_most_one_cycle(const DirectedGraph& g) {
    return paths_touch_at_most_one_cycle(g, strongly_connected_components(g));
}

}  // namespace wordrank

#endif  // WORDRANK_GRAPH_HPP
