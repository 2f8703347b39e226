#ifndef WORDRANK_SPECTRAL_HPP
#define WORDRANK_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/graph.hpp"

namespace wordrank {

// Entrywise power of a nonnegative matrix, with 0^psi = 0 for every psi.
// At psi = 1 this is the base matrix; raising psi shrinks every entry that
// lies strictly between 0 and 1.
struct PoweredMatrix {
    Matrix entries;
    double exponent = 1.0;
};

inline double pow0(double x, double psi) { return x == 0.0 ? 0.0 : std::pow(x, psi); }

inline PoweredMatrix powered(const Matrix& base, double psi) {
    PoweredMatrix p;
    p.exponent = psi;
    p.entries = Matrix(base.rows(), base.cols());
    for (std::size_t i = 0; i < base.rows(); ++i)
        for (std::size_t j = 0; j < base.cols(); ++j)
            p.entries(i, j) = pow0(base(i, j), psi);
    return p;
}

enum class EigenvectorSide { Right, Left };

struct SpectralResult {
    double radius = 0.0;
    std::vector<double> eigenvector;  // nonnegative, max entry 1
    std::size_t iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline Matrix block_of(const Matrix& m, const std::vector<std::uint32_t>& verts) {
    Matrix b(verts.size(), verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = 0; j < verts.size(); ++j) b(i, j) = m(verts[i], verts[j]);
    return b;
}

// Gaussian elimination with partial pivoting; blocks here are small.
inline std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0)
            throw ConvergenceError("singular system in eigenvector construction");
        if (piv != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

// Power iteration on (B + I)/2 with Collatz-Wielandt bounds. The half-shift
// makes periodic blocks (pure cycles embedded in larger components)
// primitive, so the iteration converges; the radius of B is recovered as
// 2r' - 1. Requires B irreducible; the iterate then stays strictly positive
// and both bounds are rigorous at every step.
inline double collatz_wielandt(const Matrix& block, const AnalysisOptions& opts,
                               std::vector<double>* eigvec, std::size_t* iterations) {
    const std::size_t m = block.rows();
    std::vector<double> y(m, 1.0), z(m);
    double lo = 0.0, hi = 0.0;
    std::size_t it = 0;
    for (;; ++it) {
        if (it > opts.power_iteration_cap)
            throw ConvergenceError("power iteration failed to converge: bracket width " +
                                   std::to_string(hi - lo) + " after " + std::to_string(it) +
                                   " iterations");
        for (std::size_t i = 0; i < m; ++i) {
            double s = y[i];
            for (std::size_t j = 0; j < m; ++j) s += block(i, j) * y[j];
            z[i] = 0.5 * s;
        }
        lo = z[0] / y[0];
        hi = lo;
        for (std::size_t i = 1; i < m; ++i) {
            double q = z[i] / y[i];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        double norm = *std::max_element(z.begin(), z.end());
        for (double& v : z) v /= norm;
        y.swap(z);
        if (hi - lo <= 1e-13 * hi) break;
    }
    if (iterations) *iterations += it + 1;
    if (eigvec) *eigvec = y;
    return lo + hi - 1.0;  // 2 * (lo + hi)/2 - 1
}

// Walks a pure-cycle component in arc order starting from its smallest
// vertex. Valid only for components tagged Cycle.
inline std::vector<std::uint32_t> cycle_order(const DirectedGraph& g, const Condensation& cond,
                                              std::size_t comp) {
    const auto& verts = cond.members[comp];
    std::vector<std::uint32_t> order;
    order.reserve(verts.size());
    std::uint32_t v = verts.front();
    for (std::size_t step = 0; step < verts.size(); ++step) {
        order.push_back(v);
        for (std::uint32_t w : g.adj[v]) {
            if (cond.component[w] == cond.component[v]) {
                v = w;
                break;
            }
        }
    }
    return order;
}

// Radius of one diagonal block of the normal form. Trivial and pure-cycle
// blocks have closed forms (the cycle case is the geometric mean of its arc
// weights, exactly 1 when all weights are 1); only genuinely branching
// blocks need iteration.
inline double component_radius(const Matrix& m, const DirectedGraph& g, const Condensation& cond,
                               std::size_t comp, const AnalysisOptions& opts,
                               std::vector<double>* eigvec, std::size_t* iterations) {
    const auto& verts = cond.members[comp];
    switch (cond.kind[comp]) {
        case ComponentKind::Trivial:
            if (eigvec) eigvec->assign(1, 1.0);
            return 0.0;
        case ComponentKind::Cycle: {
            auto order = cycle_order(g, cond, comp);
            double prod = 1.0;
            for (std::size_t k = 0; k < order.size(); ++k)
                prod *= m(order[k], order[(k + 1) % order.size()]);
            double r = std::pow(prod, 1.0 / static_cast<double>(order.size()));
            if (eigvec) {
                // Around the cycle, w_k y_{k+1} = r y_k.
                std::vector<double> y(verts.size(), 0.0);
                double val = 1.0;
                std::vector<double> along(order.size());
                for (std::size_t k = 0; k < order.size(); ++k) {
                    along[k] = val;
                    if (k + 1 < order.size())
                        val = r * val / m(order[k], order[k + 1]);
                }
                double norm = *std::max_element(along.begin(), along.end());
                for (std::size_t k = 0; k < order.size(); ++k) {
                    std::size_t pos = static_cast<std::size_t>(
                        std::lower_bound(verts.begin(), verts.end(), order[k]) - verts.begin());
                    y[pos] = along[k] / norm;
                }
                *eigvec = y;
            }
            return r;
        }
        case ComponentKind::Complex:
            return collatz_wielandt(block_of(m, verts), opts, eigvec, iterations);
    }
    return 0.0;
}

struct BlockRadii {
    DirectedGraph graph;
    Condensation cond;
    std::vector<double> radius;
    std::size_t iterations = 0;
    double max_radius = 0.0;
};

inline BlockRadii block_radii(const Matrix& m, const AnalysisOptions& opts) {
    BlockRadii br;
    br.graph = DirectedGraph::from_positive_entries(m);
    br.cond = strongly_connected_components(br.graph);
    br.radius.resize(br.cond.num_components);
    for (std::size_t k = 0; k < br.cond.num_components; ++k) {
        br.radius[k] =
            component_radius(m, br.graph, br.cond, k, opts, nullptr, &br.iterations);
        br.max_radius = std::max(br.max_radius, br.radius[k]);
    }
    return br;
}

inline void check_row_sum_bracket(const Matrix& m, double r) {
    if (m.rows() == 0) return;
    double s = 0.0, S = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j);
        if (i == 0) s = S = sum;
        s = std::min(s, sum);
        S = std::max(S, sum);
    }
    double slack = 1e-9 * std::max(1.0, S);
    if (r < s - slack || r > S + slack)
        throw ConvergenceError("spectral radius " + std::to_string(r) +
                               " escaped its row-sum bracket [" + std::to_string(s) + ", " +
                               std::to_string(S) + "]");
}

}  // namespace detail

// Largest-modulus eigenvalue of a nonnegative square matrix, computed
// blockwise over its strongly connected components: the spectrum of the
// normal form is the union of the diagonal blocks' spectra.
inline double spectral_radius_value(const Matrix& m, const AnalysisOptions& opts = {}) {
    if (m.rows() != m.cols()) throw ValidationError("spectral radius needs a square matrix");
    if (m.rows() == 0) return 0.0;
    auto br = detail::block_radii(m, opts);
    detail::check_row_sum_bracket(m, br.max_radius);
    return br.max_radius;
}

// Full spectral result including a nonnegative eigenvector for the radius.
// For a reducible matrix the eigenvector is assembled from a maximal block
// attaining the radius and exact solves on the blocks that access it.
inline SpectralResult spectral_radius(const Matrix& m, EigenvectorSide side = EigenvectorSide::Right,
                                      const AnalysisOptions& opts = {}) {
    if (m.rows() != m.cols()) throw ValidationError("spectral radius needs a square matrix");
    if (side == EigenvectorSide::Left) {
        SpectralResult res = spectral_radius(m.transposed(), EigenvectorSide::Right, opts);
        return res;
    }

    SpectralResult res;
    const std::size_t n = m.rows();
    if (n == 0) return res;

    auto br = detail::block_radii(m, opts);
    res.radius = br.max_radius;
    res.iterations = br.iterations;
    detail::check_row_sum_bracket(m, res.radius);

    std::vector<double> y(n, 0.0);
    if (res.radius == 0.0) {
        // Nilpotent matrix: any vector supported on vertices with no
        // incoming arcs is annihilated.
        std::vector<bool> has_in(n, false);
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t j : br.graph.adj[i]) has_in[j] = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!has_in[i]) y[i] = 1.0;
    } else {
        const auto& cond = br.cond;
        double basic_tol = 1e-12 * std::max(1.0, res.radius);
        std::vector<bool> basic(cond.num_components, false);
        for (std::size_t k = 0; k < cond.num_components; ++k)
            basic[k] = res.radius - br.radius[k] <= basic_tol;

        // Reachability between components (the quotient is tiny).
        auto reaches = [&](std::size_t from, std::size_t to) -> bool {
            std::vector<bool> seen(cond.num_components, false);
            std::vector<std::uint32_t> stack(cond.comp_adj[from].begin(),
                                             cond.comp_adj[from].end());
            while (!stack.empty()) {
                std::uint32_t c = stack.back();
                stack.pop_back();
                if (seen[c]) continue;
                seen[c] = true;
                for (std::uint32_t next : cond.comp_adj[c]) stack.push_back(next);
            }
            return seen[to];
        };

        // Pick a block attaining the radius that no other such block can
        // reach; everything accessing it then has a strictly smaller radius
        // and the upstream systems are solvable with nonnegative solutions.
        std::size_t pivot = cond.num_components;
        for (std::size_t k = 0; k < cond.num_components && pivot == cond.num_components; ++k) {
            if (!basic[k]) continue;
            bool accessed = false;
            for (std::size_t b = 0; b < cond.num_components && !accessed; ++b)
                if (b != k && basic[b] && reaches(b, k)) accessed = true;
            if (!accessed) pivot = k;
        }
        if (pivot == cond.num_components)
            throw ConvergenceError("no maximal block found for the eigenvector construction");

        std::vector<bool> feeds_pivot(cond.num_components, false);
        for (std::size_t k = 0; k < cond.num_components; ++k)
            if (k != pivot && reaches(k, pivot)) feeds_pivot[k] = true;

        // Component ids are in reverse topological order, so increasing id
        // processes successors first.
        for (std::size_t k = 0; k < cond.num_components; ++k) {
            const auto& verts = cond.members[k];
            if (k == pivot) {
                std::vector<double> perron;
                detail::component_radius(m, br.graph, cond, k, opts, &perron, &res.iterations);
                for (std::size_t i = 0; i < verts.size(); ++i) y[verts[i]] = perron[i];
            } else if (feeds_pivot[k]) {
                std::vector<double> b(verts.size(), 0.0);
                for (std::size_t i = 0; i < verts.size(); ++i)
                    for (std::uint32_t w : br.graph.adj[verts[i]])
                        if (cond.component[w] != static_cast<std::int32_t>(k))
                            b[i] += m(verts[i], w) * y[w];
                Matrix sys(verts.size(), verts.size());
                for (std::size_t i = 0; i < verts.size(); ++i)
                    for (std::size_t j = 0; j < verts.size(); ++j)
                        sys(i, j) = (i == j ? res.radius : 0.0) - m(verts[i], verts[j]);
                auto sol = detail::solve_linear(std::move(sys), std::move(b));
                for (std::size_t i = 0; i < verts.size(); ++i) y[verts[i]] = sol[i];
            }
        }
    }

    double norm = *std::max_element(y.begin(), y.end());
    for (double& v : y) v /= norm;

    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m(i, j) * y[j];
        resid = std::max(resid, std::abs(s - res.radius * y[i]));
    }
    if (resid > opts.eig_residual_tol)
        throw ConvergenceError("eigenvector residual " + std::to_string(resid) +
                               " exceeds tolerance");
    res.residual = resid;
    res.eigenvector = std::move(y);
    return res;
}

struct BetaResult {
    double beta = 0.0;
    double radius_at_beta = 1.0;
    std::size_t evaluations = 0;
};

// The unique exponent in [0, 1) at which the entrywise-powered interior
// matrix has spectral radius exactly 1. The radius is strictly decreasing
// in the exponent whenever the arc graph has a cycle, which makes plain
// bisection reliable; 64 fixed halvings shrink the bracket far below the
// verification tolerance. Without a vertex shared by two simple cycles the
// radius at exponent 0 is already 1 and the answer is exactly 0.
inline BetaResult solve_beta(const Matrix& p, const AnalysisOptions& opts = {}) {
    if (p.rows() != p.cols()) throw ValidationError("exponent solve needs a square matrix");
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (p(i, j) < 0.0 || p(i, j) > 1.0)
                throw ValidationError("matrix entries must lie in [0,1]");
            sum += p(i, j);
        }
        if (sum > 1.0 + opts.row_sum_tol)
            throw ValidationError("row " + std::to_string(i) + " sums to more than 1");
    }

    DirectedGraph g = DirectedGraph::from_positive_entries(p);
    Condensation cond = strongly_connected_components(g);
    if (!cond.has_cycle())
        throw ValidationError("acyclic interior: no decay exponent exists");

    // Escape condition: every vertex must reach a row with deficit, else a
    // closed set of full rows forms a recurrent class.
    {
        std::vector<bool> escapes(p.rows(), false);
        std::vector<std::uint32_t> stack;
        for (std::size_t i = 0; i < p.rows(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < p.cols(); ++j) sum += p(i, j);
            if (sum < 1.0 - opts.row_sum_tol) {
                escapes[i] = true;
                stack.push_back(static_cast<std::uint32_t>(i));
            }
        }
        while (!stack.empty()) {
            std::uint32_t v = stack.back();
            stack.pop_back();
            for (std::size_t u = 0; u < p.rows(); ++u)
                if (!escapes[u] && p(u, v) > 0.0) {
                    escapes[u] = true;
                    stack.push_back(static_cast<std::uint32_t>(u));
                }
        }
        for (std::size_t i = 0; i < p.rows(); ++i)
            if (!escapes[i])
                throw ValidationError("recurrent block: state " + std::to_string(i + 1) +
                                      " never reaches a deficit row");
    }

    BetaResult out;
    if (!vertex_on_two_cycles(g)) {
        out.beta = 0.0;
        out.radius_at_beta = 1.0;
        return out;
    }

    double lo = 0.0, hi = 1.0;
    for (std::size_t it = 0; it < opts.bisection_iterations; ++it) {
        double mid = 0.5 * (lo + hi);
        double r = spectral_radius_value(powered(p, mid).entries, opts);
        ++out.evaluations;
        if (r >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    out.beta = 0.5 * (lo + hi);
    out.radius_at_beta = spectral_radius_value(powered(p, out.beta).entries, opts);
    ++out.evaluations;
    if (std::abs(out.radius_at_beta - 1.0) > opts.beta_tol)
        throw ConvergenceError("radius at the solved exponent is " +
                               std::to_string(out.radius_at_beta) + ", off 1 by more than " +
                               std::to_string(opts.beta_tol));
    return out;
}

inline BetaResult solve_beta(const ChainSpec& spec, const AnalysisOptions& opts = {}) {
    return solve_beta(spec.interior(), opts);
}

// Per-component spectral radii of the powered interior matrix, plus the set
// of components sitting at radius 1. The components are those of the full
// walk graph, so the absorbing state occupies its own (never critical)
// component and the quotient keeps its arcs into it.
struct CriticalComponents {
    Condensation cond;                      // over states 0..n
    std::vector<double> radius_at_beta;     // per component; absorbing component -> 0
    std::vector<std::size_t> critical;      // component ids, ascending
    std::size_t absorbing_component = 0;
};

inline CriticalComponents critical_components(const ChainSpec& spec, double beta,
                                              const AnalysisOptions& opts = {}) {
    CriticalComponents cc;
    DirectedGraph g0 = transition_graph(spec);
    cc.cond = strongly_connected_components(g0);
    cc.absorbing_component = static_cast<std::size_t>(cc.cond.component[0]);
    cc.radius_at_beta.assign(cc.cond.num_components, 0.0);

    Matrix pb = powered(spec.p0, beta).entries;
    std::size_t iters = 0;
    for (std::size_t k = 0; k < cc.cond.num_components; ++k) {
        if (k == cc.absorbing_component) continue;
        cc.radius_at_beta[k] =
            detail::component_radius(pb, g0, cc.cond, k, opts, nullptr, &iters);
        if (std::abs(cc.radius_at_beta[k] - 1.0) <= opts.criticality_tol)
            cc.critical.push_back(k);
    }

    if (cc.critical.empty())
        throw ConvergenceError("no component attains radius 1 at the solved exponent");
    if (beta > 0.0)
        for (std::size_t k : cc.critical)
            if (cc.cond.kind[k] != ComponentKind::Complex)
                throw ConvergenceError(
                    "component without a shared-cycle vertex sits at radius 1; "
                    "the criticality tolerance is too loose for this input");
    return cc;
}

struct PositiveEigenvector {
    bool exists = false;
    std::vector<double> vec;  // over states 1..n when exists
};

namespace detail {

inline std::vector<double> left_perron_of_block(const Matrix& powered_p0,
                                                const Condensation& cond, std::size_t comp,
                                                const AnalysisOptions& opts) {
    Matrix block = block_of(powered_p0, cond.members[comp]).transposed();
    if (cond.kind[comp] == ComponentKind::Cycle) {
        // Transposed pure cycle: same closed form on the reversed orientation.
        DirectedGraph bg = DirectedGraph::from_positive_entries(block);
        Condensation bc = strongly_connected_components(bg);
        std::vector<double> v;
        component_radius(block, bg, bc, 0, opts, &v, nullptr);
        return v;
    }
    std::vector<double> v;
    std::size_t it = 0;
    collatz_wielandt(block, opts, &v, &it);
    return v;
}

// Propagates a left eigenvector for eigenvalue 1 through the quotient in
// topological order. Source components get their Perron vector when they
// sit at radius 1 and zero otherwise (forced either way); downstream
// components are solved exactly. A component at radius 1 that receives
// nonzero inflow admits no consistent solution, and the propagation
// reports failure.
inline std::optional<std::vector<double>> propagate_left_eigenvector(
    const ChainSpec& spec, const CriticalComponents& cc, const Matrix& pb,
    const AnalysisOptions& opts) {
    const Condensation& cond = cc.cond;

    std::vector<bool> is_critical(cond.num_components, false);
    for (std::size_t k : cc.critical) is_critical[k] = true;

    std::vector<std::size_t> indegree(cond.num_components, 0);
    for (std::size_t k = 0; k < cond.num_components; ++k)
        for (std::uint32_t t : cond.comp_adj[k]) ++indegree[t];

    std::vector<double> x(spec.n + 1, 0.0);
    // Decreasing id = topological order (arcs go from higher to lower ids).
    for (std::size_t k = cond.num_components; k-- > 0;) {
        if (k == cc.absorbing_component) continue;
        const auto& verts = cond.members[k];
        std::vector<double> inflow(verts.size(), 0.0);
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t u = 1; u <= spec.n; ++u)
                if (cond.component[u] != static_cast<std::int32_t>(k) && pb(u, verts[i]) > 0.0)
                    inflow[i] += x[u] * pb(u, verts[i]);
        double inflow_max = *std::max_element(inflow.begin(), inflow.end());

        if (is_critical[k]) {
            if (inflow_max > 1e-12) return std::nullopt;
            auto perron = left_perron_of_block(pb, cond, k, opts);
            for (std::size_t i = 0; i < verts.size(); ++i) x[verts[i]] = perron[i];
        } else if (indegree[k] == 0) {
            // Subcritical source: forced to zero.
        } else {
            Matrix sys(verts.size(), verts.size());
            for (std::size_t i = 0; i < verts.size(); ++i)
                for (std::size_t j = 0; j < verts.size(); ++j)
                    sys(i, j) = (i == j ? 1.0 : 0.0) - pb(verts[j], verts[i]);
            auto sol = solve_linear(std::move(sys), std::move(inflow));
            for (std::size_t i = 0; i < verts.size(); ++i) x[verts[i]] = sol[i];
        }
    }
    return std::vector<double>(x.begin() + 1, x.end());
}

}  // namespace detail

// Attempts to build a strictly positive left eigenvector of the powered
// interior matrix for eigenvalue 1 by direct numerical propagation,
// independent of any structural test.
inline std::optional<std::vector<double>> direct_positive_left_eigenvector(
    const ChainSpec& spec, double beta, const AnalysisOptions& opts = {}) {
    CriticalComponents cc = critical_components(spec, beta, opts);
    Matrix pb = powered(spec.p0, beta).entries;
    auto x = detail::propagate_left_eigenvector(spec, cc, pb, opts);
    if (!x) return std::nullopt;
    for (double v : *x)
        if (!(v > 0.0)) return std::nullopt;
    double norm = *std::max_element(x->begin(), x->end());
    for (double& v : *x) v /= norm;
    return x;
}

// Structural criterion: a strictly positive left eigenvector for eigenvalue
// 1 exists if and only if the components at radius 1 are exactly the source
// components of the quotient graph. When it holds, the eigenvector is also
// constructed and cross-checked against the residual tolerance.
inline PositiveEigenvector positive_left_eigenvector(const ChainSpec& spec, double beta,
                                                     const AnalysisOptions& opts = {}) {
    if (!(beta > 0.0))
        throw ValidationError("positive-eigenvector criterion requires a positive exponent");
    CriticalComponents cc = critical_components(spec, beta, opts);

    std::vector<std::size_t> indegree(cc.cond.num_components, 0);
    for (std::size_t k = 0; k < cc.cond.num_components; ++k)
        for (std::uint32_t t : cc.cond.comp_adj[k]) ++indegree[t];
    std::vector<std::size_t> sources;
    for (std::size_t k = 0; k < cc.cond.num_components; ++k)
        if (k != cc.absorbing_component && indegree[k] == 0) sources.push_back(k);

    PositiveEigenvector out;
    out.exists = sources == cc.critical;
    if (!out.exists) return out;

    Matrix pb = powered(spec.p0, beta).entries;
    auto x = detail::propagate_left_eigenvector(spec, cc, pb, opts);
    if (!x) throw ConvergenceError("structural criterion held but propagation failed");
    for (double v : *x)
        if (!(v > 0.0))
            throw ConvergenceError("structural criterion held but the eigenvector is not "
                                   "strictly positive");
    double norm = *std::max_element(x->begin(), x->end());
    for (double& v : *x) v /= norm;

    // Residual of x P(beta) = x over the interior states.
    Matrix p = powered(spec.interior(), beta).entries;
    double resid = 0.0;
    for (std::size_t j = 0; j < spec.n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i) s += (*x)[i] * p(i, j);
        resid = std::max(resid, std::abs(s - (*x)[j]));
    }
    if (resid > opts.eig_residual_tol)
        throw ConvergenceError("left eigenvector residual " + std::to_string(resid) +
                               " exceeds tolerance");
    out.vec = std::move(*x);
    return out;
}

}  // namespace wordrank

#endif  // WORDRANK_SPECTRAL_HPP
