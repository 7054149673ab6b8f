#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "ncpopt/polynomial.hpp"

namespace ncpopt {

using VarSet = std::set<int>;  // 1-based variable indices

/// Undirected graph on the variables 1..n, adjacency-set representation.
struct CspGraph {
    int n = 0;
    std::vector<VarSet> adj;  // adj[i] for vertex i+1

    explicit CspGraph(int n = 0) : n(n), adj(n) {}

    void add_edge(int i, int j) {
        if (i == j) return;
        adj[i - 1].insert(j);
        adj[j - 1].insert(i);
    }
    bool has_edge(int i, int j) const { return i != j && adj[i - 1].count(j) > 0; }
    void add_clique(const VarSet& s) {
        for (int i : s)
            for (int j : s)
                if (i < j) add_edge(i, j);
    }
    size_t edge_count() const {
        size_t e = 0;
        for (const auto& a : adj) e += a.size();
        return e / 2;
    }
};

/// Correlation sparsity pattern graph: variables i, j are linked when they
/// co-occur in a monomial of f, or both lie in the support of one g in S.
inline CspGraph csp_graph(const NcPolynomial& f, const std::vector<NcPolynomial>& S) {
    CspGraph g(f.nvars());
    for (const auto& [w, c] : f.terms()) g.add_clique(w.support());
    for (const auto& s : S) g.add_clique(s.support());
    return g;
}

struct RipCheck {
    bool ok = true;
    std::optional<int> violating_index;  // 1-based clique index k+1 that breaks Eq-style nesting
};

/// Running intersection property of the stored clique order: each clique's
/// overlap with the union of its predecessors must lie inside one of them.
inline RipCheck check_rip(const std::vector<VarSet>& cliques) {
    VarSet seen;
    for (size_t k = 0; k < cliques.size(); ++k) {
        if (k > 0) {
            VarSet overlap;
            std::set_intersection(cliques[k].begin(), cliques[k].end(), seen.begin(), seen.end(),
                                  std::inserter(overlap, overlap.begin()));
            bool nested = false;
            for (size_t l = 0; l < k && !nested; ++l)
                nested = std::includes(cliques[l].begin(), cliques[l].end(), overlap.begin(), overlap.end());
            if (!nested) return {false, static_cast<int>(k + 1)};
        }
        seen.insert(cliques[k].begin(), cliques[k].end());
    }
    return {true, std::nullopt};
}

namespace detail {

/// Greedy elimination: simplicial vertices first (zero fill), then minimum
/// degree, ties broken by smallest index. Preferring simplicial vertices
/// keeps chordal inputs fill-free, so their maximal cliques come out exactly.
inline std::vector<VarSet> elimination_cliques(CspGraph g) {
    int n = g.n;
    std::vector<bool> alive(n, true);
    std::vector<VarSet> cliques;
    auto fill_in = [&](int v) {
        int fill = 0;
        const auto& nb = g.adj[v - 1];
        for (auto it = nb.begin(); it != nb.end(); ++it)
            for (auto jt = std::next(it); jt != nb.end(); ++jt)
                if (!g.has_edge(*it, *jt)) ++fill;
        return fill;
    };
    for (int step = 0; step < n; ++step) {
        int best = -1;
        std::tuple<int, int, int> best_key;
        for (int v = 1; v <= n; ++v) {
            if (!alive[v - 1]) continue;
            int deg = static_cast<int>(g.adj[v - 1].size());
            int simplicial = fill_in(v) == 0 ? 0 : 1;
            std::tuple<int, int, int> key{simplicial, deg, v};
            if (best < 0 || key < best_key) {
                best = v;
                best_key = key;
            }
        }
        VarSet clique = g.adj[best - 1];
        clique.insert(best);
        cliques.push_back(clique);
        // eliminate: connect the neighborhood, drop the vertex
        g.add_clique(g.adj[best - 1]);
        for (int u : g.adj[best - 1]) g.adj[u - 1].erase(best);
        g.adj[best - 1].clear();
        alive[best - 1] = false;
    }
    // keep maximal cliques only
    std::vector<VarSet> maximal;
    for (const auto& c : cliques) {
        bool contained = false;
        for (const auto& d : cliques)
            if (&c != &d && c.size() < d.size() &&
                std::includes(d.begin(), d.end(), c.begin(), c.end())) {
                contained = true;
                break;
            }
        if (!contained && std::find(maximal.begin(), maximal.end(), c) == maximal.end())
            maximal.push_back(c);
    }
    return maximal;
}

}  // namespace detail

/// Maximal cliques of a chordal extension of g, ordered by a clique-tree
/// traversal (Prim on intersection weights) so the result satisfies the
/// running intersection property. For a chordal input these are exactly
/// its maximal cliques.
inline std::vector<VarSet> chordal_cliques(const CspGraph& g) {
    std::vector<VarSet> cliques = detail::elimination_cliques(g);
    std::sort(cliques.begin(), cliques.end());  // canonical seed order
    if (cliques.size() <= 1) return cliques;

    size_t p = cliques.size();
    std::vector<bool> used(p, false);
    std::vector<VarSet> ordered;
    ordered.reserve(p);
    for (size_t placed = 0; placed < p; ++placed) {
        int best = -1, best_w = -1;
        for (size_t i = 0; i < p; ++i) {
            if (used[i]) continue;
            int w = 0;
            for (const auto& c : ordered) {
                VarSet inter;
                std::set_intersection(c.begin(), c.end(), cliques[i].begin(), cliques[i].end(),
                                      std::inserter(inter, inter.begin()));
                w = std::max(w, static_cast<int>(inter.size()));
            }
            if (w > best_w) {
                best_w = w;
                best = static_cast<int>(i);
            }
        }
        used[best] = true;
        ordered.push_back(cliques[best]);
    }
    return ordered;
}

}  // namespace ncpopt
