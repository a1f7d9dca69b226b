// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Local Detour Centrality and the baseline measures it is compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldc/error.hpp"
#include "ldc/format.hpp"
#include "ldc/graph.hpp"
#include "ldc/parallel.hpp"
#include "ldc/shortest_paths.hpp"

namespace ldc {

enum class Measure { ldc, in_degree, out_degree, closeness, triangles, pagerank, betweenness };

inline constexpr std::array kAllMeasures = {Measure::ldc,       Measure::in_degree, Measure::out_degree,
                                            Measure::closeness, Measure::triangles, Measure::pagerank,
                                            Measure::betweenness};

constexpr std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::ldc: return "ldc";
        case Measure::in_degree: return "in_degree";
        case Measure::out_degree: return "out_degree";
        case Measure::closeness: return "closeness";
        case Measure::triangles: return "triangles";
        case Measure::pagerank: return "pagerank";
        case Measure::betweenness: return "betweenness";
    }
    return "?";
}

inline std::optional<Measure> parse_measure(std::string_view name) {
    for (Measure m : kAllMeasures) {
        if (measure_name(m) == name) return m;
    }
    return std::nullopt;
}

/// Scores of one measure, indexed by vertex.
struct CentralityVector {
    Measure measure;
    std::vector<double> scores;
};

// ---------------------------------------------------------------------------
// Local Detour Centrality
// ---------------------------------------------------------------------------

/// Arc weights with every arc into or out of `center` raised to `inflated`.
struct InflatedAround {
    VertexId center;
    double inflated;
    double operator()(VertexId u, VertexId v, double w) const noexcept {
        return (u == center || v == center) ? inflated : w;
    }
};

/// Everything LDC needs about one vertex: its neighbourhood L and the two
/// |L|x|L| shortest-path tables among L, with the center usable at its real
/// cost (`with_center`) and with all of its arcs set to the graph's largest
/// weight (`without_center`). Row/column k refers to neighbors[k].
struct NeighborhoodContext {
    VertexId center = 0;
    double radius = 0.0;
    std::vector<VertexId> neighbors;
    DistanceMatrix with_center;
    DistanceMatrix without_center;
    double max_weight = 0.0;
};

namespace detail {

inline NeighborhoodContext fill_without(const WeightedDigraph& g, NeighborhoodContext ctx) {
    const std::size_t k = ctx.neighbors.size();
    ctx.max_weight = g.max_weight();
    ctx.without_center = DistanceMatrix(k);
    const InflatedAround reweight{ctx.center, ctx.max_weight};
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = dijkstra(g, ctx.neighbors[i], reweight, ctx.neighbors);
        for (std::size_t j = 0; j < k; ++j) ctx.without_center.set(i, j, row[ctx.neighbors[j]]);
    }
    return ctx;
}

}  // namespace detail

/// Context built from a precomputed all-pairs table of `g`.
inline NeighborhoodContext build_context(const WeightedDigraph& g, const DistanceMatrix& apsp, VertexId v,
                                         double r) {
    g.require_vertex(v);
    NeighborhoodContext ctx;
    ctx.center = v;
    ctx.radius = r;
    ctx.neighbors = local_neighborhood(apsp, v, r);
    const std::size_t k = ctx.neighbors.size();
    ctx.with_center = DistanceMatrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            ctx.with_center.set(i, j, apsp.raw(ctx.neighbors[i], ctx.neighbors[j]));
        }
    }
    return detail::fill_without(g, std::move(ctx));
}

/// Context for a single vertex without a full all-pairs pass.
inline NeighborhoodContext build_context(const WeightedDigraph& g, VertexId v, double r) {
    g.require_vertex(v);
    NeighborhoodContext ctx;
    ctx.center = v;
    ctx.radius = r;
    ctx.neighbors = local_neighborhood(g, v, r);
    const std::size_t k = ctx.neighbors.size();
    ctx.with_center = DistanceMatrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = dijkstra(g, ctx.neighbors[i], OriginalWeight{}, ctx.neighbors);
        for (std::size_t j = 0; j < k; ++j) ctx.with_center.set(i, j, row[ctx.neighbors[j]]);
    }
    return detail::fill_without(g, std::move(ctx));
}

/// Mean detour penalty over ordered neighbour pairs, divided by |L|.
///
/// A pair unreachable both ways contributes 0. A pair that only the
/// with-center table connects is charged max_weight * |L| minus its length;
/// since inflation never deletes arcs this cannot occur on a consistent context.
inline double ldc(const NeighborhoodContext& ctx) {
    const std::size_t k = ctx.neighbors.size();
    if (k == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double with = ctx.with_center.raw(i, j);
            const double without = ctx.without_center.raw(i, j);
            if (with == kUnreached) continue;
            if (without == kUnreached) {
                sum += ctx.max_weight * static_cast<double>(k) - with;
            } else {
                sum += without - with;
            }
        }
    }
    return sum / static_cast<double>(k);
}

inline double ldc(const WeightedDigraph& g, VertexId v, double r) { return ldc(build_context(g, v, r)); }

/// LDC of every vertex at the graph's own threshold radius.
inline CentralityVector ldc_all(const WeightedDigraph& g, const DistanceMatrix& apsp, double r,
                                unsigned jobs = 1) {
    CentralityVector out{Measure::ldc, std::vector<double>(g.vertex_count(), 0.0)};
    parallel_for(g.vertex_count(), jobs, [&](std::size_t v) {
        out.scores[v] = ldc(build_context(g, apsp, static_cast<VertexId>(v), r));
    });
    return out;
}

inline CentralityVector ldc_all(const WeightedDigraph& g, unsigned jobs = 1) {
    const auto apsp = all_pairs(g, jobs);
    return ldc_all(g, apsp, mean_pairwise_distance(apsp), jobs);
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

enum class DegreeDirection { in, out };

inline CentralityVector degree(const WeightedDigraph& g, DegreeDirection dir) {
    CentralityVector out{dir == DegreeDirection::in ? Measure::in_degree : Measure::out_degree,
                         std::vector<double>(g.vertex_count())};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        out.scores[v] = static_cast<double>(dir == DegreeDirection::in ? g.in_arcs(v).size()
                                                                       : g.out_arcs(v).size());
    }
    return out;
}

/// (N' - 1) / sum of distances to the N' - 1 vertices reachable from v.
/// Vertices that reach nothing, or reach others only at total length 0, score 0.
inline CentralityVector closeness(const DistanceMatrix& apsp) {
    if (apsp.size() < 2) throw EmptyGraph("closeness needs at least 2 vertices");
    CentralityVector out{Measure::closeness, std::vector<double>(apsp.size(), 0.0)};
    for (std::size_t v = 0; v < apsp.size(); ++v) {
        double sum = 0.0;
        std::size_t reached = 0;
        for (std::size_t u = 0; u < apsp.size(); ++u) {
            if (u != v && apsp.reachable(v, u)) {
                sum += apsp.raw(v, u);
                ++reached;
            }
        }
        if (reached > 0 && sum > 0.0) out.scores[v] = static_cast<double>(reached) / sum;
    }
    return out;
}

inline CentralityVector closeness(const WeightedDigraph& g) {
    if (g.vertex_count() < 2) throw EmptyGraph("closeness needs at least 2 vertices");
    return closeness(all_pairs(g));
}

/// Triangles through each vertex in the symmetrized graph.
inline CentralityVector triangles(const WeightedDigraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<VertexId>> adj(n);
    for (VertexId v = 0; v < n; ++v) {
        for (const Arc& a : g.out_arcs(v)) adj[v].push_back(a.neighbor);
        for (const Arc& a : g.in_arcs(v)) adj[v].push_back(a.neighbor);
        std::sort(adj[v].begin(), adj[v].end());
        adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    }
    auto linked = [&](VertexId a, VertexId b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };

    CentralityVector out{Measure::triangles, std::vector<double>(n, 0.0)};
    for (VertexId v = 0; v < n; ++v) {
        const auto& nb = adj[v];
        std::size_t count = 0;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) count += linked(nb[i], nb[j]) ? 1 : 0;
        }
        out.scores[v] = static_cast<double>(count);
    }
    return out;
}

struct PageRankParams {
    double damping = 0.85;
    double tolerance = 1e-10;
    int max_iterations = 1000;
};

struct PageRankResult {
    CentralityVector ranks;    ///< normalized to sum 1
    std::vector<double> raw;   ///< fixed point before normalization
    int iterations = 0;
};

/// Power iteration of PR(v) = a * (sum over in-neighbours u of PR(u)/N_u
/// + dangling mass / T) + (1 - a) / T, where dangling vertices spread their
/// rank uniformly. Stops when no score moves by `tolerance` or more.
inline PageRankResult pagerank_detailed(const WeightedDigraph& g, const PageRankParams& params = {}) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw EmptyGraph("pagerank needs at least 1 vertex");
    if (!(params.damping > 0.0 && params.damping < 1.0) || !(params.tolerance > 0.0) ||
        params.max_iterations < 1) {
        throw Error("invalid pagerank parameters");
    }
    const double t = static_cast<double>(n);
    std::vector<double> rank(n, 1.0 / t), next(n);
    for (int it = 1; it <= params.max_iterations; ++it) {
        double dangling = 0.0;
        for (VertexId u = 0; u < n; ++u) {
            if (g.out_arcs(u).empty()) dangling += rank[u];
        }
        double change = 0.0;
        for (VertexId v = 0; v < n; ++v) {
            double incoming = 0.0;
            for (const Arc& a : g.in_arcs(v)) {
                incoming += rank[a.neighbor] / static_cast<double>(g.out_arcs(a.neighbor).size());
            }
            next[v] = params.damping * (incoming + dangling / t) + (1.0 - params.damping) / t;
            change = std::max(change, std::abs(next[v] - rank[v]));
        }
        rank.swap(next);
        if (change < params.tolerance) {
            PageRankResult res{{Measure::pagerank, rank}, rank, it};
            double total = 0.0;
            for (double x : rank) total += x;
            for (double& x : res.ranks.scores) x /= total;
            return res;
        }
    }
    throw NoConvergence("pagerank did not converge in " + std::to_string(params.max_iterations) +
                        " iterations");
}

inline CentralityVector pagerank(const WeightedDigraph& g, const PageRankParams& params = {}) {
    return pagerank_detailed(g, params).ranks;
}

/// Shortest-path betweenness over ordered pairs (Brandes accumulation on
/// weighted Dijkstra). Path lengths are compared exactly; zero-weight arcs
/// can make the settle order disagree with the counting order.
inline CentralityVector betweenness(const WeightedDigraph& g) {
    const std::size_t n = g.vertex_count();
    if (n < 3) throw EmptyGraph("betweenness needs at least 3 vertices");
    CentralityVector out{Measure::betweenness, std::vector<double>(n, 0.0)};

    std::vector<double> dist(n), sigma(n), delta(n);
    std::vector<std::vector<VertexId>> preds(n);
    std::vector<VertexId> order;
    std::vector<char> settled(n);
    using Entry = std::pair<double, VertexId>;

    for (VertexId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kUnreached);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(settled.begin(), settled.end(), 0);
        for (auto& p : preds) p.clear();
        order.clear();

        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
        dist[s] = 0.0;
        sigma[s] = 1.0;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (settled[u]) continue;
            settled[u] = 1;
            order.push_back(u);
            for (const Arc& a : g.out_arcs(u)) {
                const VertexId w = a.neighbor;
                const double nd = d + a.weight;
                if (nd < dist[w]) {
                    dist[w] = nd;
                    sigma[w] = sigma[u];
                    preds[w].assign(1, u);
                    queue.emplace(nd, w);
                } else if (nd == dist[w] && !settled[w]) {
                    sigma[w] += sigma[u];
                    preds[w].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const VertexId w = *it;
            for (VertexId u : preds[w]) delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            if (w != s) out.scores[w] += delta[w];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// All measures at once
// ---------------------------------------------------------------------------

/// Every measure for one graph. `radius` is the LDC threshold that was used.
struct CentralityTable {
    std::vector<std::string> labels;
    double radius = 0.0;
    std::vector<CentralityVector> columns;  ///< in kAllMeasures order

    const CentralityVector& column(Measure m) const {
        for (const auto& c : columns) {
            if (c.measure == m) return c;
        }
        throw Error("measure not present: " + std::string(measure_name(m)));
    }
};

/// The requested measures, sharing one all-pairs pass where any needs it.
inline CentralityTable compute_measures(const WeightedDigraph& g, std::span<const Measure> measures,
                                        const PageRankParams& pr = {}, unsigned jobs = 1) {
    if (g.empty()) throw EmptyGraph();
    const bool needs_apsp = std::any_of(measures.begin(), measures.end(),
                                        [](Measure m) { return m == Measure::ldc || m == Measure::closeness; });
    DistanceMatrix apsp;
    CentralityTable t;
    t.labels = g.labels();
    if (needs_apsp) {
        apsp = all_pairs(g, jobs);
        t.radius = mean_pairwise_distance(apsp);
    }
    for (Measure m : measures) {
        switch (m) {
            case Measure::ldc: t.columns.push_back(ldc_all(g, apsp, t.radius, jobs)); break;
            case Measure::in_degree: t.columns.push_back(degree(g, DegreeDirection::in)); break;
            case Measure::out_degree: t.columns.push_back(degree(g, DegreeDirection::out)); break;
            case Measure::closeness: t.columns.push_back(closeness(apsp)); break;
            case Measure::triangles: t.columns.push_back(triangles(g)); break;
            case Measure::pagerank: t.columns.push_back(pagerank(g, pr)); break;
            case Measure::betweenness: t.columns.push_back(betweenness(g)); break;
        }
    }
    return t;
}

/// All seven measures. Needs at least 3 vertices.
inline CentralityTable compute_all(const WeightedDigraph& g, const PageRankParams& pr = {}, unsigned jobs = 1) {
    if (g.vertex_count() < 3) throw EmptyGraph("centrality needs at least 3 vertices");
    return compute_measures(g, kAllMeasures, pr, jobs);
}

/// `word,<measure>...` with one row per vertex in index order.
inline void write_centrality_wide(std::ostream& out, const CentralityTable& t, std::span<const Measure> measures) {
    out << "word";
    for (Measure m : measures) out << ',' << measure_name(m);
    out << '\n';
    for (std::size_t v = 0; v < t.labels.size(); ++v) {
        out << csv_escape(t.labels[v]);
        for (Measure m : measures) out << ',' << format_g12(t.column(m).scores[v]);
        out << '\n';
    }
}

/// `word,measure,value`, vertex-major.
inline void write_centrality_long(std::ostream& out, const CentralityTable& t, std::span<const Measure> measures) {
    out << "word,measure,value\n";
    for (std::size_t v = 0; v < t.labels.size(); ++v) {
        for (Measure m : measures) {
            out << csv_escape(t.labels[v]) << ',' << measure_name(m) << ',' << format_g12(t.column(m).scores[v])
                << '\n';
        }
    }
}

}  // namespace ldc
