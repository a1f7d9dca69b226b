// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "ldc/error.hpp"
#include "ldc/graph.hpp"
#include "ldc/parallel.hpp"

namespace ldc {

/// Shortest-path length; nullopt means the target is unreachable.
using Distance = std::optional<double>;
using DistanceRow = std::vector<Distance>;

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

/// Weight of the arc u->v as stored in the graph.
struct OriginalWeight {
    double operator()(VertexId, VertexId, double w) const noexcept { return w; }
};

enum class Direction { forward, reverse };

/// Dijkstra from `source` with arc weights taken from `weight(u, v, w)`.
///
/// Returns raw lengths with +inf for unreachable vertices. Queue ties are
/// broken by vertex index. When `targets` is non-empty the search stops once
/// all of them are settled; lengths of other vertices are then not final.
/// Direction::reverse follows arcs backwards, giving lengths *to* `source`.
template <Direction dir = Direction::forward, typename WeightFn = OriginalWeight>
std::vector<double> dijkstra(const WeightedDigraph& g, VertexId source, WeightFn weight = {},
                             std::span<const VertexId> targets = {}) {
    g.require_vertex(source);
    const std::size_t n = g.vertex_count();
    std::vector<double> dist(n, kUnreached);
    std::vector<char> settled(n, 0);
    std::vector<char> wanted;
    std::size_t remaining = targets.size();
    if (!targets.empty()) {
        wanted.assign(n, 0);
        for (VertexId t : targets) wanted[t] = 1;
    }

    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        if (!wanted.empty() && wanted[u] && --remaining == 0) break;
        const auto arcs = dir == Direction::forward ? g.out_arcs(u) : g.in_arcs(u);
        for (const Arc& a : arcs) {
            const double w = dir == Direction::forward ? weight(u, a.neighbor, a.weight)
                                                       : weight(a.neighbor, u, a.weight);
            const double nd = d + w;
            if (nd < dist[a.neighbor]) {
                dist[a.neighbor] = nd;
                queue.emplace(nd, a.neighbor);
            }
        }
    }
    return dist;
}

inline DistanceRow to_distance_row(std::span<const double> raw) {
    DistanceRow row(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != kUnreached) row[i] = raw[i];
    }
    return row;
}

/// Exact shortest-path lengths from `source` to every vertex.
inline DistanceRow sssp(const WeightedDigraph& g, VertexId source) {
    return to_distance_row(dijkstra(g, source));
}

inline DistanceRow sssp(const WeightedDigraph& g, std::string_view source) {
    return sssp(g, g.index_of(source));
}

/// Dense all-pairs table indexed by vertex index.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), raw_(n * n, kUnreached) {
        for (std::size_t i = 0; i < n; ++i) raw_[i * n + i] = 0.0;
    }

    std::size_t size() const noexcept { return n_; }

    Distance at(std::size_t from, std::size_t to) const {
        double d = raw_[from * n_ + to];
        if (d == kUnreached) return std::nullopt;
        return d;
    }

    bool reachable(std::size_t from, std::size_t to) const { return raw_[from * n_ + to] != kUnreached; }

    /// +inf when unreachable; for callers doing arithmetic in bulk.
    double raw(std::size_t from, std::size_t to) const { return raw_[from * n_ + to]; }

    std::span<const double> raw_row(std::size_t from) const { return {raw_.data() + from * n_, n_}; }

    void set(std::size_t from, std::size_t to, double d) { raw_[from * n_ + to] = d; }

    void set_row(std::size_t from, std::span<const double> row) {
        std::copy(row.begin(), row.end(), raw_.begin() + static_cast<std::ptrdiff_t>(from * n_));
    }

    DistanceRow row(std::size_t from) const { return to_distance_row(raw_row(from)); }

private:
    std::size_t n_ = 0;
    std::vector<double> raw_;
};

/// One Dijkstra per source; rows are independent work units.
inline DistanceMatrix all_pairs(const WeightedDigraph& g, unsigned jobs = 1) {
    DistanceMatrix m(g.vertex_count());
    parallel_for(g.vertex_count(), jobs, [&](std::size_t s) {
        m.set_row(s, dijkstra(g, static_cast<VertexId>(s)));
    });
    return m;
}

/// Neighbourhood radius: the sum of all finite ordered-pair distances divided
/// by |V| (not by the number of pairs). Unreachable pairs add nothing.
inline double mean_pairwise_distance(const DistanceMatrix& apsp) {
    if (apsp.size() < 2) throw EmptyGraph("threshold needs at least 2 vertices");
    double sum = 0.0;
    for (std::size_t i = 0; i < apsp.size(); ++i) {
        for (std::size_t j = 0; j < apsp.size(); ++j) {
            if (i != j && apsp.reachable(i, j)) sum += apsp.raw(i, j);
        }
    }
    return sum / static_cast<double>(apsp.size());
}

inline double mean_pairwise_distance(const WeightedDigraph& g) {
    if (g.vertex_count() < 2) throw EmptyGraph("threshold needs at least 2 vertices");
    return mean_pairwise_distance(all_pairs(g));
}

/// Vertices u != v with d(v, u) <= r or d(u, v) <= r, in index order.
inline std::vector<VertexId> local_neighborhood(const DistanceMatrix& apsp, VertexId v, double r) {
    if (v >= apsp.size()) throw UnknownVertex("#" + std::to_string(v));
    std::vector<VertexId> out;
    for (std::size_t u = 0; u < apsp.size(); ++u) {
        if (u == v) continue;
        if (apsp.raw(v, u) <= r || apsp.raw(u, v) <= r) out.push_back(static_cast<VertexId>(u));
    }
    return out;
}

inline std::vector<VertexId> local_neighborhood(const WeightedDigraph& g, VertexId v, double r) {
    g.require_vertex(v);
    const auto from = dijkstra(g, v);
    const auto to = dijkstra<Direction::reverse>(g, v);
    std::vector<VertexId> out;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (u != v && (from[u] <= r || to[u] <= r)) out.push_back(u);
    }
    return out;
}

}  // namespace ldc
