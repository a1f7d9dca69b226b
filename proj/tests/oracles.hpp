// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference implementations. These deliberately avoid the
// library's Dijkstra and accumulation code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ldc/graph.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Labels v00, v01, ... so lexicographic order equals creation order.
inline std::string label(std::size_t i) {
    return (i < 10 ? "v0" : "v") + std::to_string(i);
}

struct RandomGraphShape {
    std::size_t vertices = 8;
    double arc_probability = 0.35;
    double min_weight = 0.0;  ///< exclusive lower bound for continuous weights
    double max_weight = 5.0;
    bool integer_weights = false;  ///< weights in {1..max_weight}, to create ties
};

inline ldc::WeightedDigraph random_graph(std::mt19937_64& rng, const RandomGraphShape& s) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> weight(s.min_weight, s.max_weight);
    std::uniform_int_distribution<int> int_weight(1, static_cast<int>(s.max_weight));
    ldc::GraphBuilder b;
    for (std::size_t i = 0; i < s.vertices; ++i) b.add_vertex(label(i));
    for (std::size_t i = 0; i < s.vertices; ++i) {
        for (std::size_t j = 0; j < s.vertices; ++j) {
            if (i == j || coin(rng) >= s.arc_probability) continue;
            double w = s.integer_weights ? int_weight(rng) : weight(rng);
            if (w <= s.min_weight) w = s.max_weight;  // keep (min, max]
            b.add_arc(label(i), label(j), w);
        }
    }
    return b.build();
}

/// Adjacency matrix with +inf for missing arcs and 0 on the diagonal.
inline Matrix adjacency(const ldc::WeightedDigraph& g) {
    const std::size_t n = g.vertex_count();
    Matrix m(n, std::vector<double>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
    for (const auto& a : g.arcs()) m[g.index_of(a.source)][g.index_of(a.target)] = a.weight;
    return m;
}

inline Matrix floyd_warshall(Matrix d) {
    const std::size_t n = d.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
            }
        }
    }
    return d;
}

inline Matrix floyd_warshall(const ldc::WeightedDigraph& g) { return floyd_warshall(adjacency(g)); }

inline double threshold(const Matrix& d) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i != j && d[i][j] < kInf) sum += d[i][j];
        }
    }
    return sum / static_cast<double>(d.size());
}

inline std::vector<std::size_t> neighborhood(const Matrix& d, std::size_t v, double r) {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < d.size(); ++u) {
        if (u != v && (d[v][u] <= r || d[u][v] <= r)) out.push_back(u);
    }
    return out;
}

/// Literal LDC: build both complete graphs on L as explicit matrices and
/// subtract them element by element.
inline double ldc(const ldc::WeightedDigraph& g, std::size_t v) {
    const Matrix adj = adjacency(g);
    const Matrix full = floyd_warshall(adj);
    const double r = threshold(full);
    const auto L = neighborhood(full, v, r);
    if (L.empty()) return 0.0;

    double max_w = 0.0;
    for (const auto& a : g.arcs()) max_w = std::max(max_w, a.weight);
    Matrix reweighted = adj;
    for (std::size_t u = 0; u < adj.size(); ++u) {
        if (u == v) continue;
        if (adj[u][v] < kInf) reweighted[u][v] = max_w;
        if (adj[v][u] < kInf) reweighted[v][u] = max_w;
    }
    const Matrix gn = floyd_warshall(reweighted);

    const std::size_t k = L.size();
    Matrix with(k, std::vector<double>(k)), without(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            with[i][j] = full[L[i]][L[j]];
            without[i][j] = gn[L[i]][L[j]];
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double diff = without[i][j] - with[i][j];
            if (with[i][j] < kInf) sum += diff;
        }
    }
    return sum / static_cast<double>(k);
}

/// Every simple path from s to t, each as its vertex sequence and weight sum.
struct Path {
    std::vector<std::size_t> vertices;
    double length;
};

inline std::vector<Path> simple_paths(const Matrix& adj, std::size_t s, std::size_t t) {
    std::vector<Path> out;
    std::vector<std::size_t> stack{s};
    std::vector<char> on(adj.size(), 0);
    on[s] = 1;
    std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double len) {
        if (u == t) {
            out.push_back({stack, len});
            return;
        }
        for (std::size_t w = 0; w < adj.size(); ++w) {
            if (w == u || on[w] || adj[u][w] == kInf) continue;
            on[w] = 1;
            stack.push_back(w);
            dfs(w, len + adj[u][w]);
            stack.pop_back();
            on[w] = 0;
        }
    };
    dfs(s, 0.0);
    return out;
}

/// sigma_ij(v) / sigma_ij summed over ordered pairs, by explicit path listing.
inline std::vector<double> betweenness(const ldc::WeightedDigraph& g) {
    const Matrix adj = adjacency(g);
    const std::size_t n = adj.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto paths = simple_paths(adj, i, j);
            if (paths.empty()) continue;
            double best = kInf;
            for (const auto& p : paths) best = std::min(best, p.length);
            std::vector<double> through(n, 0.0);
            double total = 0.0;
            for (const auto& p : paths) {
                if (p.length != best) continue;
                total += 1.0;
                for (std::size_t k = 1; k + 1 < p.vertices.size(); ++k) through[p.vertices[k]] += 1.0;
            }
            for (std::size_t v = 0; v < n; ++v) {
                if (v != i && v != j) out[v] += through[v] / total;
            }
        }
    }
    return out;
}

inline std::vector<double> closeness(const ldc::WeightedDigraph& g) {
    const Matrix d = floyd_warshall(g);
    std::vector<double> out(d.size(), 0.0);
    for (std::size_t v = 0; v < d.size(); ++v) {
        double sum = 0.0;
        std::size_t reached = 0;
        for (std::size_t u = 0; u < d.size(); ++u) {
            if (u != v && d[v][u] < kInf) {
                sum += d[v][u];
                ++reached;
            }
        }
        if (reached && sum > 0.0) out[v] = static_cast<double>(reached) / sum;
    }
    return out;
}

inline std::vector<double> triangles(const ldc::WeightedDigraph& g) {
    const Matrix adj = adjacency(g);
    const std::size_t n = adj.size();
    auto linked = [&](std::size_t a, std::size_t b) { return adj[a][b] < kInf || adj[b][a] < kInf; };
    std::vector<double> out(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                if (linked(a, b) && linked(b, c) && linked(a, c)) {
                    out[a] += 1;
                    out[b] += 1;
                    out[c] += 1;
                }
            }
        }
    }
    return out;
}

/// Largest per-component residual of the damped PageRank equation at `pr`,
/// with dangling vertices spreading their mass uniformly.
inline double pagerank_residual(const ldc::WeightedDigraph& g, const std::vector<double>& pr, double alpha) {
    const Matrix adj = adjacency(g);
    const std::size_t n = adj.size();
    std::vector<std::size_t> out_deg(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t w = 0; w < n; ++w) out_deg[u] += (u != w && adj[u][w] < kInf) ? 1 : 0;
    }
    double worst = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        double rhs = (1.0 - alpha) / static_cast<double>(n);
        for (std::size_t u = 0; u < n; ++u) {
            if (out_deg[u] == 0) {
                rhs += alpha * pr[u] / static_cast<double>(n);
            } else if (u != v && adj[u][v] < kInf) {
                rhs += alpha * pr[u] / static_cast<double>(out_deg[u]);
            }
        }
        worst = std::max(worst, std::abs(rhs - pr[v]));
    }
    return worst;
}

/// O(n^2) average ranks followed by textbook Pearson.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& s) {
        std::vector<double> r(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            double below = 0, equal = 0;
            for (double t : s) {
                below += t < s[i] ? 1 : 0;
                equal += t == s[i] ? 1 : 0;
            }
            r[i] = below + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i] / n;
        my += ry[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
