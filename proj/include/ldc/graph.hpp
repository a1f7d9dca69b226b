// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Weighted directed graph over interned word labels.
//
// Graphs are immutable once built. Vertex indices are assigned in
// lexicographic label order, so two graphs with the same labels and arcs are
// identical regardless of the order in which arcs were added. Out- and
// in-adjacency are stored as CSR arrays sorted by neighbour index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldc/error.hpp"
#include "ldc/format.hpp"

namespace ldc {

using VertexId = std::uint32_t;

/// One adjacency entry; `neighbor` is the head for out-arcs, the tail for in-arcs.
struct Arc {
    VertexId neighbor;
    double weight;
};

struct ArcRecord {
    std::string source;
    std::string target;
    double weight;
    friend bool operator==(const ArcRecord&, const ArcRecord&) = default;
};

class GraphBuilder;

class WeightedDigraph {
public:
    WeightedDigraph() = default;

    std::size_t vertex_count() const noexcept { return labels_.size(); }
    std::size_t arc_count() const noexcept { return out_arcs_.size(); }
    bool empty() const noexcept { return labels_.empty(); }

    const std::string& label(VertexId v) const { return labels_.at(v); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::optional<VertexId> find(std::string_view label) const {
        auto it = index_.find(std::string(label));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    VertexId index_of(std::string_view label) const {
        if (auto v = find(label)) return *v;
        throw UnknownVertex(std::string(label));
    }

    void require_vertex(VertexId v) const {
        if (v >= vertex_count()) throw UnknownVertex("#" + std::to_string(v));
    }

    std::span<const Arc> out_arcs(VertexId v) const {
        return {out_arcs_.data() + out_offsets_[v], out_arcs_.data() + out_offsets_[v + 1]};
    }

    std::span<const Arc> in_arcs(VertexId v) const {
        return {in_arcs_.data() + in_offsets_[v], in_arcs_.data() + in_offsets_[v + 1]};
    }

    std::optional<double> weight(VertexId from, VertexId to) const {
        auto arcs = out_arcs(from);
        auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                                   [](const Arc& a, VertexId t) { return a.neighbor < t; });
        if (it == arcs.end() || it->neighbor != to) return std::nullopt;
        return it->weight;
    }

    /// Largest arc weight, or 0 for an arcless graph.
    double max_weight() const noexcept { return max_weight_; }

    /// Arcs in (source index, target index) order.
    std::vector<ArcRecord> arcs() const {
        std::vector<ArcRecord> out;
        out.reserve(arc_count());
        for (VertexId u = 0; u < vertex_count(); ++u) {
            for (const Arc& a : out_arcs(u)) out.push_back({labels_[u], labels_[a.neighbor], a.weight});
        }
        return out;
    }

    /// Copy with every weight replaced by fn(weight).
    template <typename Fn>
    WeightedDigraph map_weights(Fn&& fn) const;

    friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
        return a.labels_ == b.labels_ && a.arcs() == b.arcs();
    }

private:
    friend class GraphBuilder;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, VertexId> index_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<Arc> in_arcs_;
    double max_weight_ = 0.0;
};

/// Collects vertices and arcs, validates them, and freezes a WeightedDigraph.
class GraphBuilder {
public:
    GraphBuilder& add_vertex(std::string_view label) {
        vertices_.emplace(label, true);
        return *this;
    }

    GraphBuilder& add_arc(std::string_view source, std::string_view target, double weight) {
        if (source == target) throw InvalidGraph("self-arc on '" + std::string(source) + "'");
        if (!std::isfinite(weight) || weight < 0.0) {
            throw InvalidGraph("arc " + std::string(source) + "->" + std::string(target) +
                               " has invalid weight " + format_exact(weight));
        }
        auto key = std::make_pair(std::string(source), std::string(target));
        if (!arcs_.emplace(key, weight).second) {
            throw InvalidGraph("duplicate arc " + key.first + "->" + key.second);
        }
        add_vertex(source);
        add_vertex(target);
        return *this;
    }

    WeightedDigraph build() const {
        WeightedDigraph g;
        g.labels_.reserve(vertices_.size());
        for (const auto& [label, unused] : vertices_) {
            g.index_.emplace(label, static_cast<VertexId>(g.labels_.size()));
            g.labels_.push_back(label);
        }
        const std::size_t n = g.labels_.size();

        // arcs_ is ordered by (source label, target label), which is index order.
        std::vector<std::size_t> out_count(n, 0), in_count(n, 0);
        for (const auto& [key, w] : arcs_) {
            ++out_count[g.index_.at(key.first)];
            ++in_count[g.index_.at(key.second)];
        }
        g.out_offsets_.assign(n + 1, 0);
        g.in_offsets_.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) {
            g.out_offsets_[v + 1] = g.out_offsets_[v] + out_count[v];
            g.in_offsets_[v + 1] = g.in_offsets_[v] + in_count[v];
        }
        g.out_arcs_.resize(arcs_.size());
        g.in_arcs_.resize(arcs_.size());
        std::vector<std::size_t> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
        std::vector<std::size_t> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
        for (const auto& [key, w] : arcs_) {
            VertexId u = g.index_.at(key.first);
            VertexId v = g.index_.at(key.second);
            g.out_arcs_[out_pos[u]++] = {v, w};
            g.in_arcs_[in_pos[v]++] = {u, w};
            g.max_weight_ = std::max(g.max_weight_, w);
        }
        return g;
    }

private:
    std::map<std::string, bool> vertices_;
    std::map<std::pair<std::string, std::string>, double> arcs_;
};

template <typename Fn>
WeightedDigraph WeightedDigraph::map_weights(Fn&& fn) const {
    GraphBuilder b;
    for (const auto& l : labels_) b.add_vertex(l);
    for (const auto& a : arcs()) b.add_arc(a.source, a.target, fn(a.weight));
    return b.build();
}

// CSV: header `source,target,weight`; weights in shortest round-trip form.

inline WeightedDigraph read_graph_csv(std::istream& in) {
    GraphBuilder b;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (!fields) throw MalformedLine(line_no, "unterminated quote");
        if (!header_seen) {
            if (fields->size() != 3 || trim((*fields)[0]) != "source" ||
                trim((*fields)[1]) != "target" || trim((*fields)[2]) != "weight") {
                throw MalformedLine(line_no, "expected header source,target,weight");
            }
            header_seen = true;
            continue;
        }
        if (fields->size() != 3) throw MalformedLine(line_no, "expected 3 fields");
        auto w = parse_double(trim((*fields)[2]));
        if (!w) throw MalformedLine(line_no, "bad weight '" + (*fields)[2] + "'");
        try {
            b.add_arc((*fields)[0], (*fields)[1], *w);
        } catch (const InvalidGraph& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    if (!header_seen) throw MalformedLine(line_no, "missing header");
    return b.build();
}

inline void write_graph_csv(std::ostream& out, const WeightedDigraph& g) {
    out << "source,target,weight\n";
    for (const auto& a : g.arcs()) {
        out << csv_escape(a.source) << ',' << csv_escape(a.target) << ',' << format_exact(a.weight)
            << '\n';
    }
}

}  // namespace ldc
