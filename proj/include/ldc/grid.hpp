// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The WS x MS parameter sweep: one graph per cell, all measures, and the
// pairwise Spearman table against the corpus covariates.

#include <charconv>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ldc/centrality.hpp"
#include "ldc/corpus.hpp"
#include "ldc/error.hpp"
#include "ldc/format.hpp"
#include "ldc/parallel.hpp"
#include "ldc/retrieval.hpp"
#include "ldc/stats.hpp"

namespace ldc {

/// Variables in every cell's Spearman table, in table order.
inline std::vector<std::string> grid_variables() {
    std::vector<std::string> names;
    for (Measure m : kAllMeasures) names.emplace_back(measure_name(m));
    names.emplace_back("log_frequency");
    names.emplace_back("avg_location");
    return names;
}

struct GridSpec {
    std::vector<int> window_sizes;
    std::vector<int> min_subjects;

    static GridSpec full() {
        return {{kDefaultWindowSizes.begin(), kDefaultWindowSizes.end()},
                {kDefaultMinSubjects.begin(), kDefaultMinSubjects.end()}};
    }
};

namespace detail {

inline std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

/// `7`, `1..9`, or `3..21:2`.
inline std::vector<int> parse_range(std::string_view s) {
    int step = 1;
    if (auto colon = s.find(':'); colon != std::string_view::npos) {
        auto st = to_int(s.substr(colon + 1));
        if (!st || *st < 1) throw Error("bad step in '" + std::string(s) + "'");
        step = *st;
        s = s.substr(0, colon);
    }
    auto dots = s.find("..");
    auto lo = to_int(dots == std::string_view::npos ? s : s.substr(0, dots));
    auto hi = dots == std::string_view::npos ? lo : to_int(s.substr(dots + 2));
    if (!lo || !hi || *lo < 1 || *hi < *lo) throw Error("bad range '" + std::string(s) + "'");
    std::vector<int> out;
    for (int v = *lo; v <= *hi; v += step) out.push_back(v);
    return out;
}

}  // namespace detail

/// `paper`, or comma-separated `ws=<range>` and `ms=<range>` terms.
inline GridSpec parse_grid_spec(std::string_view text) {
    if (text == "paper") return GridSpec::full();
    GridSpec spec;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        auto term = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (term.starts_with("ws=")) {
            spec.window_sizes = detail::parse_range(term.substr(3));
        } else if (term.starts_with("ms=")) {
            spec.min_subjects = detail::parse_range(term.substr(3));
        } else {
            throw Error("bad grid term '" + std::string(term) + "'");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (spec.window_sizes.empty() || spec.min_subjects.empty()) throw Error("grid needs both ws= and ms=");
    return spec;
}

enum class CellStatus { ok, empty, failed };

constexpr std::string_view cell_status_name(CellStatus s) {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::empty: return "empty";
        case CellStatus::failed: return "failed";
    }
    return "?";
}

struct GridOptions {
    PageRankParams pagerank;
    double exclusion_sd = 2.5;
    unsigned jobs = 1;
};

struct GridResult {
    DistanceFunctionParams params;
    CellStatus status = CellStatus::empty;
    std::string message;
    WeightedDigraph graph;
    std::optional<CentralityTable> centrality;
    SquareTable spearman;  ///< over grid_variables()
    SquareTable counts;    ///< observations behind each spearman entry
    std::optional<PairCorrelation> ldc_dt_to;
    std::optional<PairCorrelation> ldc_dt_from;
    /// Vertices within the exclusion band on every table variable.
    std::vector<std::string> included_words;

    std::size_t vertex_count() const noexcept { return graph.vertex_count(); }
};

/// Evaluates one cell. Graphs with fewer than 3 vertices are reported empty;
/// any other failure is captured in `message` with status failed.
inline GridResult evaluate_cell(std::span<const FluencyRecord> records, std::span<const RetrievalStats> stats,
                                const DistanceFunctionParams& params, const GridOptions& opts = {}) {
    GridResult cell;
    cell.params = params;
    try {
        cell.graph = build_graph(records, params);
        if (cell.graph.vertex_count() < 3) {
            cell.status = CellStatus::empty;
            cell.message = "empty graph";
            return cell;
        }
        cell.centrality = compute_all(cell.graph, opts.pagerank, 1);
        const auto aligned = align_to_vertices(stats, cell.graph.labels());
        const std::size_t n = cell.graph.vertex_count();

        std::vector<std::vector<std::optional<double>>> columns;
        for (const auto& c : cell.centrality->columns) columns.emplace_back(c.scores.begin(), c.scores.end());
        std::vector<std::optional<double>> logf(n), loc(n), to(n), from(n);
        for (std::size_t v = 0; v < n; ++v) {
            if (const auto* s = aligned[v]) {
                logf[v] = s->log_frequency;
                loc[v] = s->avg_location;
                to[v] = s->dt_to;
                from[v] = s->dt_from;
            }
        }
        columns.push_back(logf);
        columns.push_back(loc);

        const auto names = grid_variables();
        cell.spearman = spearman_table(names, columns, opts.exclusion_sd, &cell.counts);
        cell.ldc_dt_to = correlate(columns[0], to, opts.exclusion_sd);
        cell.ldc_dt_from = correlate(columns[0], from, opts.exclusion_sd);

        std::vector<char> keep(n, 1);
        for (const auto& col : columns) {
            std::vector<char> in_band(n, 0);
            try {
                for (auto i : exclude_outliers(col, opts.exclusion_sd)) in_band[i] = 1;
            } catch (const InsufficientData&) {
            }
            for (std::size_t v = 0; v < n; ++v) keep[v] = keep[v] && in_band[v];
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (keep[v]) cell.included_words.push_back(cell.graph.label(static_cast<VertexId>(v)));
        }
        cell.status = CellStatus::ok;
    } catch (const Error& e) {
        cell.status = CellStatus::failed;
        cell.message = e.what();
    }
    return cell;
}

/// All cells in (ws, ms) row-major order. Cells are independent jobs.
inline std::vector<GridResult> grid_sweep(std::span<const FluencyRecord> records, const GridSpec& spec,
                                          const GridOptions& opts = {}) {
    if (records.empty()) throw NoRecords();
    const auto stats = covariates(records);
    std::vector<DistanceFunctionParams> cells;
    for (int ws : spec.window_sizes) {
        for (int ms : spec.min_subjects) cells.push_back({ws, ms});
    }
    std::vector<GridResult> out(cells.size());
    parallel_for(cells.size(), opts.jobs, [&](std::size_t i) { out[i] = evaluate_cell(records, stats, cells[i], opts); });
    return out;
}

// Summary layout: one row per cell, `ws,ms,status,n_vertices,n_arcs`, then
// rho_/n_ columns for every table pair, then the LDC-dt correlations.

inline std::string grid_summary_header() {
    std::ostringstream out;
    out << "ws,ms,status,n_vertices,n_arcs";
    const auto names = grid_variables();
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) out << ",rho_" << names[i] << "__" << names[j];
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) out << ",n_" << names[i] << "__" << names[j];
    }
    for (const char* t : {"dt_to", "dt_from"}) out << ",rho_ldc__" << t << ",p_ldc__" << t << ",n_ldc__" << t;
    return out.str();
}

inline std::string grid_summary_row(const GridResult& cell) {
    std::ostringstream out;
    out << cell.params.ws << ',' << cell.params.ms << ',' << cell_status_name(cell.status) << ','
        << cell.graph.vertex_count() << ',' << cell.graph.arc_count();
    const std::size_t k = grid_variables().size();
    const bool ok = cell.status == CellStatus::ok;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                std::optional<double> v;
                if (ok) v = pass == 0 ? cell.spearman.at(i, j) : cell.counts.at(i, j);
                out << ',' << format_g12(v);
            }
        }
    }
    for (const auto* c : {&cell.ldc_dt_to, &cell.ldc_dt_from}) {
        if (*c) {
            out << ',' << format_g12((*c)->rho) << ',' << format_g12((*c)->p_value) << ',' << (*c)->n;
        } else {
            out << ',' << kNullMarker << ',' << kNullMarker << ',' << kNullMarker;
        }
    }
    return out.str();
}

}  // namespace ldc
