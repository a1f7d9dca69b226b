// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-word retrieval timing (dt-to / dt-from) and the frequency and position
// covariates. Everything here runs on raw onsets with repeated words dropped.

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldc/centrality.hpp"
#include "ldc/corpus.hpp"
#include "ldc/error.hpp"
#include "ldc/format.hpp"

namespace ldc {

struct RetrievalStats {
    std::string word;
    std::size_t frequency = 0;     ///< number of lists containing the word
    double log_frequency = 0.0;
    double avg_location = 0.0;     ///< mean 1-based position
    std::optional<double> dt_to;   ///< mean seconds from the previous word
    std::optional<double> dt_from; ///< mean seconds to the next word
    std::size_t n_to = 0;
    std::size_t n_from = 0;
};

namespace detail {

struct Gap {
    double sum = 0.0;
    std::size_t count = 0;
};

template <typename Visit>
void for_each_collapsed(std::span<const FluencyRecord> records, Visit&& visit) {
    for (const auto& raw : records) visit(collapse_repeats(raw));
}

}  // namespace detail

/// Mean onset(word) - onset(previous word) over occurrences that have a predecessor.
inline double dt_to(std::span<const FluencyRecord> records, std::string_view word) {
    detail::Gap g;
    detail::for_each_collapsed(records, [&](const FluencyRecord& r) {
        for (std::size_t i = 1; i < r.size(); ++i) {
            if (r.entries[i].word == word) {
                g.sum += r.entries[i].onset - r.entries[i - 1].onset;
                ++g.count;
            }
        }
    });
    if (g.count == 0) throw NoEligibleOccurrence(std::string(word));
    return g.sum / static_cast<double>(g.count);
}

/// Mean onset(next word) - onset(word) over occurrences that have a successor.
inline double dt_from(std::span<const FluencyRecord> records, std::string_view word) {
    detail::Gap g;
    detail::for_each_collapsed(records, [&](const FluencyRecord& r) {
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            if (r.entries[i].word == word) {
                g.sum += r.entries[i + 1].onset - r.entries[i].onset;
                ++g.count;
            }
        }
    });
    if (g.count == 0) throw NoEligibleOccurrence(std::string(word));
    return g.sum / static_cast<double>(g.count);
}

/// One row per distinct word, sorted by word.
inline std::vector<RetrievalStats> covariates(std::span<const FluencyRecord> records) {
    if (records.empty()) throw NoRecords();
    struct Acc {
        std::size_t count = 0;
        double position_sum = 0.0;
        detail::Gap to, from;
    };
    std::map<std::string, Acc> acc;
    detail::for_each_collapsed(records, [&](const FluencyRecord& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            Acc& a = acc[r.entries[i].word];
            ++a.count;
            a.position_sum += static_cast<double>(i + 1);
            if (i > 0) {
                a.to.sum += r.entries[i].onset - r.entries[i - 1].onset;
                ++a.to.count;
            }
            if (i + 1 < r.size()) {
                a.from.sum += r.entries[i + 1].onset - r.entries[i].onset;
                ++a.from.count;
            }
        }
    });
    std::vector<RetrievalStats> out;
    out.reserve(acc.size());
    for (const auto& [word, a] : acc) {
        RetrievalStats s;
        s.word = word;
        s.frequency = a.count;
        s.log_frequency = std::log(static_cast<double>(a.count));
        s.avg_location = a.position_sum / static_cast<double>(a.count);
        if (a.to.count) s.dt_to = a.to.sum / static_cast<double>(a.to.count);
        if (a.from.count) s.dt_from = a.from.sum / static_cast<double>(a.from.count);
        s.n_to = a.to.count;
        s.n_from = a.from.count;
        out.push_back(std::move(s));
    }
    return out;
}

/// Stats aligned to the graph's vertex order; words absent from the corpus
/// cannot occur for graphs built from the same records.
inline std::vector<const RetrievalStats*> align_to_vertices(std::span<const RetrievalStats> stats,
                                                             std::span<const std::string> labels) {
    std::map<std::string_view, const RetrievalStats*> by_word;
    for (const auto& s : stats) by_word.emplace(s.word, &s);
    std::vector<const RetrievalStats*> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
        auto it = by_word.find(l);
        out.push_back(it == by_word.end() ? nullptr : it->second);
    }
    return out;
}

inline void write_retrieval_csv(std::ostream& out, std::span<const RetrievalStats> stats) {
    out << "word,frequency,log_frequency,avg_location,dt_to,dt_from,n_to,n_from\n";
    for (const auto& s : stats) {
        out << csv_escape(s.word) << ',' << s.frequency << ',' << format_g12(s.log_frequency) << ','
            << format_g12(s.avg_location) << ',' << format_g12(s.dt_to) << ',' << format_g12(s.dt_from) << ','
            << s.n_to << ',' << s.n_from << '\n';
    }
}

/// Per-vertex regression input: `word,ldc,log_frequency,avg_location,dt_to,dt_from`.
inline void write_regression_table(std::ostream& out, std::span<const RetrievalStats> stats,
                                   std::span<const std::string> labels, const CentralityVector& ldc_scores) {
    const auto aligned = align_to_vertices(stats, labels);
    out << "word,ldc,log_frequency,avg_location,dt_to,dt_from\n";
    for (std::size_t v = 0; v < labels.size(); ++v) {
        const RetrievalStats* s = aligned[v];
        out << csv_escape(labels[v]) << ',' << format_g12(ldc_scores.scores[v]) << ',';
        if (s) {
            out << format_g12(s->log_frequency) << ',' << format_g12(s->avg_location) << ','
                << format_g12(s->dt_to) << ',' << format_g12(s->dt_from);
        } else {
            out << kNullMarker << ',' << kNullMarker << ',' << kNullMarker << ',' << kNullMarker;
        }
        out << '\n';
    }
}

}  // namespace ldc
