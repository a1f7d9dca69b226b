// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fluency transcripts and the window/minimum-subjects graph construction.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldc/error.hpp"
#include "ldc/format.hpp"
#include "ldc/graph.hpp"
#include "ldc/random.hpp"

namespace ldc {

struct FluencyEntry {
    std::string word;
    double onset;  ///< seconds from the start of the recording
    friend bool operator==(const FluencyEntry&, const FluencyEntry&) = default;
};

/// One participant's production list in order of retrieval.
struct FluencyRecord {
    std::string subject;
    std::vector<FluencyEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    friend bool operator==(const FluencyRecord&, const FluencyRecord&) = default;
};

/// Lower-cases ASCII letters and trims surrounding whitespace. Non-ASCII
/// bytes (e.g. Hebrew) pass through unchanged.
inline std::string normalize_word(std::string_view raw) {
    std::string out(trim(raw));
    for (char& c : out) {
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct CorpusParseOptions {
    double max_onset = 60.0;
};

namespace detail {

inline void check_monotone(const FluencyRecord& r) {
    for (std::size_t i = 1; i < r.entries.size(); ++i) {
        if (!(r.entries[i].onset > r.entries[i - 1].onset)) throw NonMonotoneTimestamp(r.subject);
    }
}

}  // namespace detail

/// Reads `subject,word,onset_seconds` rows; rows of one subject must be
/// contiguous. Words are normalized with normalize_word.
inline std::vector<FluencyRecord> parse_corpus(std::istream& in, const CorpusParseOptions& opts = {}) {
    std::vector<FluencyRecord> records;
    std::unordered_set<std::string> finished;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (!fields) throw MalformedLine(line_no, "unterminated quote");
        if (!header_seen) {
            if (fields->size() != 3 || trim((*fields)[0]) != "subject" || trim((*fields)[1]) != "word" ||
                trim((*fields)[2]) != "onset_seconds") {
                throw MalformedLine(line_no, "expected header subject,word,onset_seconds");
            }
            header_seen = true;
            continue;
        }
        if (fields->size() != 3) throw MalformedLine(line_no, "expected 3 fields");
        std::string subject(trim((*fields)[0]));
        std::string word = normalize_word((*fields)[1]);
        auto onset = parse_double(trim((*fields)[2]));
        if (subject.empty()) throw MalformedLine(line_no, "empty subject");
        if (word.empty()) throw MalformedLine(line_no, "empty word");
        if (!onset || !std::isfinite(*onset) || *onset < 0.0 || *onset > opts.max_onset) {
            throw MalformedLine(line_no, "bad onset '" + (*fields)[2] + "'");
        }
        if (records.empty() || records.back().subject != subject) {
            if (!records.empty()) {
                detail::check_monotone(records.back());
                finished.insert(records.back().subject);
            }
            if (finished.contains(subject)) {
                throw MalformedLine(line_no, "rows of subject '" + subject + "' are not contiguous");
            }
            records.push_back({subject, {}});
        }
        records.back().entries.push_back({std::move(word), *onset});
    }
    if (!header_seen) throw MalformedLine(line_no, "missing header");
    if (!records.empty()) detail::check_monotone(records.back());
    return records;
}

inline void write_corpus(std::ostream& out, std::span<const FluencyRecord> records) {
    out << "subject,word,onset_seconds\n";
    for (const auto& r : records) {
        for (const auto& e : r.entries) {
            out << csv_escape(r.subject) << ',' << csv_escape(e.word) << ',' << format_exact(e.onset) << '\n';
        }
    }
}

/// Two-list layout: a JSON array of {"subject", "words", "timestamps"}
/// objects, or an object mapping subject id to {"words", "timestamps"}.
inline std::vector<FluencyRecord> parse_corpus_lists(std::istream& in, const CorpusParseOptions& opts = {}) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedLine(e.byte, e.what());
    }
    std::vector<FluencyRecord> records;
    auto take = [&](std::string subject, const nlohmann::json& body, std::size_t item) {
        if (!body.is_object() || !body.contains("words") || !body.contains("timestamps")) {
            throw MalformedLine(item, "record needs words and timestamps");
        }
        const auto& words = body.at("words");
        const auto& times = body.at("timestamps");
        if (!words.is_array() || !times.is_array() || words.size() != times.size()) {
            throw MalformedLine(item, "words and timestamps must be arrays of equal length");
        }
        FluencyRecord r{std::move(subject), {}};
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (!words[i].is_string() || !times[i].is_number()) throw MalformedLine(item, "bad entry type");
            auto word = normalize_word(words[i].get<std::string>());
            double onset = times[i].get<double>();
            if (word.empty()) throw MalformedLine(item, "empty word");
            if (!std::isfinite(onset) || onset < 0.0 || onset > opts.max_onset) throw MalformedLine(item, "bad onset");
            r.entries.push_back({std::move(word), onset});
        }
        detail::check_monotone(r);
        records.push_back(std::move(r));
    };
    std::size_t item = 0;
    if (doc.is_array()) {
        for (const auto& body : doc) {
            ++item;
            if (!body.is_object() || !body.contains("subject")) throw MalformedLine(item, "record needs a subject");
            const auto& s = body.at("subject");
            take(s.is_string() ? s.get<std::string>() : s.dump(), body, item);
        }
    } else if (doc.is_object()) {
        for (const auto& [subject, body] : doc.items()) take(subject, body, ++item);
    } else {
        throw MalformedLine(1, "expected a JSON array or object");
    }
    return records;
}

/// Onsets divided by the number of words the subject produced.
inline FluencyRecord normalize_record(const FluencyRecord& r) {
    if (r.entries.empty()) throw EmptyRecord("record '" + r.subject + "' has no entries");
    FluencyRecord out = r;
    const double n = static_cast<double>(r.entries.size());
    for (auto& e : out.entries) e.onset /= n;
    return out;
}

/// Keeps only the first occurrence of each word.
inline FluencyRecord collapse_repeats(const FluencyRecord& r) {
    FluencyRecord out{r.subject, {}};
    std::unordered_set<std::string> seen;
    for (const auto& e : r.entries) {
        if (seen.insert(e.word).second) out.entries.push_back(e);
    }
    return out;
}

/// Window size (largest positional gap counted) and minimum subjects.
struct DistanceFunctionParams {
    int ws = 1;
    int ms = 3;
};

inline constexpr std::array<int, 9> kDefaultWindowSizes = {1, 2, 3, 4, 5, 6, 7, 8, 9};
inline constexpr std::array<int, 10> kDefaultMinSubjects = {3, 5, 7, 9, 11, 13, 15, 17, 19, 21};

/// Median; the mean of the two central values for even sizes.
inline double median(std::vector<double> values) {
    if (values.empty()) throw InsufficientData("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : (values[m - 1] + values[m]) / 2.0;
}

/// Traversal-time graph.
///
/// For every subject, each ordered word pair at positional gap 1..ws (after
/// dropping repeated words) contributes the normalized onset difference to
/// that pair's sample P. An arc gets weight median(P) iff |P| > ms. Words
/// with no arcs do not appear.
inline WeightedDigraph build_graph(std::span<const FluencyRecord> records, const DistanceFunctionParams& p) {
    if (records.empty()) throw NoRecords();
    if (p.ws < 1 || p.ms < 1) throw Error("ws and ms must be positive");

    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::string> words;
    auto intern = [&](const std::string& w) {
        auto [it, fresh] = ids.emplace(w, static_cast<std::uint32_t>(words.size()));
        if (fresh) words.push_back(w);
        return it->second;
    };
    std::unordered_map<std::uint64_t, std::vector<double>> samples;
    const auto window = static_cast<std::size_t>(p.ws);
    for (const auto& raw : records) {
        if (raw.entries.empty()) continue;
        const FluencyRecord r = collapse_repeats(normalize_record(raw));
        std::vector<std::uint32_t> idx;
        idx.reserve(r.size());
        for (const auto& e : r.entries) idx.push_back(intern(e.word));
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (std::size_t j = i + 1; j < r.size() && j - i <= window; ++j) {
                const auto key = (std::uint64_t{idx[i]} << 32) | idx[j];
                samples[key].push_back(r.entries[j].onset - r.entries[i].onset);
            }
        }
    }
    GraphBuilder b;
    for (auto& [key, values] : samples) {
        if (values.size() > static_cast<std::size_t>(p.ms)) {
            b.add_arc(words[key >> 32], words[key & 0xffffffffu], median(std::move(values)));
        }
    }
    return b.build();
}

/// Permutes each record's words uniformly while leaving its onset sequence in
/// place. Record k draws from an engine seeded by derive_seed(seed, k).
inline std::vector<FluencyRecord> shuffle_records(std::span<const FluencyRecord> records, std::uint64_t seed) {
    std::vector<FluencyRecord> out(records.begin(), records.end());
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::vector<std::string> words;
        words.reserve(out[k].size());
        for (auto& e : out[k].entries) words.push_back(std::move(e.word));
        fisher_yates(std::span<std::string>(words), rng);
        for (std::size_t i = 0; i < words.size(); ++i) out[k].entries[i].word = std::move(words[i]);
    }
    return out;
}

}  // namespace ldc
