// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded synthetic fluency corpora for tests, benchmarks and demos.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ldc/corpus.hpp"
#include "ldc/random.hpp"

namespace ldc::synthetic {

struct CorpusShape {
    std::size_t subjects = 60;
    std::size_t vocabulary = 40;
    std::size_t min_length = 8;
    std::size_t max_length = 16;
    /// Word i is drawn with weight (i + 1)^-zipf; 0 gives uniform draws.
    double zipf = 0.0;
    double mean_gap = 2.5;  ///< seconds, exponential on top of min_gap
    double min_gap = 0.3;
};

inline std::string word_label(std::size_t i) {
    std::string s = std::to_string(i);
    return "w" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

/// Each subject lists distinct words drawn without replacement by weight,
/// with onset gaps independent of the words.
inline std::vector<FluencyRecord> corpus(const CorpusShape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> base(shape.vocabulary);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = std::pow(static_cast<double>(i + 1), -shape.zipf);

    std::vector<FluencyRecord> out;
    out.reserve(shape.subjects);
    for (std::size_t s = 0; s < shape.subjects; ++s) {
        const std::size_t span = shape.max_length - shape.min_length + 1;
        std::size_t length = shape.min_length + static_cast<std::size_t>(uniform_below(rng, span));
        length = std::min(length, shape.vocabulary);

        std::vector<double> weight = base;
        double total = 0.0;
        for (double w : weight) total += w;
        FluencyRecord r{"s" + std::to_string(s), {}};
        double onset = 0.2 + uniform_unit(rng);
        for (std::size_t k = 0; k < length; ++k) {
            double pick = uniform_unit(rng) * total;
            std::size_t i = 0;
            while (i + 1 < weight.size() && (weight[i] == 0.0 || pick >= weight[i])) {
                pick -= weight[i];
                ++i;
            }
            while (weight[i] == 0.0) --i;
            total -= weight[i];
            weight[i] = 0.0;
            if (onset > 60.0) break;
            r.entries.push_back({word_label(i), onset});
            onset += shape.min_gap - shape.mean_gap * std::log(1.0 - uniform_unit(rng));
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ldc::synthetic
