// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Triviality test for the LDC / retrieval-time correlation: shuffle every
// list's word order (onsets stay put), rebuild, recompute, and compare.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ldc/centrality.hpp"
#include "ldc/corpus.hpp"
#include "ldc/error.hpp"
#include "ldc/parallel.hpp"
#include "ldc/random.hpp"
#include "ldc/retrieval.hpp"
#include "ldc/stats.hpp"

namespace ldc {

enum class DtTarget { dt_to, dt_from };

constexpr std::string_view dt_target_name(DtTarget t) { return t == DtTarget::dt_to ? "dt_to" : "dt_from"; }

enum class Tail { two_sided, one_sided };

struct PermutationConfig {
    int repetitions = 5000;
    std::uint64_t seed = 1;
    DistanceFunctionParams params{};
    DtTarget target = DtTarget::dt_from;
    double alpha = 0.05;
    Tail tail = Tail::two_sided;
    std::optional<double> exclusion_sd = 2.5;  ///< nullopt: no outlier exclusion
    int max_retries = 3;
    unsigned jobs = 1;
};

/// Spearman(LDC, dt) over the graph built from `records`; nullopt when undefined.
inline std::optional<PairCorrelation> ldc_dt_correlation(std::span<const FluencyRecord> records,
                                                         const DistanceFunctionParams& params, DtTarget target,
                                                         std::optional<double> exclusion_sd = 2.5) {
    try {
        const auto g = build_graph(records, params);
        if (g.vertex_count() < 2) return std::nullopt;
        const auto scores = ldc_all(g);
        const auto aligned = align_to_vertices(covariates(records), g.labels());
        std::vector<std::optional<double>> x(scores.scores.begin(), scores.scores.end());
        std::vector<std::optional<double>> y(g.vertex_count());
        for (std::size_t v = 0; v < y.size(); ++v) {
            if (aligned[v]) y[v] = target == DtTarget::dt_to ? aligned[v]->dt_to : aligned[v]->dt_from;
        }
        if (exclusion_sd) return correlate(x, y, *exclusion_sd);
        const auto c = spearman(OptionalSeries(x), OptionalSeries(y));
        return PairCorrelation{c.rho, c.n, spearman_p_value(c.rho, c.n)};
    } catch (const InsufficientData&) {
        return std::nullopt;
    } catch (const ZeroVariance&) {
        return std::nullopt;
    } catch (const EmptyGraph&) {
        return std::nullopt;
    }
}

/// Add-one p-value: (1 + #null draws at least as extreme) / (N + 1).
/// Two-sided compares |rho|; one-sided looks in the direction of `actual`.
inline double permutation_p_value(double actual, std::span<const double> null, Tail tail = Tail::two_sided) {
    std::size_t extreme = 0;
    for (double r : null) {
        bool hit = false;
        if (tail == Tail::two_sided) {
            hit = std::abs(r) >= std::abs(actual);
        } else {
            hit = actual >= 0.0 ? r >= actual : r <= actual;
        }
        extreme += hit ? 1 : 0;
    }
    return static_cast<double>(1 + extreme) / static_cast<double>(null.size() + 1);
}

struct PermutationResult {
    PairCorrelation actual;
    double p_value = 1.0;
    bool actual_significant = false;
    bool significant_nontrivial = false;
    std::vector<double> null_rhos;  ///< successful repetitions, in repetition order
    std::size_t failed = 0;         ///< repetitions with no defined rho after all retries
    std::size_t redraws = 0;
};

/// Seed of attempt `attempt` of repetition `rep`; independent of scheduling.
inline std::uint64_t repetition_seed(std::uint64_t master, std::uint64_t rep, std::uint64_t attempt) {
    return derive_seed(derive_seed(master, rep), attempt);
}

inline PermutationResult permutation_test(std::span<const FluencyRecord> records, const PermutationConfig& cfg) {
    if (cfg.repetitions < 1) throw Error("repetitions must be at least 1");
    const auto actual = ldc_dt_correlation(records, cfg.params, cfg.target, cfg.exclusion_sd);
    if (!actual) {
        throw UndefinedActualCorrelation("LDC-" + std::string(dt_target_name(cfg.target)) +
                                         " correlation is undefined at ws=" + std::to_string(cfg.params.ws) +
                                         ", ms=" + std::to_string(cfg.params.ms));
    }

    const auto n = static_cast<std::size_t>(cfg.repetitions);
    std::vector<std::optional<double>> draws(n);
    std::vector<int> attempts_used(n, 0);
    parallel_for(n, cfg.jobs, [&](std::size_t rep) {
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            attempts_used[rep] = attempt;
            const auto shuffled = shuffle_records(records, repetition_seed(cfg.seed, rep, attempt));
            if (auto c = ldc_dt_correlation(shuffled, cfg.params, cfg.target, cfg.exclusion_sd)) {
                draws[rep] = c->rho;
                return;
            }
        }
    });

    PermutationResult res;
    res.actual = *actual;
    for (std::size_t rep = 0; rep < n; ++rep) {
        res.redraws += static_cast<std::size_t>(attempts_used[rep]);
        if (draws[rep]) {
            res.null_rhos.push_back(*draws[rep]);
        } else {
            ++res.failed;
        }
    }
    res.p_value = permutation_p_value(actual->rho, res.null_rhos, cfg.tail);
    res.actual_significant = actual->p_value <= cfg.alpha;
    res.significant_nontrivial = res.actual_significant && res.p_value <= cfg.alpha;
    return res;
}

/// Linear-interpolation quantile of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InsufficientData("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace ldc
