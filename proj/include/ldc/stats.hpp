// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "ldc/error.hpp"
#include "ldc/format.hpp"

namespace ldc {

using OptionalSeries = std::span<const std::optional<double>>;

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman's rho as the Pearson correlation of average ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("spearman: series lengths differ");
    if (x.size() < 3) throw InsufficientData("spearman needs at least 3 pairs");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

struct Correlation {
    double rho = 0.0;
    std::size_t n = 0;
};

/// Spearman over the pairs where both sides are present.
inline Correlation spearman(OptionalSeries x, OptionalSeries y) {
    if (x.size() != y.size()) throw Error("spearman: series lengths differ");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            a.push_back(*x[i]);
            b.push_back(*y[i]);
        }
    }
    return {spearman(a, b), a.size()};
}

/// Two-sided p-value of rho under the t approximation with n - 2 df.
inline double spearman_p_value(double rho, std::size_t n) {
    if (n < 3) return std::numeric_limits<double>::quiet_NaN();
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = std::abs(rho) * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

/// Indices kept after dropping every observation lying more than k population
/// SDs from the mean on either series. Observations missing either side are
/// dropped first; mean and SD come from the remaining set in one pass. A
/// series with SD 0 excludes nothing.
inline std::vector<std::size_t> exclude_outliers(OptionalSeries x, OptionalSeries y, double k = 2.5) {
    if (x.size() != y.size()) throw Error("exclude_outliers: series lengths differ");
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) present.push_back(i);
    }
    if (present.size() < 2) throw InsufficientData("outlier exclusion needs at least 2 observations");

    auto band = [&](OptionalSeries s) {
        double mean = 0.0;
        for (auto i : present) mean += *s[i];
        mean /= static_cast<double>(present.size());
        double var = 0.0;
        for (auto i : present) var += (*s[i] - mean) * (*s[i] - mean);
        const double sd = std::sqrt(var / static_cast<double>(present.size()));
        return std::pair{mean, sd};
    };
    const auto [mx, sx] = band(x);
    const auto [my, sy] = band(y);
    auto inside = [k](double v, double mean, double sd) { return sd == 0.0 || std::abs(v - mean) <= k * sd; };

    std::vector<std::size_t> kept;
    for (auto i : present) {
        if (inside(*x[i], mx, sx) && inside(*y[i], my, sy)) kept.push_back(i);
    }
    return kept;
}

/// Single-series convenience: indices of values within k SDs of the mean.
inline std::vector<std::size_t> exclude_outliers(OptionalSeries x, double k = 2.5) {
    return exclude_outliers(x, x, k);
}

struct PairCorrelation {
    double rho = 0.0;
    std::size_t n = 0;       ///< observations after exclusion
    double p_value = 0.0;    ///< parametric, two-sided
};

/// Outlier exclusion followed by Spearman; nullopt when the correlation is undefined.
inline std::optional<PairCorrelation> correlate(OptionalSeries x, OptionalSeries y, double k = 2.5) {
    try {
        const auto kept = exclude_outliers(x, y, k);
        std::vector<double> a, b;
        for (auto i : kept) {
            a.push_back(*x[i]);
            b.push_back(*y[i]);
        }
        const double rho = spearman(a, b);
        return PairCorrelation{rho, a.size(), spearman_p_value(rho, a.size())};
    } catch (const InsufficientData&) {
        return std::nullopt;
    } catch (const ZeroVariance&) {
        return std::nullopt;
    }
}

/// Symmetric variable-by-variable table of optional values.
struct SquareTable {
    std::vector<std::string> names;
    std::vector<std::optional<double>> values;

    explicit SquareTable(std::vector<std::string> n = {})
        : names(std::move(n)), values(names.size() * names.size()) {}

    std::size_t size() const noexcept { return names.size(); }
    std::optional<double>& at(std::size_t i, std::size_t j) { return values[i * names.size() + j]; }
    const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

/// Pairwise Spearman with per-pair exclusion. Unit diagonal.
inline SquareTable spearman_table(std::span<const std::string> names, std::span<const std::vector<std::optional<double>>> columns,
                                  double k = 2.5, SquareTable* counts = nullptr) {
    SquareTable t(std::vector<std::string>(names.begin(), names.end()));
    if (counts) *counts = SquareTable(t.names);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            if (auto c = correlate(columns[i], columns[j], k)) {
                t.at(i, j) = t.at(j, i) = c->rho;
                if (counts) counts->at(i, j) = counts->at(j, i) = static_cast<double>(c->n);
            }
        }
    }
    return t;
}

/// Element-wise 1 - |rho|; undefined entries stay undefined.
inline SquareTable correlation_distance(const SquareTable& rho) {
    SquareTable d(rho.names);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        for (std::size_t j = 0; j < rho.size(); ++j) {
            if (i == j) {
                d.at(i, j) = 0.0;
            } else if (const auto& r = rho.at(i, j)) {
                d.at(i, j) = 1.0 - std::abs(*r);
            }
        }
    }
    return d;
}

inline void write_square_table(std::ostream& out, const SquareTable& t) {
    out << "variable";
    for (const auto& n : t.names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << t.names[i];
        for (std::size_t j = 0; j < t.size(); ++j) out << ',' << format_g12(t.at(i, j));
        out << '\n';
    }
}

}  // namespace ldc
