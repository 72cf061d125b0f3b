// Copyright 2026-present the secrel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "secrel/cf.hpp"
#include "secrel/error.hpp"

namespace secrel::cf {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error("rating vectors differ in length");
    }
    if (x.size() < 2) {
        throw Error("rank correlation needs at least two ratings");
    }
}

double clamp_unit(double value) {
    return std::clamp(value, -1.0, 1.0);
}

// Sum of t(t-1)/2 over runs of equal values in a sorted sequence.
template <typename Equal>
std::int64_t tied_pairs(std::size_t n, Equal equal) {
    std::int64_t ties = 0;
    std::size_t run = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k < n && equal(k - 1, k)) {
            ++run;
        } else {
            ties += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
            run = 1;
        }
    }
    return ties;
}

// Sorts `values` ascending, returning the number of strictly inverted pairs.
std::int64_t merge_count(std::vector<double>& values, std::vector<double>& scratch, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) {
        return 0;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = merge_count(values, scratch, lo, mid) + merge_count(values, scratch, mid, hi);
    std::size_t left = lo;
    std::size_t right = mid;
    std::size_t out = lo;
    while (left < mid && right < hi) {
        if (values[right] < values[left]) {
            swaps += static_cast<std::int64_t>(mid - left);
            scratch[out++] = values[right++];
        } else {
            scratch[out++] = values[left++];
        }
    }
    while (left < mid) {
        scratch[out++] = values[left++];
    }
    while (right < hi) {
        scratch[out++] = values[right++];
    }
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              values.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

}  // namespace

std::string_view measure_name(Measure measure) {
    switch (measure) {
        case Measure::Pearson:
            return "pearson";
        case Measure::Kendall:
            return "kendall";
        case Measure::Spearman:
            return "spearman";
    }
    return "unknown";
}

Measure parse_measure(std::string_view name) {
    if (name == "pearson") {
        return Measure::Pearson;
    }
    if (name == "kendall") {
        return Measure::Kendall;
    }
    if (name == "spearman") {
        return Measure::Spearman;
    }
    throw Error("unknown similarity measure '" + std::string(name) + "'");
}

std::optional<double> adjusted_cosine(std::span<const double> item_i, std::span<const double> item_j,
                                      std::span<const double> user_mean) {
    if (item_i.size() != item_j.size() || item_i.size() != user_mean.size()) {
        throw Error("rating vectors differ in length");
    }
    double cross = 0.0;
    double norm_i = 0.0;
    double norm_j = 0.0;
    std::size_t common = 0;
    for (std::size_t u = 0; u < item_i.size(); ++u) {
        if (std::isnan(item_i[u]) || std::isnan(item_j[u])) {
            continue;
        }
        const double di = item_i[u] - user_mean[u];
        const double dj = item_j[u] - user_mean[u];
        cross += di * dj;
        norm_i += di * di;
        norm_j += dj * dj;
        ++common;
    }
    if (common == 0 || norm_i == 0.0 || norm_j == 0.0) {
        return std::nullopt;
    }
    return clamp_unit(cross / (std::sqrt(norm_i) * std::sqrt(norm_j)));
}

std::optional<double> pearson_similarity(const RatingsMatrix& ratings, SectorIndex i, SectorIndex j) {
    const std::size_t n = ratings.n_companies();
    const double m = static_cast<double>(ratings.n_sectors());
    std::vector<double> mean(n);
    for (std::size_t u = 0; u < n; ++u) {
        mean[u] = static_cast<double>(ratings.column(u).size()) / m;
    }
    const auto row_i = ratings.dense_row(i);
    const auto row_j = ratings.dense_row(j);
    return adjusted_cosine(row_i, row_j, mean);
}

double kendall_tau(std::span<const double> x, std::span<const double> y, KendallVariant variant) {
    check_pair(x, y);
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });
    const std::int64_t ties_x = tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[order[a]] == x[order[b]]; });
    const std::int64_t ties_xy = tied_pairs(n, [&](std::size_t a, std::size_t b) {
        return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
    });
    std::vector<double> ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        ys[k] = y[order[k]];
    }
    std::vector<double> scratch(n);
    // Within an x-tie run y is ascending, so every strict inversion is a
    // discordant pair.
    const std::int64_t discordant = merge_count(ys, scratch, 0, n);
    const std::int64_t ties_y = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
    const std::int64_t all_pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    const std::int64_t concordant = all_pairs - ties_x - ties_y + ties_xy - discordant;
    const double numerator = static_cast<double>(concordant - discordant);
    if (variant == KendallVariant::TauA) {
        return numerator / static_cast<double>(all_pairs);
    }
    const double denom = std::sqrt(static_cast<double>(all_pairs - ties_x)) *
                         std::sqrt(static_cast<double>(all_pairs - ties_y));
    if (denom == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return clamp_unit(numerator / denom);
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] == values[order[start]]) {
            ++end;
        }
        // positions start+1 .. end share their mean
        const double rank = static_cast<double>(start + 1 + end) / 2.0;
        for (std::size_t k = start; k < end; ++k) {
            ranks[order[k]] = rank;
        }
        start = end;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < rx.size(); ++k) {
        const double d = rx[k] - ry[k];
        sum_sq += d * d;
    }
    const double n = static_cast<double>(x.size());
    return clamp_unit(1.0 - 6.0 * sum_sq / (n * (n * n - 1.0)));
}

}  // namespace secrel::cf
