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

// Definitional reference implementations used only by tests. They follow
// the textbook definitions directly (pair enumeration, rank counting,
// explicit subset enumeration) and share no code with the library kernels.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "secrel/dataset.hpp"
#include "secrel/fim.hpp"

namespace secrel::oracle {

inline double kendall_by_pairs(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long long concordant = 0;
    long long discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (x[i] < x[j] && y[i] < y[j]) {
                ++concordant;
            }
            if (x[i] < x[j] && y[i] > y[j]) {
                ++discordant;
            }
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(concordant - discordant) / pairs;
}

inline std::vector<double> ranks_by_counting(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t below = 0;
        std::size_t equal = 0;
        for (double other : v) {
            below += other < v[i] ? 1 : 0;
            equal += other == v[i] ? 1 : 0;
        }
        ranks[i] = static_cast<double>(below) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return ranks;
}

inline double spearman_by_ranks(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks_by_counting(x);
    const auto ry = ranks_by_counting(y);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double d = rx[i] - ry[i];
        sum += d * d;
    }
    const long double n = static_cast<long double>(x.size());
    return static_cast<double>(1.0L - 6.0L * sum / (n * (n * n - 1.0L)));
}

/// Adjusted cosine: materialises com(i, j), then evaluates the quotient.
/// NaN marks an unrated entry.
inline std::optional<double> pearson_eq2(const std::vector<double>& ri, const std::vector<double>& rj,
                                         const std::vector<double>& user_mean) {
    std::vector<std::size_t> common;
    for (std::size_t u = 0; u < ri.size(); ++u) {
        if (!std::isnan(ri[u]) && !std::isnan(rj[u])) {
            common.push_back(u);
        }
    }
    if (common.empty()) {
        return std::nullopt;
    }
    long double numerator = 0.0L;
    long double left = 0.0L;
    long double right = 0.0L;
    for (auto u : common) {
        const long double a = static_cast<long double>(ri[u]) - user_mean[u];
        const long double b = static_cast<long double>(rj[u]) - user_mean[u];
        numerator += a * b;
        left += a * a;
        right += b * b;
    }
    if (left == 0.0L || right == 0.0L) {
        return std::nullopt;
    }
    return static_cast<double>(numerator / (std::sqrt(left) * std::sqrt(right)));
}

/// Counts every non-empty subset of every record.
inline std::map<std::vector<SectorIndex>, std::size_t> subset_supports(const TransactionDatabase& db) {
    std::map<std::vector<SectorIndex>, std::size_t> counts;
    for (const auto& record : db.records()) {
        const auto& s = record.sectors;
        const std::uint64_t subsets = std::uint64_t{1} << s.size();
        for (std::uint64_t mask = 1; mask < subsets; ++mask) {
            std::vector<SectorIndex> items;
            for (std::size_t b = 0; b < s.size(); ++b) {
                if ((mask >> b) & 1U) {
                    items.push_back(s[b]);
                }
            }
            ++counts[items];
        }
    }
    return counts;
}

inline std::map<std::vector<SectorIndex>, std::size_t> frequent_by_enumeration(const TransactionDatabase& db,
                                                                              std::size_t min_support) {
    auto counts = subset_supports(db);
    std::erase_if(counts, [&](const auto& entry) { return entry.second < min_support; });
    return counts;
}

inline std::map<std::vector<SectorIndex>, std::size_t> as_map(const std::vector<fim::FrequentItemset>& list) {
    std::map<std::vector<SectorIndex>, std::size_t> out;
    for (const auto& f : list) {
        out[f.items] = f.support;
    }
    return out;
}

/// Random database over item ids "i0".."i{n_items-1}"; record lengths in
/// [1, max_length].
inline TransactionDatabase random_database(std::mt19937_64& rng, std::size_t n_items, std::size_t n_records,
                                           std::size_t max_length) {
    DatabaseBuilder builder;
    std::uniform_int_distribution<std::size_t> length(1, std::min(max_length, n_items));
    std::uniform_int_distribution<std::size_t> item(0, n_items - 1);
    for (std::size_t r = 0; r < n_records; ++r) {
        const auto len = length(rng);
        std::vector<std::string> ids;
        for (std::size_t k = 0; k < len; ++k) {
            ids.push_back("i" + std::to_string(item(rng)));
        }
        builder.add("r" + std::to_string(r), ids);
    }
    return std::move(builder).build();
}

}  // namespace secrel::oracle
