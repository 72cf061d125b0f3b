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
#include <set>

#include "secrel/error.hpp"
#include "secrel/fim.hpp"

namespace secrel::fim {

namespace {

bool contains_all(const std::vector<SectorIndex>& record, const std::vector<SectorIndex>& items) {
    return std::includes(record.begin(), record.end(), items.begin(), items.end());
}

}  // namespace

std::vector<FrequentItemset> mine_frequent_naive(const TransactionDatabase& db, std::size_t min_support,
                                                 std::size_t max_items) {
    if (min_support < 1) {
        throw Error("min_support must be at least 1");
    }
    std::set<SectorIndex> used;
    for (const auto& record : db.records()) {
        used.insert(record.sectors.begin(), record.sectors.end());
    }
    if (used.size() > max_items) {
        throw Error("naive miner refuses " + std::to_string(used.size()) + " distinct items (limit " +
                    std::to_string(max_items) + ")");
    }

    auto count = [&](const std::vector<SectorIndex>& items) {
        std::size_t support = 0;
        for (const auto& record : db.records()) {
            support += contains_all(record.sectors, items) ? 1 : 0;
        }
        return support;
    };

    std::vector<FrequentItemset> result;
    std::vector<std::vector<SectorIndex>> level;
    for (auto item : used) {
        std::vector<SectorIndex> single{item};
        if (auto support = count(single); support >= min_support) {
            result.push_back({single, support});
            level.push_back(std::move(single));
        }
    }
    while (!level.empty()) {
        const std::set<std::vector<SectorIndex>> previous(level.begin(), level.end());
        std::vector<std::vector<SectorIndex>> next;
        for (std::size_t a = 0; a < level.size(); ++a) {
            for (std::size_t b = a + 1; b < level.size(); ++b) {
                if (!std::equal(level[a].begin(), level[a].end() - 1, level[b].begin())) {
                    continue;
                }
                auto candidate = level[a];
                candidate.push_back(level[b].back());
                std::sort(candidate.begin(), candidate.end());
                bool closed = true;
                for (std::size_t drop = 0; drop < candidate.size() && closed; ++drop) {
                    auto subset = candidate;
                    subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
                    closed = previous.contains(subset);
                }
                if (!closed) {
                    continue;
                }
                if (auto support = count(candidate); support >= min_support) {
                    result.push_back({candidate, support});
                    next.push_back(std::move(candidate));
                }
            }
        }
        std::sort(next.begin(), next.end());
        level = std::move(next);
    }
    std::sort(result.begin(), result.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
        if (a.support != b.support) {
            return a.support > b.support;
        }
        return a.items < b.items;
    });
    return result;
}

std::size_t absolute_support(double fraction, std::size_t n_records) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw Error("relative min_support must lie in (0, 1]");
    }
    // The slack absorbs representation error, e.g. (2/3) * 3.
    const double scaled = fraction * static_cast<double>(n_records);
    const auto absolute = static_cast<std::size_t>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
    return std::max<std::size_t>(1, absolute);
}

PairSupports pair_supports(const std::vector<FrequentItemset>& frequent) {
    PairSupports pairs;
    for (const auto& itemset : frequent) {
        if (itemset.items.size() == 2) {
            pairs[{std::min(itemset.items[0], itemset.items[1]), std::max(itemset.items[0], itemset.items[1])}] =
                itemset.support;
        }
    }
    return pairs;
}

std::string format_itemsets(const std::vector<FrequentItemset>& frequent, const SectorCatalog& catalog) {
    std::string out;
    for (const auto& itemset : frequent) {
        for (std::size_t k = 0; k < itemset.items.size(); ++k) {
            if (k > 0) {
                out.push_back(',');
            }
            out += catalog.id(itemset.items[k]);
        }
        out += "\t" + std::to_string(itemset.support) + "\n";
    }
    return out;
}

std::string format_pair_supports(const PairSupports& pairs, const SectorCatalog& catalog) {
    std::vector<std::pair<std::pair<SectorIndex, SectorIndex>, std::size_t>> rows(pairs.begin(), pairs.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out;
    for (const auto& [pair, support] : rows) {
        out += catalog.id(pair.first) + "\t" + catalog.id(pair.second) + "\t" + std::to_string(support) + "\n";
    }
    return out;
}

}  // namespace secrel::fim
