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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "secrel/dataset.hpp"
#include "secrel/parallel.hpp"

namespace secrel::fim {

struct FrequentItemset {
    std::vector<SectorIndex> items;  // sorted ascending
    std::size_t support = 0;

    friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

/// Unordered sector pair (first < second) -> support count.
using PairSupports = std::map<std::pair<SectorIndex, SectorIndex>, std::size_t>;

/// All itemsets with support >= min_support, via negFIN: a bitmap-coded
/// prefix tree over support-ordered items, NegNodeset-based support counting
/// on a set-enumeration tree, and promotion of items that never change the
/// support of their parent. Output is sorted by descending support, then
/// lexicographically by items. min_support above N yields an empty result.
///
/// With Exec::Parallel the first-level subtrees are mined concurrently; the
/// result is identical to the serial run.
std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, std::size_t min_support,
                                           Exec exec = Exec::Parallel);

/// Level-wise Apriori with direct containment counting. Correctness oracle
/// for small instances; refuses databases with more than `max_items`
/// distinct sectors in use.
std::vector<FrequentItemset> mine_frequent_naive(const TransactionDatabase& db, std::size_t min_support,
                                                 std::size_t max_items = 20);

/// Absolute threshold for a relative one: ceil(fraction * N), at least 1.
std::size_t absolute_support(double fraction, std::size_t n_records);

/// Keeps exactly the 2-itemsets.
PairSupports pair_supports(const std::vector<FrequentItemset>& frequent);

/// "item_1,...,item_k<TAB>support" rows, items as sector ids.
std::string format_itemsets(const std::vector<FrequentItemset>& frequent, const SectorCatalog& catalog);
/// "sector_i<TAB>sector_j<TAB>support" rows by descending support.
std::string format_pair_supports(const PairSupports& pairs, const SectorCatalog& catalog);

}  // namespace secrel::fim
