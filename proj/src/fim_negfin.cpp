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

// negFIN frequent itemset mining.
//
// Items are ranked by descending support (ties by sector index) and every
// transaction is inserted into a prefix tree in rank order. Each tree node
// carries a bitmap code: the set of ranks on its root path. The Nodeset of
// an item is the list of tree nodes labelled with it.
//
// Mining runs one set-enumeration subtree per item x. Extensions of x only
// use items ranked before x, so the base item of every itemset in the
// subtree is x and every transaction containing x is represented by exactly
// one node in Nodeset(x). The NegNodeset of an itemset P u {b} (relative to
// its parent P) is the set of nodes of x whose path holds P \ {x} but not b;
// its support is support(P) minus the node counts of that set. For siblings
// P u {a} and P u {b}:
//
//     NegNodeset(P u {a, b}) = { N in NegNodeset(P u {b}) : a in bitmap(N) }
//
// which costs one pass over a (typically short) NegNodeset. An extension
// whose support equals its parent's is promoted: it is left out of the tree
// and every itemset of the subtree is reported with all subsets of the
// promoted items appended.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "secrel/error.hpp"
#include "secrel/fim.hpp"

namespace secrel::fim {

namespace {

using Rank = std::uint32_t;
using NodeId = std::uint32_t;

class BmcTree {
public:
    BmcTree(const TransactionDatabase& db, const std::vector<Rank>& rank_of_sector, std::size_t n_ranks)
        : words_((n_ranks + 63) / 64), nodesets_(n_ranks) {
        counts_.push_back(0);
        bits_.assign(words_, 0);
        std::unordered_map<std::uint64_t, NodeId> children;
        std::vector<Rank> path;
        for (const auto& record : db.records()) {
            path.clear();
            for (auto sector : record.sectors) {
                if (rank_of_sector[sector] != kInfrequent) {
                    path.push_back(rank_of_sector[sector]);
                }
            }
            std::sort(path.begin(), path.end());
            NodeId node = 0;
            for (auto rank : path) {
                const auto key = (static_cast<std::uint64_t>(node) << 32) | rank;
                auto it = children.find(key);
                if (it == children.end()) {
                    const auto child = static_cast<NodeId>(counts_.size());
                    counts_.push_back(0);
                    bits_.resize(bits_.size() + words_);
                    std::copy_n(bits_.begin() + static_cast<std::ptrdiff_t>(node * words_), words_,
                                bits_.begin() + static_cast<std::ptrdiff_t>(child * words_));
                    bits_[child * words_ + rank / 64] |= std::uint64_t{1} << (rank % 64);
                    nodesets_[rank].push_back(child);
                    it = children.emplace(key, child).first;
                }
                node = it->second;
                ++counts_[node];
            }
        }
    }

    static constexpr Rank kInfrequent = UINT32_MAX;

    bool holds(NodeId node, Rank rank) const {
        return (bits_[node * words_ + rank / 64] >> (rank % 64)) & 1U;
    }
    std::size_t count(NodeId node) const {
        return counts_[node];
    }
    const std::vector<NodeId>& nodeset(Rank rank) const {
        return nodesets_[rank];
    }

private:
    std::size_t words_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::vector<NodeId>> nodesets_;
};

struct Extension {
    Rank item;
    std::size_t support;
    std::vector<NodeId> neg;  // NegNodeset relative to the parent itemset
};

class SubtreeMiner {
public:
    SubtreeMiner(const BmcTree& tree, const std::vector<SectorIndex>& sector_of_rank, std::size_t min_support,
                 std::vector<FrequentItemset>& out)
        : tree_(tree), sector_of_rank_(sector_of_rank), min_support_(min_support), out_(out) {}

    void mine(Rank base, std::size_t base_support) {
        std::vector<Rank> itemset{base};
        std::vector<Rank> promoted;
        std::vector<Extension> kids;
        const auto& nodes = tree_.nodeset(base);
        for (Rank y = 0; y < base; ++y) {
            Extension ext{y, base_support, {}};
            for (auto node : nodes) {
                if (!tree_.holds(node, y)) {
                    ext.neg.push_back(node);
                    ext.support -= tree_.count(node);
                }
            }
            classify(std::move(ext), base_support, promoted, kids);
        }
        emit(itemset, base_support, promoted);
        expand(itemset, kids, promoted);
    }

private:
    void classify(Extension ext, std::size_t parent_support, std::vector<Rank>& promoted,
                  std::vector<Extension>& kids) const {
        if (ext.support == parent_support) {
            promoted.push_back(ext.item);
        } else if (ext.support >= min_support_) {
            kids.push_back(std::move(ext));
        }
    }

    void expand(std::vector<Rank>& itemset, const std::vector<Extension>& kids,
                const std::vector<Rank>& parent_promoted) {
        for (std::size_t i = 0; i < kids.size(); ++i) {
            const auto& kid = kids[i];
            itemset.push_back(kid.item);
            std::vector<Rank> promoted = parent_promoted;
            std::vector<Extension> grandkids;
            for (std::size_t j = i + 1; j < kids.size(); ++j) {
                Extension ext{kids[j].item, kid.support, {}};
                for (auto node : kids[j].neg) {
                    if (tree_.holds(node, kid.item)) {
                        ext.neg.push_back(node);
                        ext.support -= tree_.count(node);
                    }
                }
                classify(std::move(ext), kid.support, promoted, grandkids);
            }
            emit(itemset, kid.support, promoted);
            expand(itemset, grandkids, promoted);
            itemset.pop_back();
        }
    }

    void emit(const std::vector<Rank>& itemset, std::size_t support, const std::vector<Rank>& promoted) {
        const std::size_t subsets = std::size_t{1} << promoted.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            FrequentItemset result;
            result.support = support;
            for (auto rank : itemset) {
                result.items.push_back(sector_of_rank_[rank]);
            }
            for (std::size_t p = 0; p < promoted.size(); ++p) {
                if ((mask >> p) & 1U) {
                    result.items.push_back(sector_of_rank_[promoted[p]]);
                }
            }
            std::sort(result.items.begin(), result.items.end());
            out_.push_back(std::move(result));
        }
    }

    const BmcTree& tree_;
    const std::vector<SectorIndex>& sector_of_rank_;
    std::size_t min_support_;
    std::vector<FrequentItemset>& out_;
};

}  // namespace

std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, std::size_t min_support, Exec exec) {
    if (min_support < 1) {
        throw Error("min_support must be at least 1");
    }
    const std::size_t m = db.n_sectors();
    std::vector<std::size_t> item_support(m, 0);
    for (const auto& record : db.records()) {
        for (auto sector : record.sectors) {
            ++item_support[sector];
        }
    }
    std::vector<SectorIndex> sector_of_rank;
    for (SectorIndex s = 0; s < m; ++s) {
        if (item_support[s] >= min_support) {
            sector_of_rank.push_back(s);
        }
    }
    std::stable_sort(sector_of_rank.begin(), sector_of_rank.end(),
                     [&](SectorIndex a, SectorIndex b) { return item_support[a] > item_support[b]; });
    std::vector<Rank> rank_of_sector(m, BmcTree::kInfrequent);
    for (Rank r = 0; r < sector_of_rank.size(); ++r) {
        rank_of_sector[sector_of_rank[r]] = r;
    }

    const BmcTree tree(db, rank_of_sector, sector_of_rank.size());
    const auto n_ranks = static_cast<std::ptrdiff_t>(sector_of_rank.size());
    std::vector<std::vector<FrequentItemset>> per_base(sector_of_rank.size());

#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (std::ptrdiff_t r = 0; r < n_ranks; ++r) {
        SubtreeMiner miner(tree, sector_of_rank, min_support, per_base[static_cast<std::size_t>(r)]);
        miner.mine(static_cast<Rank>(r), item_support[sector_of_rank[static_cast<std::size_t>(r)]]);
    }

    std::vector<FrequentItemset> result;
    for (auto& part : per_base) {
        std::move(part.begin(), part.end(), std::back_inserter(result));
    }
    std::sort(result.begin(), result.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
        if (a.support != b.support) {
            return a.support > b.support;
        }
        return a.items < b.items;
    });
    return result;
}

}  // namespace secrel::fim
