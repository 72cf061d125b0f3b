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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace secrel {

using SectorIndex = std::uint32_t;

/// One directed "s_source is similar to s_target" relation. `rank` is the
/// 1-based position of the target in the source's ranking.
struct Relation {
    SectorIndex source = 0;
    SectorIndex target = 0;
    std::size_t rank = 0;
    double score = 0.0;

    friend bool operator==(const Relation&, const Relation&) = default;
};

/// Directed binary relation R: a pair is related iff it is listed. Relations
/// are kept sorted by (source, rank).
struct RelationSet {
    std::vector<Relation> relations;
    std::size_t k = 0;

    bool contains(SectorIndex source, SectorIndex target) const {
        return std::any_of(relations.begin(), relations.end(), [&](const Relation& r) {
            return r.source == source && r.target == target;
        });
    }
    std::size_t out_degree(SectorIndex source) const {
        return static_cast<std::size_t>(std::count_if(
            relations.begin(), relations.end(), [&](const Relation& r) { return r.source == source; }));
    }
    std::size_t size() const {
        return relations.size();
    }

    friend bool operator==(const RelationSet&, const RelationSet&) = default;
};

}  // namespace secrel
