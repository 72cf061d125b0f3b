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
#include <string_view>
#include <vector>

#include "secrel/cf.hpp"
#include "secrel/dataset.hpp"
#include "secrel/fim.hpp"
#include "secrel/relation_set.hpp"

namespace secrel::relations {

struct ScoredTarget {
    SectorIndex target = 0;
    double score = 0.0;

    friend bool operator==(const ScoredTarget&, const ScoredTarget&) = default;
};

/// Per-source score lists. Sources without any scored target may be absent.
struct SimilarityScores {
    std::map<SectorIndex, std::vector<ScoredTarget>> lists;

    /// Throws Error on self-pairs, repeated targets or non-finite scores.
    void validate() const;
};

/// Marks, for every source, its K highest-scoring targets. Ties are broken by
/// ascending target index, so the result is fully deterministic.
RelationSet topk_relations(const SimilarityScores& scores, std::size_t k);

/// Each unordered pair feeds both directions with its support.
SimilarityScores scores_from_pairs(const fim::PairSupports& pairs);
RelationSet relations_from_fim(const fim::PairSupports& pairs, std::size_t k);

/// Off-diagonal defined entries only; undefined entries never rank.
SimilarityScores scores_from_matrix(const cf::SimilarityMatrix& sim);
RelationSet relations_from_similarity(const cf::SimilarityMatrix& sim, std::size_t k);

/// Synthetic company id -> predicted score for each sector.
using Recommendations = std::map<std::string, std::vector<ScoredTarget>>;

/// Scores every sector for each synthetic singleton company of `augmented`.
Recommendations recommend_for_singletons(const cf::FactorModel& model, const AugmentedDatabase& augmented);

/// R_ij = 1 iff sector j is among the top K predictions for the singleton
/// company of sector i, sector i itself excluded.
RelationSet relations_from_recommendations(const Recommendations& predictions,
                                           const std::vector<std::string>& singleton_of_sector, std::size_t k);

enum class Symmetrize { None, Union, Intersection };
RelationSet symmetrize(const RelationSet& relations, Symmetrize mode);

/// Rebuilds per-source score lists from extracted relations.
SimilarityScores scores_from_relations(const RelationSet& relations);

struct Candidate {
    SectorIndex source = 0;
    SectorIndex target = 0;
    double combined = 0.0;        // mean normalised score over all models
    double strongest = 0.0;       // max normalised score over all models
};

struct LabelingCandidates {
    std::vector<Candidate> pairs;  // descending combined score
    std::vector<std::string> warnings;
};

/// Min-max normalises each model's scores to [0, 1] and averages them per
/// ordered pair, a model that did not score the pair counting as 0. Pairs
/// with combined score >= threshold are returned. A model whose scores are
/// all equal contributes 0 everywhere and adds a warning.
LabelingCandidates candidate_pairs_for_labeling(const std::vector<SimilarityScores>& models, double threshold);

/// "source<TAB>target<TAB>rank<TAB>score" rows, sector ids from `catalog`.
/// `header` lines are written first as '#' comments.
std::string format_relations(const RelationSet& relations, const SectorCatalog& catalog,
                             const std::vector<std::string>& header = {});
/// Parses the relation export; unknown sector ids are interned into `catalog`.
RelationSet parse_relations(std::string_view text, SectorCatalog& catalog);

/// Relation columns plus the combined score:
/// "source<TAB>target<TAB>rank<TAB>strongest<TAB>combined".
std::string format_candidates(const LabelingCandidates& candidates, const SectorCatalog& catalog,
                              const std::vector<std::string>& header = {});

}  // namespace secrel::relations
