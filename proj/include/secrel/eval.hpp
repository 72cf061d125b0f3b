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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secrel/dataset.hpp"
#include "secrel/relation_set.hpp"

namespace secrel::eval {

/// Source sector id -> target sector ids, best first.
using RankedLists = std::map<std::string, std::vector<std::string>>;

/// Expert labels on ordered sector pairs. Pairs that were never labelled are
/// absent and count as non-relevant when scoring.
class GroundTruthLabels {
public:
    /// Throws Error if the pair already carries the opposite label.
    void set(const std::string& source, const std::string& target, bool relevant);

    bool is_relevant(const std::string& source, const std::string& target) const;
    std::size_t relevant_count(const std::string& source) const;
    /// Sources with at least one relevant target, ascending.
    std::vector<std::string> eligible_sources() const;
    std::size_t size() const {
        return labels_.size();
    }

private:
    std::map<std::pair<std::string, std::string>, bool> labels_;
    std::map<std::string, std::set<std::string>> relevant_;
};

/// "sector_i<TAB>sector_j<TAB>0|1" rows.
GroundTruthLabels parse_labels(std::string_view text);
std::string format_labels(const GroundTruthLabels& labels, const std::vector<std::pair<std::string, std::string>>& order);

/// Every listed relation becomes a relevant label.
GroundTruthLabels labels_from_relations(const RelationSet& relations, const SectorCatalog& catalog);

RankedLists ranked_from_relations(const RelationSet& relations, const SectorCatalog& catalog);
/// Reads the relation export format ("source<TAB>target<TAB>rank<TAB>score").
RankedLists parse_ranked(std::string_view text);

/// First K entries of each list score 1, the rest 0. Throws Error for K = 0.
std::map<std::string, std::vector<int>> binarize_top_k(const RankedLists& ranked, std::size_t k);

/// Macro averages over sources with at least one relevant label. Each throws
/// Error when no source is eligible.
double precision_at_k(const RankedLists& ranked, const GroundTruthLabels& labels, std::size_t k);
/// AP@K normalised by min(K, #relevant).
double map_at_k(const RankedLists& ranked, const GroundTruthLabels& labels, std::size_t k);
double mrr(const RankedLists& ranked, const GroundTruthLabels& labels);

struct NamedRanking {
    std::string name;
    RankedLists ranked;
};

struct ModelScores {
    std::string name;
    std::map<std::size_t, double> precision_at;
    std::map<std::size_t, double> map_at;
    double mrr = 0.0;
};

struct EvalReport {
    std::vector<std::size_t> ks;
    std::size_t binarize_k = 0;  // 0 = rankings used untruncated
    std::size_t coverage = 0;    // sources with >= 1 relevant label
    std::vector<ModelScores> models;
};

/// Scores every model at every K. Rankings are first cut to their top
/// `binarize_k` entries (the ones a binarised output marks 1), if set.
EvalReport evaluate(const std::vector<NamedRanking>& models, const GroundTruthLabels& labels,
                    const std::vector<std::size_t>& ks, std::optional<std::size_t> binarize_k = 10);

/// Tab-separated "model, P@K..., MAP@K..., MRR" table.
std::string format_report_table(const EvalReport& report);
std::string format_report_json(const EvalReport& report);
/// Long format "model<TAB>K<TAB>precision" for Precision@K curves.
std::string format_precision_curve(const EvalReport& report);
/// Model x K grid of MAP@K values.
std::string format_map_grid(const EvalReport& report);

}  // namespace secrel::eval
