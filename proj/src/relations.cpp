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

#include "secrel/relations.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "secrel/error.hpp"
#include "secrel/io.hpp"

namespace secrel::relations {

namespace {

bool ranks_before(const ScoredTarget& a, const ScoredTarget& b) {
    return a.score > b.score || (a.score == b.score && a.target < b.target);
}

std::string header_lines(const std::vector<std::string>& header) {
    std::string out;
    for (const auto& line : header) {
        out += "# " + line + "\n";
    }
    return out;
}

}  // namespace

void SimilarityScores::validate() const {
    for (const auto& [source, list] : lists) {
        std::set<SectorIndex> seen;
        for (const auto& entry : list) {
            if (entry.target == source) {
                throw Error("score list of sector " + std::to_string(source) + " contains itself");
            }
            if (!seen.insert(entry.target).second) {
                throw Error("score list of sector " + std::to_string(source) + " repeats a target");
            }
            if (!std::isfinite(entry.score)) {
                throw Error("score list of sector " + std::to_string(source) + " has a non-finite score");
            }
        }
    }
}

RelationSet topk_relations(const SimilarityScores& scores, std::size_t k) {
    if (k < 1) {
        throw Error("K must be at least 1");
    }
    scores.validate();
    RelationSet out;
    out.k = k;
    for (const auto& [source, list] : scores.lists) {
        std::vector<ScoredTarget> ranked = list;
        const auto keep = std::min(k, ranked.size());
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                          ranks_before);
        for (std::size_t r = 0; r < keep; ++r) {
            out.relations.push_back({source, ranked[r].target, r + 1, ranked[r].score});
        }
    }
    return out;
}

SimilarityScores scores_from_pairs(const fim::PairSupports& pairs) {
    SimilarityScores scores;
    for (const auto& [pair, support] : pairs) {
        const auto [a, b] = pair;
        if (a == b) {
            throw Error("pair support with identical sectors");
        }
        scores.lists[a].push_back({b, static_cast<double>(support)});
        scores.lists[b].push_back({a, static_cast<double>(support)});
    }
    return scores;
}

RelationSet relations_from_fim(const fim::PairSupports& pairs, std::size_t k) {
    return topk_relations(scores_from_pairs(pairs), k);
}

SimilarityScores scores_from_matrix(const cf::SimilarityMatrix& sim) {
    SimilarityScores scores;
    for (std::size_t i = 0; i < sim.size; ++i) {
        for (std::size_t j = 0; j < sim.size; ++j) {
            if (i != j && sim.is_defined(i, j)) {
                scores.lists[static_cast<SectorIndex>(i)].push_back({static_cast<SectorIndex>(j), sim.at(i, j)});
            }
        }
    }
    return scores;
}

RelationSet relations_from_similarity(const cf::SimilarityMatrix& sim, std::size_t k) {
    return topk_relations(scores_from_matrix(sim), k);
}

Recommendations recommend_for_singletons(const cf::FactorModel& model, const AugmentedDatabase& augmented) {
    Recommendations out;
    const std::size_t m = augmented.db.n_sectors();
    for (std::size_t s = 0; s < augmented.singleton_of_sector.size(); ++s) {
        auto& list = out[augmented.singleton_of_sector[s]];
        list.reserve(m);
        for (std::size_t target = 0; target < m; ++target) {
            list.push_back(
                {static_cast<SectorIndex>(target), cf::predict(model, target, augmented.singleton_column[s])});
        }
    }
    return out;
}

RelationSet relations_from_recommendations(const Recommendations& predictions,
                                           const std::vector<std::string>& singleton_of_sector, std::size_t k) {
    SimilarityScores scores;
    for (std::size_t s = 0; s < singleton_of_sector.size(); ++s) {
        auto it = predictions.find(singleton_of_sector[s]);
        if (it == predictions.end()) {
            throw Error("no predictions for synthetic company '" + singleton_of_sector[s] + "'");
        }
        auto& list = scores.lists[static_cast<SectorIndex>(s)];
        for (const auto& entry : it->second) {
            if (entry.target != s) {
                list.push_back(entry);
            }
        }
    }
    return topk_relations(scores, k);
}

RelationSet symmetrize(const RelationSet& relations, Symmetrize mode) {
    if (mode == Symmetrize::None) {
        return relations;
    }
    std::set<std::pair<SectorIndex, SectorIndex>> present;
    for (const auto& r : relations.relations) {
        present.insert({r.source, r.target});
    }
    std::map<std::pair<SectorIndex, SectorIndex>, Relation> merged;
    for (const auto& r : relations.relations) {
        const bool mirrored = present.contains({r.target, r.source});
        if (mode == Symmetrize::Intersection && !mirrored) {
            continue;
        }
        merged.emplace(std::make_pair(r.source, r.target), r);
        if (mode == Symmetrize::Union && !mirrored) {
            merged.emplace(std::make_pair(r.target, r.source), Relation{r.target, r.source, 0, r.score});
        }
    }
    std::map<SectorIndex, std::vector<ScoredTarget>> by_source;
    for (const auto& [key, r] : merged) {
        by_source[key.first].push_back({r.target, r.score});
    }
    RelationSet out;
    out.k = relations.k;
    for (auto& [source, list] : by_source) {
        std::sort(list.begin(), list.end(), ranks_before);
        for (std::size_t r = 0; r < list.size(); ++r) {
            out.relations.push_back({source, list[r].target, r + 1, list[r].score});
        }
    }
    return out;
}

SimilarityScores scores_from_relations(const RelationSet& relations) {
    SimilarityScores scores;
    for (const auto& r : relations.relations) {
        scores.lists[r.source].push_back({r.target, r.score});
    }
    return scores;
}

LabelingCandidates candidate_pairs_for_labeling(const std::vector<SimilarityScores>& models, double threshold) {
    if (models.empty()) {
        throw Error("candidate generation needs at least one model output");
    }
    LabelingCandidates out;
    std::map<std::pair<SectorIndex, SectorIndex>, Candidate> pairs;
    for (std::size_t m = 0; m < models.size(); ++m) {
        models[m].validate();
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& [source, list] : models[m].lists) {
            for (const auto& entry : list) {
                lo = std::min(lo, entry.score);
                hi = std::max(hi, entry.score);
            }
        }
        const bool degenerate = !(hi > lo);
        if (degenerate) {
            out.warnings.push_back("model " + std::to_string(m) +
                                   " has constant scores; it contributes 0 to every pair");
        }
        for (const auto& [source, list] : models[m].lists) {
            for (const auto& entry : list) {
                auto& candidate = pairs[{source, entry.target}];
                candidate.source = source;
                candidate.target = entry.target;
                const double normalized = degenerate ? 0.0 : (entry.score - lo) / (hi - lo);
                candidate.combined += normalized;
                candidate.strongest = std::max(candidate.strongest, normalized);
            }
        }
    }
    const double n_models = static_cast<double>(models.size());
    for (auto& [key, candidate] : pairs) {
        candidate.combined /= n_models;
        if (candidate.combined >= threshold) {
            out.pairs.push_back(candidate);
        }
    }
    // `pairs` is keyed by (source, target), so equal scores keep that order.
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const Candidate& a, const Candidate& b) { return a.combined > b.combined; });
    return out;
}

std::string format_relations(const RelationSet& relations, const SectorCatalog& catalog,
                             const std::vector<std::string>& header) {
    std::string out = header_lines(header);
    for (const auto& r : relations.relations) {
        out += catalog.id(r.source) + "\t" + catalog.id(r.target) + "\t" + std::to_string(r.rank) + "\t" +
               io::format_double(r.score) + "\n";
    }
    return out;
}

RelationSet parse_relations(std::string_view text, SectorCatalog& catalog) {
    RelationSet out;
    std::map<SectorIndex, std::size_t> degree;
    for (const auto& row : io::read_tsv(text)) {
        const auto where = "line " + std::to_string(row.line) + ": ";
        if (row.fields.size() < 4) {
            throw Error(where + "expected source, target, rank, score");
        }
        Relation r;
        r.source = catalog.intern(row.fields[0]);
        r.target = catalog.intern(row.fields[1]);
        const auto rank = io::parse_integer(row.fields[2], "rank");
        if (rank < 1) {
            throw Error(where + "rank must be positive");
        }
        r.rank = static_cast<std::size_t>(rank);
        r.score = io::parse_double(row.fields[3], "score");
        if (r.source == r.target) {
            throw Error(where + "self relation");
        }
        out.k = std::max(out.k, ++degree[r.source]);
        out.relations.push_back(r);
    }
    std::stable_sort(out.relations.begin(), out.relations.end(), [](const Relation& a, const Relation& b) {
        return a.source < b.source || (a.source == b.source && a.rank < b.rank);
    });
    return out;
}

std::string format_candidates(const LabelingCandidates& candidates, const SectorCatalog& catalog,
                              const std::vector<std::string>& header) {
    std::string out = header_lines(header);
    for (std::size_t r = 0; r < candidates.pairs.size(); ++r) {
        const auto& c = candidates.pairs[r];
        out += catalog.id(c.source) + "\t" + catalog.id(c.target) + "\t" + std::to_string(r + 1) + "\t" +
               io::format_double(c.strongest) + "\t" + io::format_double(c.combined) + "\n";
    }
    return out;
}

}  // namespace secrel::relations
