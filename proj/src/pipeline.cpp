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

#include "secrel/pipeline.hpp"

#include <algorithm>

#include "secrel/error.hpp"
#include "secrel/fim.hpp"
#include "secrel/io.hpp"
#include "secrel/relations.hpp"

namespace secrel::pipeline {

Engine parse_engine(std::string_view name) {
    if (name == "fim") {
        return Engine::Fim;
    }
    if (name == "pearson") {
        return Engine::Pearson;
    }
    if (name == "kendall") {
        return Engine::Kendall;
    }
    if (name == "spearman") {
        return Engine::Spearman;
    }
    if (name == "als") {
        return Engine::Als;
    }
    throw Error("unknown engine '" + std::string(name) + "' (expected fim, pearson, kendall, spearman or als)");
}

std::string_view engine_name(Engine engine) {
    switch (engine) {
        case Engine::Fim:
            return "fim";
        case Engine::Pearson:
            return "pearson";
        case Engine::Kendall:
            return "kendall";
        case Engine::Spearman:
            return "spearman";
        case Engine::Als:
            return "als";
    }
    return "unknown";
}

std::size_t resolve_min_support(std::string_view text, std::size_t n_records) {
    text = io::trim(text);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = io::parse_double(text.substr(0, slash), "min_support numerator");
        const double den = io::parse_double(text.substr(slash + 1), "min_support denominator");
        if (!(den > 0.0)) {
            throw Error("min_support ratio needs a positive denominator");
        }
        return fim::absolute_support(num / den, n_records);
    }
    if (text.find_first_of(".eE") != std::string_view::npos) {
        return fim::absolute_support(io::parse_double(text, "min_support"), n_records);
    }
    const auto absolute = io::parse_integer(text, "min_support");
    if (absolute < 1) {
        throw Error("min_support must be at least 1");
    }
    return static_cast<std::size_t>(absolute);
}

RelationSet extract_relations(const TransactionDatabase& db, Engine engine, const EngineParams& params) {
    switch (engine) {
        case Engine::Fim: {
            const auto min_support = resolve_min_support(params.min_support, db.n_companies());
            const auto frequent = fim::mine_frequent(db, min_support, params.exec);
            return relations::relations_from_fim(fim::pair_supports(frequent), params.k);
        }
        case Engine::Pearson:
        case Engine::Kendall:
        case Engine::Spearman: {
            cf::SimilarityOptions options;
            options.measure = engine == Engine::Pearson   ? cf::Measure::Pearson
                              : engine == Engine::Kendall ? cf::Measure::Kendall
                                                          : cf::Measure::Spearman;
            options.kendall = params.kendall;
            const auto sim = cf::item_similarity_matrix(cf::build_ratings(db), options, params.exec);
            return relations::relations_from_similarity(sim, params.k);
        }
        case Engine::Als: {
            const auto augmented = augment_with_singletons(db);
            auto options = params.als;
            options.exec = params.exec;
            options.factors = std::min(options.factors, std::min(augmented.db.n_sectors(), augmented.db.n_companies()));
            const auto model = cf::als_factorize(cf::build_ratings(augmented.db), options);
            return relations::relations_from_recommendations(
                relations::recommend_for_singletons(model, augmented), augmented.singleton_of_sector, params.k);
        }
    }
    throw Error("unhandled engine");
}

}  // namespace secrel::pipeline
