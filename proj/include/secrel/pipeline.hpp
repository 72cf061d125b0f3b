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
#include <string>
#include <string_view>

#include "secrel/cf.hpp"
#include "secrel/dataset.hpp"
#include "secrel/parallel.hpp"
#include "secrel/relation_set.hpp"

namespace secrel::pipeline {

enum class Engine { Fim, Pearson, Kendall, Spearman, Als };

Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine engine);

struct EngineParams {
    /// Absolute count ("40"), fraction ("0.0005") or ratio ("2/3").
    std::string min_support = "0.0005";
    std::size_t k = 10;
    cf::KendallVariant kendall = cf::KendallVariant::TauA;
    cf::AlsOptions als;  // factors is capped at min(M, N) of the augmented data
    Exec exec = Exec::Parallel;
};

/// Resolves a min-support value against N records. Fractions and ratios are
/// relative: ceil(fraction * N).
std::size_t resolve_min_support(std::string_view text, std::size_t n_records);

/// Runs one engine end to end and returns its top-K relations.
///  fim: negFIN -> 2-itemset supports -> per-source top K.
///  pearson/kendall/spearman: item-item similarity on Y -> per-source top K.
///  als: singleton augmentation -> ALS on Y -> top K predictions per
///       synthetic company.
RelationSet extract_relations(const TransactionDatabase& db, Engine engine, const EngineParams& params);

}  // namespace secrel::pipeline
