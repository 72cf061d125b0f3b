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


// Serial versus OpenMP kernels on a planted-block corpus.

#include <benchmark/benchmark.h>

#include "secrel/cf.hpp"
#include "secrel/dataset.hpp"
#include "secrel/fim.hpp"

namespace {

using namespace secrel;

const SyntheticCorpus& corpus() {
    static const SyntheticCorpus data = [] {
        SyntheticConfig config;
        config.n_blocks = 20;
        config.sectors_per_block = 8;
        config.n_companies = 20000;
        config.size_weights = {0.3, 0.3, 0.2, 0.1, 0.05, 0.05};
        return generate_synthetic(config, 1);
    }();
    return data;
}

Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Exec::Serial : Exec::Parallel;
}

void BM_MineFrequent(benchmark::State& state) {
    const auto& db = corpus().db;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fim::mine_frequent(db, 5, exec_of(state)));
    }
}
BENCHMARK(BM_MineFrequent)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SimilarityMatrix(benchmark::State& state) {
    const auto ratings = cf::build_ratings(corpus().db);
    const auto measure = static_cast<cf::Measure>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf::item_similarity_matrix(ratings, {measure}, exec_of(state)));
    }
}
BENCHMARK(BM_SimilarityMatrix)->ArgsProduct({{0, 1}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_Als(benchmark::State& state) {
    const auto ratings = cf::build_ratings(augment_with_singletons(corpus().db).db);
    cf::AlsOptions options;
    options.factors = 32;
    options.iterations = 5;
    options.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf::als_factorize(ratings, options));
    }
}
BENCHMARK(BM_Als)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
