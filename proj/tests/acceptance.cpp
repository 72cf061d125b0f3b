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


// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "secrel/cf.hpp"
#include "secrel/cli.hpp"
#include "secrel/eval.hpp"
#include "secrel/fim.hpp"
#include "secrel/io.hpp"
#include "secrel/pipeline.hpp"

namespace {

using namespace secrel;
using Vec = std::vector<double>;

constexpr double kCorrelationTol = 1e-12;
constexpr double kDescentSlack = 1e-9;
constexpr double kRecoveryRmse = 1e-6;
constexpr double kFimPrecision = 0.9;
constexpr double kPearsonPrecision = 0.7;
constexpr double kEndToEndSeconds = 30.0;
constexpr double kMetricTol = 1e-12;
constexpr std::uint64_t kCorpusSeed = 42;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail = what;
        }
        pass = pass && ok;
    }
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    Outcome outcome;
    try {
        outcome = check();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s  %s%s%s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.empty() ? "" : "  -- ",
                outcome.detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

Outcome negfin_matches_naive() {
    Outcome o;
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<std::size_t> items(1, 12);
    std::uniform_int_distribution<std::size_t> records(1, 50);
    std::uniform_int_distribution<std::size_t> length(1, 8);
    std::uniform_int_distribution<std::size_t> support(1, 10);
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        auto db = oracle::random_database(rng, items(rng), records(rng), length(rng));
        const auto min_support = support(rng);
        const auto fast = fim::mine_frequent(db, min_support);
        const auto naive = fim::mine_frequent_naive(db, min_support);
        o.require(oracle::as_map(fast) == oracle::as_map(naive) && fast.size() == naive.size(),
                  "database " + std::to_string(trial) + " differs");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds < 10.0, "took " + num(seconds) + " s");
    if (o.pass) {
        o.detail = "200 databases, " + num(seconds) + " s";
    }
    return o;
}

Outcome correlation_oracles() {
    Outcome o;
    std::mt19937_64 rng(20260202);
    std::uniform_int_distribution<std::size_t> length(2, 40);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = length(rng);
        std::uniform_int_distribution<int> level(0, 1 + trial % 5);
        Vec x(n), y(n), mean(n), px(n), py(n);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = level(rng);
            y[k] = level(rng);
            mean[k] = unit(rng) * (1 + trial % 5);
            px[k] = unit(rng) < 0.2 ? nan : x[k];
            py[k] = unit(rng) < 0.2 ? nan : y[k];
        }
        const double tau = cf::kendall_tau(x, y);
        const double rho = cf::spearman_rho(x, y);
        worst = std::max({worst, std::abs(tau - oracle::kendall_by_pairs(x, y)),
                          std::abs(rho - oracle::spearman_by_ranks(x, y))});
        o.require(tau == cf::kendall_tau(y, x) && rho == cf::spearman_rho(y, x), "asymmetric rank measure");
        o.require(std::abs(tau) <= 1.0 && std::abs(rho) <= 1.0, "rank measure out of bounds");

        const auto r = cf::adjusted_cosine(px, py, mean);
        const auto expected = oracle::pearson_eq2(px, py, mean);
        o.require(r.has_value() == expected.has_value(), "pearson definedness differs on pair " +
                                                              std::to_string(trial));
        if (r && expected) {
            worst = std::max(worst, std::abs(*r - *expected));
            const auto swapped = cf::adjusted_cosine(py, px, mean);
            o.require(swapped && *swapped == *r, "asymmetric pearson");
            o.require(std::abs(*r) <= 1.0, "pearson out of bounds");
        }
    }
    o.require(worst <= kCorrelationTol, "max deviation " + num(worst));
    if (o.pass) {
        o.detail = "500 pairs, max deviation " + num(worst);
    }
    return o;
}

Outcome rank_identities() {
    Outcome o;
    std::mt19937_64 rng(20260303);
    for (std::size_t n : {2U, 3U, 7U, 40U}) {
        Vec perm(n);
        for (std::size_t k = 0; k < n; ++k) {
            perm[k] = static_cast<double>(k);
        }
        std::shuffle(perm.begin(), perm.end(), rng);
        Vec reversed(n);
        for (std::size_t k = 0; k < n; ++k) {
            reversed[k] = -perm[k];
        }
        o.require(cf::kendall_tau(perm, perm) == 1.0 && cf::spearman_rho(perm, perm) == 1.0, "identity");
        o.require(cf::kendall_tau(perm, reversed) == -1.0 && cf::spearman_rho(perm, reversed) == -1.0, "reversal");
    }
    o.require(std::abs(cf::kendall_tau(Vec{1, 2, 3}, Vec{1, 3, 2}) - 1.0 / 3.0) <= 1e-15, "tau 1/3");
    o.require(cf::spearman_rho(Vec{1, 2, 3}, Vec{1, 3, 2}) == 0.5, "rho 0.5");
    return o;
}

Outcome als_descent_and_recovery() {
    Outcome o;
    std::mt19937_64 rng(20260404);
    std::bernoulli_distribution bit(0.3);
    for (int run = 0; run < 20; ++run) {
        const Eigen::Index m = 8 + run % 7;
        const Eigen::Index n = 20 + run;
        Eigen::MatrixXd y(m, n);
        for (Eigen::Index r = 0; r < m; ++r) {
            for (Eigen::Index c = 0; c < n; ++c) {
                y(r, c) = bit(rng) ? 1.0 : 0.0;
            }
        }
        cf::AlsOptions options;
        options.factors = 1 + static_cast<std::size_t>(run % 6);
        options.lambda = 0.05 * (1 + run % 4);
        options.iterations = 12;
        options.seed = static_cast<std::uint64_t>(run);
        std::vector<double> trace;
        cf::als_factorize(y, options, &trace);
        for (std::size_t k = 1; k < trace.size(); ++k) {
            o.require(trace[k] <= trace[k - 1] + kDescentSlack,
                      "run " + std::to_string(run) + " rose at half-step " + std::to_string(k));
        }
    }

    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::MatrixXd u(15, 2);
    Eigen::MatrixXd p(2, 25);
    u = u.unaryExpr([&](double) { return d(rng); });
    p = p.unaryExpr([&](double) { return d(rng); });
    const Eigen::MatrixXd target = u * p;
    cf::AlsOptions options;
    options.factors = 2;
    options.lambda = 1e-8;
    options.iterations = 500;
    const auto model = cf::als_factorize(target, options);
    const double rmse = std::sqrt((target - model.item_factors * model.user_factors).squaredNorm() /
                                  static_cast<double>(target.size()));
    o.require(rmse <= kRecoveryRmse, "rank-2 RMSE " + num(rmse));
    if (o.pass) {
        o.detail = "20 runs monotone, rank-2 RMSE " + num(rmse);
    }
    return o;
}

struct PlantedCorpus {
    SyntheticCorpus corpus;
    eval::GroundTruthLabels labels;
};

const PlantedCorpus& planted() {
    static const PlantedCorpus data = [] {
        PlantedCorpus p;
        SyntheticConfig config;
        config.n_blocks = 4;
        config.sectors_per_block = 5;
        config.n_companies = 2000;
        config.cross_block_noise = 0.05;
        p.corpus = generate_synthetic(config, kCorpusSeed);
        const auto& catalog = p.corpus.db.catalog();
        for (SectorIndex i = 0; i < catalog.size(); ++i) {
            for (SectorIndex j = 0; j < catalog.size(); ++j) {
                if (i != j) {
                    p.labels.set(catalog.id(i), catalog.id(j), p.corpus.truth.contains(i, j));
                }
            }
        }
        return p;
    }();
    return data;
}

eval::ModelScores score_engine(pipeline::Engine engine, std::size_t k) {
    const auto& p = planted();
    pipeline::EngineParams params;
    params.k = k;
    params.als.seed = kCorpusSeed;
    const auto relations = pipeline::extract_relations(p.corpus.db, engine, params);
    const auto ranked = eval::ranked_from_relations(relations, p.corpus.db.catalog());
    return eval::evaluate({{std::string(pipeline::engine_name(engine)), ranked}}, p.labels, {3, 5}).models.at(0);
}

Outcome planted_recovery() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const double fim_p3 = score_engine(pipeline::Engine::Fim, 3).precision_at.at(3);
    const double pearson_p3 = score_engine(pipeline::Engine::Pearson, 3).precision_at.at(3);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(fim_p3 >= kFimPrecision, "FIM P@3 " + num(fim_p3));
    o.require(pearson_p3 >= kPearsonPrecision, "Pearson P@3 " + num(pearson_p3));
    o.require(seconds < kEndToEndSeconds, "took " + num(seconds) + " s");
    if (o.pass) {
        o.detail = "FIM P@3 " + num(fim_p3) + ", Pearson P@3 " + num(pearson_p3) + ", " + num(seconds) + " s";
    }
    return o;
}

Outcome metric_fixtures() {
    Outcome o;
    eval::GroundTruthLabels single;
    single.set("s", "a", true);
    single.set("s", "b", false);
    single.set("s", "c", true);
    const eval::RankedLists abc{{"s", {"a", "b", "c"}}};
    const double p3 = eval::precision_at_k(abc, single, 3);
    const double ap3 = eval::map_at_k(abc, single, 3);
    o.require(std::abs(p3 - 2.0 / 3.0) <= kMetricTol, "P@3 " + num(p3));
    o.require(std::abs(ap3 - 5.0 / 6.0) <= kMetricTol, "AP@3 " + num(ap3));

    eval::GroundTruthLabels three;
    three.set("a", "x", true);
    three.set("b", "y", true);
    three.set("c", "z", true);
    const eval::RankedLists ranks{{"a", {"x", "y"}}, {"b", {"x", "y"}}, {"c", {"w", "x", "y", "z"}}};
    const double rr = eval::mrr(ranks, three);
    o.require(std::abs(rr - 1.75 / 3.0) <= kMetricTol, "MRR " + num(rr));

    const auto report = eval::evaluate({{"m", abc}}, single, {5, 10});
    const auto table = eval::format_report_table(report);
    o.require(table.find("\nmodel\tP@5\tP@10\tMAP@5\tMAP@10\tMRR\n") != std::string::npos, "report columns");
    return o;
}

Outcome fim_beats_als() {
    Outcome o;
    const double fim_map = score_engine(pipeline::Engine::Fim, 10).map_at.at(5);
    const double als_map = score_engine(pipeline::Engine::Als, 10).map_at.at(5);
    o.require(fim_map > als_map, "FIM MAP@5 " + num(fim_map) + " vs ALS " + num(als_map));
    if (o.pass) {
        o.detail = "FIM MAP@5 " + num(fim_map) + " > ALS " + num(als_map);
    }
    return o;
}

Outcome deterministic_artifacts() {
    namespace fs = std::filesystem;
    Outcome o;
    const auto root = fs::temp_directory_path() / "secrel-acceptance-determinism";
    fs::remove_all(root);
    std::ostringstream sink;
    auto stage = [&](const fs::path& dir, std::vector<std::string> args) {
        args.insert(args.begin(), {"secrel", "--seed", "11", "--out-dir", dir.string()});
        sink.str({});
        o.require(cli::run(args, sink, sink) == 0, "stage failed: " + sink.str());
    };
    for (const auto* run : {"first", "second"}) {
        const auto dir = root / run;
        const auto records = (dir / "records.csv").string();
        stage(dir, {"synth", "--companies", "800"});
        stage(dir, {"stats", "--input", records});
        stage(dir, {"mine", "--input", records, "--min-support", "0.01"});
        for (const auto* measure : {"pearson", "kendall", "spearman"}) {
            stage(dir, {"similar", "--input", records, "--measure", measure});
        }
        stage(dir, {"als", "--input", records, "--factors", "6"});
        for (const auto* engine : {"fim", "pearson", "kendall", "spearman", "als"}) {
            stage(dir, {"extract", "--input", records, "--engine", engine, "--factors", "6"});
        }
        stage(dir, {"candidates", "--relations", (dir / "relations_fim.tsv").string(),
                    (dir / "relations_als.tsv").string()});
        stage(dir, {"evaluate", "--labels", (dir / "truth_labels.tsv").string(), "--model",
                    "fim=" + (dir / "relations_fim.tsv").string(), "--model",
                    "als=" + (dir / "relations_als.tsv").string()});
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "first")) {
        const auto twin = root / "second" / entry.path().filename();
        o.require(fs::exists(twin), "missing " + twin.string());
        if (fs::exists(twin)) {
            o.require(io::read_file(entry.path()) == io::read_file(twin),
                      entry.path().filename().string() + " differs");
            ++compared;
        }
    }
    o.require(compared >= 20, "only " + std::to_string(compared) + " artifacts");
    fs::remove_all(root);
    if (o.pass) {
        o.detail = std::to_string(compared) + " artifacts byte-identical";
    }
    return o;
}

}  // namespace

int main() {
    report("negFIN output equals naive Apriori on 200 random databases", negfin_matches_naive);
    report("Pearson/Kendall/Spearman match brute-force oracles on 500 pairs", correlation_oracles);
    report("rank-measure identities and worked n=3 cases", rank_identities);
    report("ALS monotone descent and rank-2 recovery", als_descent_and_recovery);
    report("planted-block recovery: FIM P@3 >= 0.9, Pearson P@3 >= 0.7, < 30 s", planted_recovery);
    report("metric fixtures and report columns", metric_fixtures);
    report("FIM MAP@5 exceeds ALS MAP@5 on the planted corpus", fim_beats_als);
    report("pipeline reruns give byte-identical artifacts", deterministic_artifacts);
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
