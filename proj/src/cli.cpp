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

#include "secrel/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <utility>

#include <omp.h>

#include <CLI11.hpp>

#include "secrel/cf.hpp"
#include "secrel/dataset.hpp"
#include "secrel/error.hpp"
#include "secrel/eval.hpp"
#include "secrel/fim.hpp"
#include "secrel/io.hpp"
#include "secrel/pipeline.hpp"
#include "secrel/relations.hpp"

namespace secrel::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 42;
    int threads = 0;
    bool serial = false;
    std::string delimiter = ",";
    bool no_header = false;
    std::string out_dir = ".";

    Exec exec() const {
        return serial ? Exec::Serial : Exec::Parallel;
    }
    RecordFormat format() const {
        if (delimiter.size() != 1) {
            throw Error("--delimiter must be a single character");
        }
        RecordFormat f;
        f.delimiter = delimiter[0] == 't' ? '\t' : delimiter[0];
        f.has_header = !no_header;
        return f;
    }
};

// Collects every output before touching the disk, then writes each file
// atomically. A failure while computing leaves the output directory as it was.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }
    void commit(std::ostream& out) const {
        fs::create_directories(dir_);
        for (const auto& [name, content] : files_) {
            io::write_file_atomic(dir_ / name, content);
            out << "wrote " << (dir_ / name).string() << "\n";
        }
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string provenance(std::string_view command, const GlobalOptions& global,
                       const std::vector<std::pair<std::string, std::string>>& params = {}) {
    std::string line = "secrel " + std::string(command) + " seed=" + std::to_string(global.seed);
    for (const auto& [key, value] : params) {
        line += " " + key + "=" + value;
    }
    return line;
}

std::string header(std::string_view command, const GlobalOptions& global,
                   const std::vector<std::pair<std::string, std::string>>& params = {}) {
    return "# " + provenance(command, global, params) + "\n";
}

std::vector<std::size_t> parse_size_list(const std::string& text, std::string_view what) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const auto value = io::parse_integer(std::string_view(text).substr(start, end - start), what);
        if (value < 1) {
            throw Error(std::string(what) + " values must be positive");
        }
        out.push_back(static_cast<std::size_t>(value));
        start = end + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, std::string_view what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        out.push_back(io::parse_double(std::string_view(text).substr(start, end - start), what));
        start = end + 1;
    }
    return out;
}

relations::Symmetrize parse_symmetrize(std::string_view mode) {
    if (mode == "none") {
        return relations::Symmetrize::None;
    }
    if (mode == "union") {
        return relations::Symmetrize::Union;
    }
    if (mode == "intersection") {
        return relations::Symmetrize::Intersection;
    }
    throw Error("--symmetrize must be none, union or intersection");
}

cf::KendallVariant parse_kendall(std::string_view name) {
    if (name == "tau-a") {
        return cf::KendallVariant::TauA;
    }
    if (name == "tau-b") {
        return cf::KendallVariant::TauB;
    }
    throw Error("--kendall-variant must be tau-a or tau-b");
}

struct AlsFlags {
    std::size_t factors = 32;
    double lambda = 0.1;
    std::size_t iterations = 15;

    void attach(CLI::App* cmd) {
        cmd->add_option("--factors", factors, "Latent dimension l (capped at min(M, N))")->capture_default_str();
        cmd->add_option("--lambda", lambda, "Regularisation weight")->capture_default_str();
        cmd->add_option("--iterations", iterations, "ALS iterations")->capture_default_str();
    }
    cf::AlsOptions options(const GlobalOptions& global) const {
        cf::AlsOptions o;
        o.factors = factors;
        o.lambda = lambda;
        o.iterations = iterations;
        o.seed = global.seed;
        o.exec = global.exec();
        return o;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extract and evaluate similar-sector relations from company sector records", "secrel"};
    app.require_subcommand(1);
    std::string default_config;
    if (const char* env = std::getenv(kConfigEnv)) {
        default_config = env;
    }
    app.set_config("--config", default_config, "key=value config file; command-line flags take precedence");

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Seed for every random step")->capture_default_str();
    app.add_option("--threads", global.threads, "OpenMP threads (0 = runtime default)");
    app.add_flag("--serial", global.serial, "Run kernels on the serial path");
    app.add_option("--delimiter", global.delimiter, "Record file delimiter ('t' for tab)")->capture_default_str();
    app.add_flag("--no-header", global.no_header, "Record files have no header row");
    app.add_option("--out-dir", global.out_dir, "Directory for output files")->capture_default_str();

    std::string input;
    auto add_input = [&input](CLI::App* cmd) {
        cmd->add_option("--input", input, "Company record file")->required();
    };

    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics and sector-count histogram");
    add_input(stats_cmd);

    std::string min_support = "0.0005";
    auto* mine_cmd = app.add_subcommand("mine", "Mine frequent itemsets and sector-pair supports");
    add_input(mine_cmd);
    mine_cmd->add_option("--min-support", min_support, "Absolute count, fraction or ratio")->capture_default_str();

    std::string measure = "pearson";
    std::string kendall_variant = "tau-a";
    auto* similar_cmd = app.add_subcommand("similar", "Item-item similarity matrix");
    add_input(similar_cmd);
    similar_cmd->add_option("--measure", measure, "pearson, kendall or spearman")->capture_default_str();
    similar_cmd->add_option("--kendall-variant", kendall_variant, "tau-a or tau-b")->capture_default_str();

    AlsFlags als_flags;
    auto* als_cmd = app.add_subcommand("als", "Factorise Y with singleton companies by ALS");
    add_input(als_cmd);
    als_flags.attach(als_cmd);

    std::string engine = "fim";
    std::size_t k = 10;
    std::string symmetrize_mode = "none";
    auto* extract_cmd = app.add_subcommand("extract", "Extract top-K relations with one engine");
    add_input(extract_cmd);
    extract_cmd->add_option("--engine", engine, "fim, pearson, kendall, spearman or als")->capture_default_str();
    extract_cmd->add_option("--k", k, "Relations kept per source sector")->capture_default_str();
    extract_cmd->add_option("--min-support", min_support, "FIM threshold")->capture_default_str();
    extract_cmd->add_option("--kendall-variant", kendall_variant, "tau-a or tau-b")->capture_default_str();
    extract_cmd->add_option("--symmetrize", symmetrize_mode, "none, union or intersection")->capture_default_str();
    als_flags.attach(extract_cmd);

    std::vector<std::string> relation_files;
    double threshold = 0.5;
    auto* candidates_cmd = app.add_subcommand("candidates", "Combine model outputs into pairs for labelling");
    candidates_cmd->add_option("--relations", relation_files, "Relation files, one per model")->required();
    candidates_cmd->add_option("--threshold", threshold, "Minimum combined score")->capture_default_str();

    std::vector<std::string> model_specs;
    std::string labels_path;
    std::string ks_text = "5,10";
    std::size_t binarize = 10;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Precision@K, MAP@K and MRR against labels");
    evaluate_cmd->add_option("--model", model_specs, "name=relations-file")->required();
    evaluate_cmd->add_option("--labels", labels_path, "Label file")->required();
    evaluate_cmd->add_option("--ks", ks_text, "Comma-separated cutoffs")->capture_default_str();
    evaluate_cmd->add_option("--binarize", binarize, "Keep only the top N of each ranking (0 = off)")
        ->capture_default_str();

    SyntheticConfig synth_config;
    std::string size_weights = "0.35,0.3,0.2,0.1,0.05";
    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-block corpus with ground truth");
    synth_cmd->add_option("--blocks", synth_config.n_blocks)->capture_default_str();
    synth_cmd->add_option("--sectors-per-block", synth_config.sectors_per_block)->capture_default_str();
    synth_cmd->add_option("--companies", synth_config.n_companies)->capture_default_str();
    synth_cmd->add_option("--noise", synth_config.cross_block_noise, "Cross-block probability per sector")
        ->capture_default_str();
    synth_cmd->add_option("--size-weights", size_weights, "Weights of 1, 2, ... sectors per company")
        ->capture_default_str();

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (global.threads > 0) {
            omp_set_num_threads(global.threads);
        }
        const auto format = global.format();
        Outputs outputs(global.out_dir);

        if (stats_cmd->parsed()) {
            const auto stats = compute_stats(load_records(input, format));
            outputs.add("stats.json", stats_report(stats));
            outputs.add("histogram.tsv", histogram_table(stats));
        } else if (mine_cmd->parsed()) {
            const auto db = load_records(input, format);
            const auto absolute = pipeline::resolve_min_support(min_support, db.n_companies());
            const auto frequent = fim::mine_frequent(db, absolute, global.exec());
            const auto head = header("mine", global, {{"min_support", std::to_string(absolute)}});
            outputs.add("itemsets.tsv", head + fim::format_itemsets(frequent, db.catalog()));
            outputs.add("pairs.tsv", head + fim::format_pair_supports(fim::pair_supports(frequent), db.catalog()));
        } else if (similar_cmd->parsed()) {
            const auto db = load_records(input, format);
            cf::SimilarityOptions options{cf::parse_measure(measure), parse_kendall(kendall_variant)};
            const auto sim = cf::item_similarity_matrix(cf::build_ratings(db), options, global.exec());
            const auto stem = "similarity_" + measure;
            outputs.add(stem + ".tsv", cf::format_similarity(sim, db.catalog()));
            outputs.add(stem + "_mask.tsv", cf::format_similarity_mask(sim, db.catalog()));
        } else if (als_cmd->parsed()) {
            const auto db = load_records(input, format);
            const auto augmented = augment_with_singletons(db);
            auto options = als_flags.options(global);
            options.factors =
                std::min(options.factors, std::min(augmented.db.n_sectors(), augmented.db.n_companies()));
            const auto model = cf::als_factorize(cf::build_ratings(augmented.db), options);
            const auto predictions = relations::recommend_for_singletons(model, augmented);
            std::string table = header("als", global);
            for (SectorIndex s = 0; s < db.n_sectors(); ++s) {
                for (const auto& entry : predictions.at(augmented.singleton_of_sector[s])) {
                    table += augmented.singleton_of_sector[s] + "\t" + db.catalog().id(entry.target) + "\t" +
                             io::format_double(entry.score) + "\n";
                }
            }
            outputs.add("als_model.txt", cf::format_factor_model(model));
            outputs.add("als_recommendations.tsv", std::move(table));
        } else if (extract_cmd->parsed()) {
            const auto db = load_records(input, format);
            pipeline::EngineParams params;
            params.min_support = min_support;
            params.k = k;
            params.kendall = parse_kendall(kendall_variant);
            params.als = als_flags.options(global);
            params.exec = global.exec();
            const auto chosen = pipeline::parse_engine(engine);
            const auto relations = relations::symmetrize(pipeline::extract_relations(db, chosen, params),
                                                         parse_symmetrize(symmetrize_mode));
            outputs.add("relations_" + engine + ".tsv",
                        header("extract", global, {{"engine", engine}, {"k", std::to_string(k)}}) +
                            relations::format_relations(relations, db.catalog()));
        } else if (candidates_cmd->parsed()) {
            SectorCatalog catalog;
            std::vector<relations::SimilarityScores> models;
            for (const auto& path : relation_files) {
                models.push_back(relations::scores_from_relations(
                    relations::parse_relations(io::read_file(path), catalog)));
            }
            const auto candidates = relations::candidate_pairs_for_labeling(models, threshold);
            for (const auto& warning : candidates.warnings) {
                err << "warning: " << warning << "\n";
            }
            outputs.add("candidates.tsv",
                        header("candidates", global, {{"threshold", io::format_double(threshold)}}) +
                            relations::format_candidates(candidates, catalog));
        } else if (evaluate_cmd->parsed()) {
            const auto labels = eval::parse_labels(io::read_file(labels_path));
            std::vector<eval::NamedRanking> models;
            for (const auto& spec : model_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw Error("--model expects name=path, got '" + spec + "'");
                }
                const auto path = spec.substr(eq + 1);
                try {
                    models.push_back({spec.substr(0, eq), eval::parse_ranked(io::read_file(path))});
                } catch (const Error& e) {
                    throw Error(path + ": " + e.what());
                }
            }
            std::optional<std::size_t> cutoff;
            if (binarize > 0) {
                cutoff = binarize;
            }
            const auto report = eval::evaluate(models, labels, parse_size_list(ks_text, "--ks"), cutoff);
            outputs.add("report.tsv", eval::format_report_table(report));
            outputs.add("report.json", eval::format_report_json(report));
            outputs.add("precision_at_k.tsv", eval::format_precision_curve(report));
            outputs.add("map_at_k.tsv", eval::format_map_grid(report));
            out << eval::format_report_table(report);
        } else if (synth_cmd->parsed()) {
            synth_config.size_weights = parse_double_list(size_weights, "--size-weights");
            const auto corpus = generate_synthetic(synth_config, global.seed);
            const auto& catalog = corpus.db.catalog();
            const auto line = provenance("synth", global,
                                     {{"blocks", std::to_string(synth_config.n_blocks)},
                                      {"sectors_per_block", std::to_string(synth_config.sectors_per_block)},
                                      {"companies", std::to_string(synth_config.n_companies)},
                                      {"noise", io::format_double(synth_config.cross_block_noise)}});
            std::vector<std::pair<std::string, std::string>> order;
            for (SectorIndex i = 0; i < catalog.size(); ++i) {
                for (SectorIndex j = 0; j < catalog.size(); ++j) {
                    if (i != j) {
                        order.emplace_back(catalog.id(i), catalog.id(j));
                    }
                }
            }
            const auto head = "# " + line + "\n";
            const auto labels = eval::labels_from_relations(corpus.truth, catalog);
            outputs.add("records.csv", head + serialize_records(corpus.db, format));
            outputs.add("truth_labels.tsv", head + eval::format_labels(labels, order));
            outputs.add("truth_relations.tsv", relations::format_relations(corpus.truth, catalog, {line}));
        }
        outputs.commit(out);
    } catch (const std::exception& e) {
        err << "secrel: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace secrel::cli
