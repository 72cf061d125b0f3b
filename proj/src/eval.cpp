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

#include "secrel/eval.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "secrel/error.hpp"
#include "secrel/io.hpp"

namespace secrel::eval {

void GroundTruthLabels::set(const std::string& source, const std::string& target, bool relevant) {
    auto [it, inserted] = labels_.emplace(std::make_pair(source, target), relevant);
    if (!inserted && it->second != relevant) {
        throw Error("conflicting labels for " + source + " -> " + target);
    }
    if (relevant) {
        relevant_[source].insert(target);
    }
}

bool GroundTruthLabels::is_relevant(const std::string& source, const std::string& target) const {
    auto it = relevant_.find(source);
    return it != relevant_.end() && it->second.contains(target);
}

std::size_t GroundTruthLabels::relevant_count(const std::string& source) const {
    auto it = relevant_.find(source);
    return it == relevant_.end() ? 0 : it->second.size();
}

std::vector<std::string> GroundTruthLabels::eligible_sources() const {
    std::vector<std::string> out;
    for (const auto& [source, targets] : relevant_) {
        if (!targets.empty()) {
            out.push_back(source);
        }
    }
    return out;
}

GroundTruthLabels parse_labels(std::string_view text) {
    GroundTruthLabels labels;
    for (const auto& row : io::read_tsv(text)) {
        const auto where = "line " + std::to_string(row.line) + ": ";
        if (row.fields.size() < 3) {
            throw Error(where + "expected source, target, label");
        }
        const auto& value = row.fields[2];
        if (value != "0" && value != "1") {
            throw Error(where + "label must be 0 or 1, got '" + value + "'");
        }
        labels.set(row.fields[0], row.fields[1], value == "1");
    }
    return labels;
}

std::string format_labels(const GroundTruthLabels& labels,
                          const std::vector<std::pair<std::string, std::string>>& order) {
    std::string out;
    for (const auto& [source, target] : order) {
        out += source + "\t" + target + "\t" + (labels.is_relevant(source, target) ? "1" : "0") + "\n";
    }
    return out;
}

GroundTruthLabels labels_from_relations(const RelationSet& relations, const SectorCatalog& catalog) {
    GroundTruthLabels labels;
    for (const auto& r : relations.relations) {
        labels.set(catalog.id(r.source), catalog.id(r.target), true);
    }
    return labels;
}

RankedLists ranked_from_relations(const RelationSet& relations, const SectorCatalog& catalog) {
    std::vector<Relation> sorted = relations.relations;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Relation& a, const Relation& b) {
        return a.source < b.source || (a.source == b.source && a.rank < b.rank);
    });
    RankedLists out;
    for (const auto& r : sorted) {
        out[catalog.id(r.source)].push_back(catalog.id(r.target));
    }
    return out;
}

RankedLists parse_ranked(std::string_view text) {
    struct Entry {
        long long rank;
        std::size_t line;
        std::string target;
    };
    std::map<std::string, std::vector<Entry>> entries;
    for (const auto& row : io::read_tsv(text)) {
        if (row.fields.size() < 3) {
            throw Error("line " + std::to_string(row.line) + ": expected source, target, rank[, score]");
        }
        const auto rank = io::parse_integer(row.fields[2], "rank");
        entries[row.fields[0]].push_back({rank, row.line, row.fields[1]});
    }
    RankedLists out;
    for (auto& [source, list] : entries) {
        std::stable_sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
        auto& targets = out[source];
        for (const auto& e : list) {
            if (std::find(targets.begin(), targets.end(), e.target) != targets.end()) {
                throw Error("line " + std::to_string(e.line) + ": target '" + e.target + "' repeated for source '" +
                            source + "'");
            }
            targets.push_back(e.target);
        }
    }
    return out;
}

std::map<std::string, std::vector<int>> binarize_top_k(const RankedLists& ranked, std::size_t k) {
    if (k == 0) {
        throw Error("binarization cutoff must be at least 1");
    }
    std::map<std::string, std::vector<int>> out;
    for (const auto& [source, targets] : ranked) {
        auto& flags = out[source];
        flags.reserve(targets.size());
        for (std::size_t r = 0; r < targets.size(); ++r) {
            flags.push_back(r < k ? 1 : 0);
        }
    }
    return out;
}

namespace {

const std::vector<std::string>& list_of(const RankedLists& ranked, const std::string& source) {
    static const std::vector<std::string> empty;
    auto it = ranked.find(source);
    return it == ranked.end() ? empty : it->second;
}

template <typename PerSource>
double macro_average(const RankedLists& ranked, const GroundTruthLabels& labels, PerSource per_source) {
    const auto sources = labels.eligible_sources();
    if (sources.empty()) {
        throw Error("no source has a relevant label; metrics are undefined");
    }
    double total = 0.0;
    for (const auto& source : sources) {
        total += per_source(source, list_of(ranked, source));
    }
    return total / static_cast<double>(sources.size());
}

void check_k(std::size_t k) {
    if (k < 1) {
        throw Error("K must be at least 1");
    }
}

}  // namespace

double precision_at_k(const RankedLists& ranked, const GroundTruthLabels& labels, std::size_t k) {
    check_k(k);
    return macro_average(ranked, labels, [&](const std::string& source, const std::vector<std::string>& list) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < std::min(k, list.size()); ++r) {
            hits += labels.is_relevant(source, list[r]) ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(k);
    });
}

double map_at_k(const RankedLists& ranked, const GroundTruthLabels& labels, std::size_t k) {
    check_k(k);
    return macro_average(ranked, labels, [&](const std::string& source, const std::vector<std::string>& list) {
        std::size_t hits = 0;
        double sum = 0.0;
        for (std::size_t r = 0; r < std::min(k, list.size()); ++r) {
            if (labels.is_relevant(source, list[r])) {
                ++hits;
                sum += static_cast<double>(hits) / static_cast<double>(r + 1);
            }
        }
        return sum / static_cast<double>(std::min(k, labels.relevant_count(source)));
    });
}

double mrr(const RankedLists& ranked, const GroundTruthLabels& labels) {
    return macro_average(ranked, labels, [&](const std::string& source, const std::vector<std::string>& list) {
        for (std::size_t r = 0; r < list.size(); ++r) {
            if (labels.is_relevant(source, list[r])) {
                return 1.0 / static_cast<double>(r + 1);
            }
        }
        return 0.0;
    });
}

EvalReport evaluate(const std::vector<NamedRanking>& models, const GroundTruthLabels& labels,
                    const std::vector<std::size_t>& ks, std::optional<std::size_t> binarize_k) {
    if (ks.empty()) {
        throw Error("at least one K is required");
    }
    EvalReport report;
    report.ks = ks;
    std::sort(report.ks.begin(), report.ks.end());
    report.ks.erase(std::unique(report.ks.begin(), report.ks.end()), report.ks.end());
    report.binarize_k = binarize_k.value_or(0);
    report.coverage = labels.eligible_sources().size();
    for (const auto& model : models) {
        RankedLists ranked = model.ranked;
        if (binarize_k) {
            const auto flags = binarize_top_k(ranked, *binarize_k);
            for (auto& [source, targets] : ranked) {
                const auto& f = flags.at(source);
                targets.resize(static_cast<std::size_t>(std::count(f.begin(), f.end(), 1)));
            }
        }
        ModelScores scores;
        scores.name = model.name;
        for (auto k : report.ks) {
            scores.precision_at[k] = precision_at_k(ranked, labels, k);
            scores.map_at[k] = map_at_k(ranked, labels, k);
        }
        scores.mrr = mrr(ranked, labels);
        report.models.push_back(std::move(scores));
    }
    return report;
}

namespace {

std::string fixed(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

}  // namespace

std::string format_report_table(const EvalReport& report) {
    std::string out = "# MAP@K normalised by min(K, relevant); macro-averaged over " +
                      std::to_string(report.coverage) + " sources with a relevant label\n";
    out += "model";
    for (auto k : report.ks) {
        out += "\tP@" + std::to_string(k);
    }
    for (auto k : report.ks) {
        out += "\tMAP@" + std::to_string(k);
    }
    out += "\tMRR\n";
    for (const auto& model : report.models) {
        out += model.name;
        for (auto k : report.ks) {
            out += "\t" + fixed(model.precision_at.at(k));
        }
        for (auto k : report.ks) {
            out += "\t" + fixed(model.map_at.at(k));
        }
        out += "\t" + fixed(model.mrr) + "\n";
    }
    return out;
}

std::string format_report_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["map_normalisation"] = "min(K, relevant)";
    doc["averaging"] = "macro over sources with >= 1 relevant label";
    doc["binarize_k"] = report.binarize_k;
    doc["coverage"] = report.coverage;
    doc["ks"] = report.ks;
    auto models = nlohmann::ordered_json::array();
    for (const auto& model : report.models) {
        nlohmann::ordered_json entry;
        entry["name"] = model.name;
        for (auto k : report.ks) {
            entry["P@" + std::to_string(k)] = model.precision_at.at(k);
        }
        for (auto k : report.ks) {
            entry["MAP@" + std::to_string(k)] = model.map_at.at(k);
        }
        entry["MRR"] = model.mrr;
        models.push_back(std::move(entry));
    }
    doc["models"] = std::move(models);
    return doc.dump(2) + "\n";
}

std::string format_precision_curve(const EvalReport& report) {
    std::string out = "model\tK\tprecision\n";
    for (const auto& model : report.models) {
        for (auto k : report.ks) {
            out += model.name + "\t" + std::to_string(k) + "\t" + fixed(model.precision_at.at(k)) + "\n";
        }
    }
    return out;
}

std::string format_map_grid(const EvalReport& report) {
    std::string out = "model";
    for (auto k : report.ks) {
        out += "\tMAP@" + std::to_string(k);
    }
    out += "\n";
    for (const auto& model : report.models) {
        out += model.name;
        for (auto k : report.ks) {
            out += "\t" + fixed(model.map_at.at(k));
        }
        out += "\n";
    }
    return out;
}

}  // namespace secrel::eval
