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

#include "secrel/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "random.hpp"
#include "secrel/error.hpp"
#include "secrel/io.hpp"

namespace secrel {

SectorIndex SectorCatalog::intern(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it != index_.end()) {
        return it->second;
    }
    auto index = static_cast<SectorIndex>(entries_.size());
    entries_.push_back({std::string(id), std::nullopt});
    index_.emplace(std::string(id), index);
    return index;
}

std::optional<SectorIndex> SectorCatalog::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

SectorIndex SectorCatalog::index_of(std::string_view id) const {
    auto found = find(id);
    if (!found) {
        throw Error("unknown sector id '" + std::string(id) + "'");
    }
    return *found;
}

void SectorCatalog::set_name_if_missing(SectorIndex index, std::string name) {
    auto& entry = entries_.at(index);
    if (!entry.name && !name.empty()) {
        entry.name = std::move(name);
    }
}

TransactionDatabase::TransactionDatabase(SectorCatalog catalog, std::vector<CompanyRecord> records)
    : catalog_(std::move(catalog)), records_(std::move(records)) {
    std::set<std::string_view> ids;
    for (const auto& record : records_) {
        if (record.sectors.empty()) {
            throw Error("company '" + record.company_id + "' has no sectors");
        }
        if (!std::is_sorted(record.sectors.begin(), record.sectors.end()) ||
            std::adjacent_find(record.sectors.begin(), record.sectors.end()) != record.sectors.end()) {
            throw Error("company '" + record.company_id + "' has unsorted or duplicate sectors");
        }
        if (record.sectors.back() >= catalog_.size()) {
            throw Error("company '" + record.company_id + "' references an unknown sector");
        }
        if (!ids.insert(record.company_id).second) {
            throw Error("duplicate company id '" + record.company_id + "'");
        }
    }
}

void DatabaseBuilder::add(std::string company_id, const std::vector<std::string>& sector_ids,
                          const std::vector<std::string>& names) {
    if (sector_ids.empty()) {
        throw Error("company '" + company_id + "' has an empty sector list");
    }
    if (seen_.contains(company_id)) {
        throw Error("duplicate company id '" + company_id + "'");
    }
    CompanyRecord record{company_id, {}};
    record.sectors.reserve(sector_ids.size());
    const bool named = names.size() == sector_ids.size();
    for (std::size_t i = 0; i < sector_ids.size(); ++i) {
        auto index = catalog_.intern(sector_ids[i]);
        if (named) {
            catalog_.set_name_if_missing(index, names[i]);
        }
        record.sectors.push_back(index);
    }
    std::sort(record.sectors.begin(), record.sectors.end());
    record.sectors.erase(std::unique(record.sectors.begin(), record.sectors.end()), record.sectors.end());
    seen_.emplace(std::move(company_id), records_.size());
    records_.push_back(std::move(record));
}

TransactionDatabase DatabaseBuilder::build() && {
    return TransactionDatabase(std::move(catalog_), std::move(records_));
}

namespace {

std::vector<std::string> split_list(std::string_view field, char separator) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= field.size()) {
        auto end = field.find(separator, start);
        if (end == std::string_view::npos) {
            end = field.size();
        }
        auto token = io::trim(field.substr(start, end - start));
        if (!token.empty()) {
            out.emplace_back(token);
        }
        start = end + 1;
    }
    return out;
}

std::string row_error(std::size_t line, const std::string& what) {
    return "row " + std::to_string(line) + ": " + what;
}

}  // namespace

TransactionDatabase parse_records(std::string_view text, const RecordFormat& format) {
    DatabaseBuilder builder;
    auto all = io::lines(text);
    bool header_pending = format.has_header;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (io::trim(all[i]).empty() || all[i].front() == '#') {
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::vector<std::string> fields;
        try {
            fields = io::split_delimited(all[i], format.delimiter);
        } catch (const Error& e) {
            throw Error(row_error(line_no, e.what()));
        }
        if (fields.size() <= std::max(format.id_column, format.sectors_column)) {
            throw Error(row_error(line_no, "missing company id or sector list column"));
        }
        std::string id(io::trim(fields[format.id_column]));
        if (id.empty()) {
            throw Error(row_error(line_no, "empty company id"));
        }
        if (id.starts_with(kSingletonPrefix)) {
            throw Error(row_error(line_no, "company id uses the reserved prefix '" +
                                               std::string(kSingletonPrefix) + "'"));
        }
        auto sectors = split_list(fields[format.sectors_column], format.list_separator);
        if (sectors.empty()) {
            throw Error(row_error(line_no, "empty sector list"));
        }
        std::vector<std::string> names;
        if (format.names_column && *format.names_column < fields.size()) {
            names = split_list(fields[*format.names_column], format.list_separator);
        }
        try {
            builder.add(std::move(id), sectors, names);
        } catch (const Error& e) {
            throw Error(row_error(line_no, e.what()));
        }
    }
    if (builder.size() == 0) {
        throw Error("no company records found");
    }
    return std::move(builder).build();
}

TransactionDatabase load_records(const std::filesystem::path& path, const RecordFormat& format) {
    try {
        return parse_records(io::read_file(path), format);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string serialize_records(const TransactionDatabase& db, const RecordFormat& format) {
    const std::size_t n_columns =
        std::max({format.id_column, format.sectors_column, format.names_column.value_or(0)}) + 1;
    const std::string name_joiner =
        format.list_separator == ' ' ? std::string(1, ' ') : std::string{format.list_separator, ' '};
    const auto& catalog = db.catalog();

    auto emit_row = [&](std::string& out, std::vector<std::string> row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out.push_back(format.delimiter);
            }
            out += io::quote_field(row[c], format.delimiter);
        }
        out.push_back('\n');
    };

    std::string out;
    if (format.has_header) {
        std::vector<std::string> header(n_columns);
        header[format.id_column] = "company_id";
        header[format.sectors_column] = "sector_ids";
        if (format.names_column) {
            header[*format.names_column] = "sector_names";
        }
        emit_row(out, std::move(header));
    }
    for (const auto& record : db.records()) {
        std::vector<std::string> row(n_columns);
        row[format.id_column] = record.company_id;
        std::string ids;
        std::string names;
        bool all_named = true;
        for (std::size_t k = 0; k < record.sectors.size(); ++k) {
            const auto& entry = catalog[record.sectors[k]];
            if (k > 0) {
                ids.push_back(format.list_separator);
                names += name_joiner;
            }
            ids += entry.id;
            if (entry.name) {
                names += *entry.name;
            } else {
                all_named = false;
            }
        }
        row[format.sectors_column] = std::move(ids);
        if (format.names_column && all_named) {
            row[*format.names_column] = std::move(names);
        }
        emit_row(out, std::move(row));
    }
    return out;
}

DatasetStats compute_stats(const TransactionDatabase& db) {
    DatasetStats stats;
    stats.n_companies = db.n_companies();
    stats.n_sectors = db.n_sectors();
    if (stats.n_companies == 0) {
        return stats;
    }
    double total = 0.0;
    for (const auto& record : db.records()) {
        total += static_cast<double>(record.sectors.size());
        ++stats.histogram[record.sectors.size()];
    }
    const double n = static_cast<double>(stats.n_companies);
    stats.mean_sectors_per_company = total / n;
    double squares = 0.0;
    for (const auto& record : db.records()) {
        const double dev = static_cast<double>(record.sectors.size()) - stats.mean_sectors_per_company;
        squares += dev * dev;
    }
    stats.sd_sectors_per_company = std::sqrt(squares / n);
    return stats;
}

std::string stats_report(const DatasetStats& stats) {
    nlohmann::ordered_json doc;
    doc["n_companies"] = stats.n_companies;
    doc["n_sectors"] = stats.n_sectors;
    doc["mean_sectors_per_company"] = stats.mean_sectors_per_company;
    doc["sd_sectors_per_company"] = stats.sd_sectors_per_company;
    doc["sd_kind"] = "population";
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (const auto& [size, count] : stats.histogram) {
        histogram[std::to_string(size)] = count;
    }
    doc["histogram"] = std::move(histogram);
    return doc.dump(2) + "\n";
}

std::string histogram_table(const DatasetStats& stats) {
    std::string out = "n_sectors\tn_companies\n";
    for (const auto& [size, count] : stats.histogram) {
        out += std::to_string(size) + "\t" + std::to_string(count) + "\n";
    }
    return out;
}

AugmentedDatabase augment_with_singletons(const TransactionDatabase& db) {
    auto records = db.records();
    const std::size_t m = db.n_sectors();
    AugmentedDatabase out;
    out.singleton_of_sector.reserve(m);
    out.singleton_column.reserve(m);
    for (SectorIndex s = 0; s < m; ++s) {
        std::string id = std::string(kSingletonPrefix) + db.catalog().id(s);
        out.singleton_of_sector.push_back(id);
        out.singleton_column.push_back(records.size());
        records.push_back({std::move(id), {s}});
    }
    out.db = TransactionDatabase(db.catalog(), std::move(records));
    return out;
}

std::string synthetic_sector_id(std::size_t block, std::size_t slot) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "blk%03zu-s%03zu", block, slot);
    return buf;
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
    const std::size_t n_sectors = config.n_blocks * config.sectors_per_block;
    if (n_sectors < 2) {
        throw Error("synthetic corpus needs at least two sectors");
    }
    if (!(config.cross_block_noise >= 0.0 && config.cross_block_noise <= 1.0)) {
        throw Error("cross_block_noise must lie in [0, 1]");
    }
    if (config.size_weights.empty()) {
        throw Error("size_weights must not be empty");
    }
    double weight_total = 0.0;
    std::size_t max_size = 0;
    for (std::size_t k = 0; k < config.size_weights.size(); ++k) {
        const double w = config.size_weights[k];
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error("size_weights must be finite and non-negative");
        }
        weight_total += w;
        if (w > 0.0) {
            max_size = k + 1;
        }
    }
    if (weight_total <= 0.0) {
        throw Error("size_weights must have positive mass");
    }
    if (max_size > config.sectors_per_block) {
        throw Error("infeasible config: companies may need " + std::to_string(max_size) +
                    " sectors but a block holds " + std::to_string(config.sectors_per_block));
    }
    if (config.n_companies == 0) {
        throw Error("synthetic corpus needs at least one company");
    }

    detail::Rng rng(seed);
    DatabaseBuilder builder;
    std::vector<std::size_t> slots(config.sectors_per_block);
    for (std::size_t c = 0; c < config.n_companies; ++c) {
        const std::size_t block = detail::uniform_below(rng, config.n_blocks);
        double u = detail::uniform01(rng) * weight_total;
        std::size_t size = max_size;
        for (std::size_t k = 0; k < max_size; ++k) {
            if (u < config.size_weights[k]) {
                size = k + 1;
                break;
            }
            u -= config.size_weights[k];
        }
        // Partial Fisher-Yates over the block's slots.
        std::iota(slots.begin(), slots.end(), 0);
        std::vector<std::size_t> chosen;  // global sector numbers
        for (std::size_t k = 0; k < size; ++k) {
            auto pick = k + detail::uniform_below(rng, slots.size() - k);
            std::swap(slots[k], slots[pick]);
            chosen.push_back(block * config.sectors_per_block + slots[k]);
        }
        if (config.n_blocks > 1 && config.cross_block_noise > 0.0) {
            const std::size_t outside = n_sectors - config.sectors_per_block;
            for (auto& sector : chosen) {
                if (detail::uniform01(rng) >= config.cross_block_noise) {
                    continue;
                }
                // Rejection-sample a foreign sector not already held.
                for (int attempt = 0; attempt < 64; ++attempt) {
                    auto draw = detail::uniform_below(rng, outside);
                    auto candidate = draw < block * config.sectors_per_block ? draw
                                                                             : draw + config.sectors_per_block;
                    if (std::find(chosen.begin(), chosen.end(), candidate) == chosen.end()) {
                        sector = candidate;
                        break;
                    }
                }
            }
        }
        std::vector<std::string> ids;
        std::vector<std::string> names;
        for (auto sector : chosen) {
            const auto b = sector / config.sectors_per_block;
            const auto s = sector % config.sectors_per_block;
            ids.push_back(synthetic_sector_id(b, s));
            names.push_back("Block " + std::to_string(b) + " Sector " + std::to_string(s));
        }
        char company[32];
        std::snprintf(company, sizeof company, "c%07zu", c + 1);
        builder.add(company, ids, names);
    }

    SyntheticCorpus corpus;
    corpus.db = std::move(builder).build();
    const auto& catalog = corpus.db.catalog();
    corpus.block_of_sector.resize(catalog.size());
    for (SectorIndex i = 0; i < catalog.size(); ++i) {
        std::size_t b = 0;
        std::size_t s = 0;
        std::sscanf(catalog.id(i).c_str(), "blk%zu-s%zu", &b, &s);
        corpus.block_of_sector[i] = b;
    }
    corpus.truth.k = config.sectors_per_block - 1;
    for (SectorIndex i = 0; i < catalog.size(); ++i) {
        std::size_t rank = 0;
        for (SectorIndex j = 0; j < catalog.size(); ++j) {
            if (i != j && corpus.block_of_sector[i] == corpus.block_of_sector[j]) {
                corpus.truth.relations.push_back({i, j, ++rank, 1.0});
            }
        }
    }
    return corpus;
}

}  // namespace secrel
