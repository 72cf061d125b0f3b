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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "secrel/relation_set.hpp"

namespace secrel {

/// Prefix reserved for synthetic singleton companies. Real company ids
/// starting with it are rejected at load time, so synthetic ids never collide.
inline constexpr std::string_view kSingletonPrefix = "~singleton/";

struct SectorEntry {
    std::string id;
    std::optional<std::string> name;
};

/// Ordered set of sector ids with a dense index in [0, size()). Ids are opaque
/// strings; "030000000" and "30000000" are different sectors.
class SectorCatalog {
public:
    /// Returns the index of `id`, appending it if new.
    SectorIndex intern(std::string_view id);

    std::optional<SectorIndex> find(std::string_view id) const;
    SectorIndex index_of(std::string_view id) const;  // throws Error if unknown

    const SectorEntry& operator[](SectorIndex index) const {
        return entries_.at(index);
    }
    const std::string& id(SectorIndex index) const {
        return entries_.at(index).id;
    }
    /// Sets a display name unless one is already present.
    void set_name_if_missing(SectorIndex index, std::string name);

    std::size_t size() const {
        return entries_.size();
    }
    const std::vector<SectorEntry>& entries() const {
        return entries_;
    }

    friend bool operator==(const SectorCatalog& a, const SectorCatalog& b) {
        return a.entries_.size() == b.entries_.size() &&
               std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                          [](const SectorEntry& x, const SectorEntry& y) {
                              return x.id == y.id && x.name == y.name;
                          });
    }

private:
    std::vector<SectorEntry> entries_;
    std::unordered_map<std::string, SectorIndex> index_;
};

struct CompanyRecord {
    std::string company_id;
    std::vector<SectorIndex> sectors;  // sorted, unique, non-empty

    friend bool operator==(const CompanyRecord&, const CompanyRecord&) = default;
};

/// Companies with their sector sets. Immutable once built; use
/// DatabaseBuilder to construct one.
class TransactionDatabase {
public:
    TransactionDatabase() = default;
    TransactionDatabase(SectorCatalog catalog, std::vector<CompanyRecord> records);

    const SectorCatalog& catalog() const {
        return catalog_;
    }
    const std::vector<CompanyRecord>& records() const {
        return records_;
    }
    std::size_t n_companies() const {
        return records_.size();
    }
    std::size_t n_sectors() const {
        return catalog_.size();
    }

    friend bool operator==(const TransactionDatabase&, const TransactionDatabase&) = default;

private:
    SectorCatalog catalog_;
    std::vector<CompanyRecord> records_;
};

/// Incremental construction shared by the loader and the synthetic generator.
/// Catalog indices follow first appearance.
class DatabaseBuilder {
public:
    DatabaseBuilder() = default;
    explicit DatabaseBuilder(SectorCatalog catalog) : catalog_(std::move(catalog)) {}

    /// `names`, when non-empty and the same length as `sector_ids`, is applied
    /// positionally as display names. Throws Error on an empty sector list or a
    /// duplicate company id.
    void add(std::string company_id, const std::vector<std::string>& sector_ids,
             const std::vector<std::string>& names = {});

    std::size_t size() const {
        return records_.size();
    }
    TransactionDatabase build() &&;

private:
    SectorCatalog catalog_;
    std::vector<CompanyRecord> records_;
    std::unordered_map<std::string, std::size_t> seen_;
};

/// Layout of a delimited company file. Defaults match the layout
/// `company_id,"sector,sector",names` with a header row.
struct RecordFormat {
    char delimiter = ',';
    char list_separator = ',';
    bool has_header = true;
    std::size_t id_column = 0;
    std::size_t sectors_column = 1;
    std::optional<std::size_t> names_column = 2;  // ignored when absent in a row
};

TransactionDatabase load_records(const std::filesystem::path& path, const RecordFormat& format = {});
TransactionDatabase parse_records(std::string_view text, const RecordFormat& format = {});

/// Writes `db` in `format`; load_records on the result yields an equal database.
std::string serialize_records(const TransactionDatabase& db, const RecordFormat& format = {});

struct DatasetStats {
    std::size_t n_companies = 0;
    std::size_t n_sectors = 0;
    double mean_sectors_per_company = 0.0;
    double sd_sectors_per_company = 0.0;  // population standard deviation
    std::map<std::size_t, std::size_t> histogram;  // sector count -> companies
};

DatasetStats compute_stats(const TransactionDatabase& db);

/// JSON key/value document with the stats fields.
std::string stats_report(const DatasetStats& stats);
/// Two-column table "n_sectors<TAB>n_companies" for plotting.
std::string histogram_table(const DatasetStats& stats);

struct AugmentedDatabase {
    TransactionDatabase db;
    std::vector<std::string> singleton_of_sector;  // sector index -> synthetic company id
    std::vector<std::size_t> singleton_column;     // sector index -> record position in db
};

/// Appends one synthetic company per sector, holding exactly that sector.
AugmentedDatabase augment_with_singletons(const TransactionDatabase& db);

struct SyntheticConfig {
    std::size_t n_blocks = 4;
    std::size_t sectors_per_block = 5;
    std::size_t n_companies = 2000;
    /// Weight of drawing k sectors for k = 1, 2, ...; normalised internally.
    std::vector<double> size_weights = {0.35, 0.3, 0.2, 0.1, 0.05};
    /// Per-slot probability of replacing an in-block sector with one drawn
    /// from another block.
    double cross_block_noise = 0.05;
};

struct SyntheticCorpus {
    TransactionDatabase db;
    RelationSet truth;                        // indices into db.catalog()
    std::vector<std::size_t> block_of_sector;  // indexed like db.catalog()
};

/// Planted-block corpus: each company picks one block, draws its sectors from
/// it, and with probability `cross_block_noise` swaps each one for a sector
/// of a different block. Ground truth relates every ordered pair of distinct
/// sectors that share a block.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

std::string synthetic_sector_id(std::size_t block, std::size_t slot);

}  // namespace secrel
