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

#include <algorithm>

#include "secrel/cf.hpp"
#include "secrel/error.hpp"

namespace secrel::cf {

RatingsMatrix::RatingsMatrix(const TransactionDatabase& db)
    : rows_(db.n_sectors()), columns_(db.n_companies()) {
    const auto& records = db.records();
    for (std::size_t n = 0; n < records.size(); ++n) {
        columns_[n] = records[n].sectors;
        for (auto m : records[n].sectors) {
            rows_[m].push_back(static_cast<std::uint32_t>(n));
        }
        nonzeros_ += records[n].sectors.size();
    }
}

bool RatingsMatrix::at(std::size_t sector, std::size_t company) const {
    const auto& sectors = columns_.at(company);
    if (sector >= rows_.size()) {
        throw Error("sector index out of range");
    }
    return std::binary_search(sectors.begin(), sectors.end(), static_cast<SectorIndex>(sector));
}

std::vector<double> RatingsMatrix::dense_row(std::size_t sector) const {
    std::vector<double> out(n_companies(), 0.0);
    for (auto n : rows_.at(sector)) {
        out[n] = 1.0;
    }
    return out;
}

Eigen::MatrixXd RatingsMatrix::dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_sectors()),
                                                static_cast<Eigen::Index>(n_companies()));
    for (std::size_t n = 0; n < columns_.size(); ++n) {
        for (auto m : columns_[n]) {
            out(m, static_cast<Eigen::Index>(n)) = 1.0;
        }
    }
    return out;
}

RatingsMatrix build_ratings(const TransactionDatabase& db) {
    return RatingsMatrix(db);
}

}  // namespace secrel::cf
