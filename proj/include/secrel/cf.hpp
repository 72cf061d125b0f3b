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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "secrel/dataset.hpp"
#include "secrel/parallel.hpp"

namespace secrel::cf {

/// Binary sector x company matrix Y: entry (m, n) is 1 iff company n operates
/// in sector m. Stored sparsely by column (a company's sectors) and by row (a
/// sector's companies); every entry not stored is an observed 0.
class RatingsMatrix {
public:
    explicit RatingsMatrix(const TransactionDatabase& db);

    std::size_t n_sectors() const {
        return rows_.size();
    }
    std::size_t n_companies() const {
        return columns_.size();
    }
    std::size_t nonzeros() const {
        return nonzeros_;
    }
    bool at(std::size_t sector, std::size_t company) const;

    /// Companies holding `sector`, ascending.
    const std::vector<std::uint32_t>& row(std::size_t sector) const {
        return rows_.at(sector);
    }
    /// Sectors of `company`, ascending.
    const std::vector<SectorIndex>& column(std::size_t company) const {
        return columns_.at(company);
    }

    std::vector<double> dense_row(std::size_t sector) const;
    Eigen::MatrixXd dense() const;

private:
    std::vector<std::vector<std::uint32_t>> rows_;
    std::vector<std::vector<SectorIndex>> columns_;
    std::size_t nonzeros_ = 0;
};

RatingsMatrix build_ratings(const TransactionDatabase& db);

enum class Measure { Pearson, Kendall, Spearman };
enum class KendallVariant { TauA, TauB };

std::string_view measure_name(Measure measure);
Measure parse_measure(std::string_view name);

/// Adjusted-cosine Pearson similarity between two items over the users that
/// rated both:
///
///   sum_u (r_ui - mean_u)(r_uj - mean_u)
///   -------------------------------------------------------------
///   sqrt(sum_u (r_ui - mean_u)^2) * sqrt(sum_u (r_uj - mean_u)^2)
///
/// NaN in `item_i`/`item_j` marks an unrated entry. Returns nullopt when no
/// user rated both or either centred vector has zero norm.
std::optional<double> adjusted_cosine(std::span<const double> item_i, std::span<const double> item_j,
                                      std::span<const double> user_mean);

/// The same measure on Y, where every entry is observed and a company's mean
/// rating is |sectors| / M.
std::optional<double> pearson_similarity(const RatingsMatrix& ratings, SectorIndex i, SectorIndex j);

/// (C - D) / C(n, 2) with concordant and discordant pairs counted under
/// strict inequalities; tied pairs count for neither. TauB divides by
/// sqrt((n0 - ties_x)(n0 - ties_y)) instead and is NaN for a constant input.
/// O(n log n). Throws Error on length mismatch or n < 2.
double kendall_tau(std::span<const double> x, std::span<const double> y,
                   KendallVariant variant = KendallVariant::TauA);

/// 1 - 6 sum d^2 / (n (n^2 - 1)) over average ranks. Throws Error on length
/// mismatch or n < 2.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct SimilarityOptions {
    Measure measure = Measure::Pearson;
    KendallVariant kendall = KendallVariant::TauA;
};

/// Symmetric M x M item-item similarity. An entry is undefined when either
/// sector's row is constant over all companies, or the measure itself is
/// undefined there.
struct SimilarityMatrix {
    Measure measure = Measure::Pearson;
    std::size_t size = 0;
    std::vector<double> values;           // row-major, 0 where undefined
    std::vector<std::uint8_t> defined;    // row-major mask

    double at(std::size_t i, std::size_t j) const {
        return values[i * size + j];
    }
    bool is_defined(std::size_t i, std::size_t j) const {
        return defined[i * size + j] != 0;
    }
};

/// Closed forms over co-occurrence counts; parallel over rows.
SimilarityMatrix item_similarity_matrix(const RatingsMatrix& ratings, const SimilarityOptions& options,
                                        Exec exec = Exec::Parallel);

/// "sector_i<TAB>sector_j<TAB>score" for defined entries.
std::string format_similarity(const SimilarityMatrix& sim, const SectorCatalog& catalog);
/// "sector_i<TAB>sector_j<TAB>0|1" for every entry.
std::string format_similarity_mask(const SimilarityMatrix& sim, const SectorCatalog& catalog);

struct AlsOptions {
    std::size_t factors = 32;
    double lambda = 0.1;
    std::size_t iterations = 15;
    std::uint64_t seed = 0;
    Exec exec = Exec::Parallel;
};

/// Y ~ item_factors * user_factors; item_factors is M x l, user_factors l x N.
struct FactorModel {
    Eigen::MatrixXd item_factors;
    Eigen::MatrixXd user_factors;
    double lambda = 0.0;
    std::uint64_t seed = 0;

    std::size_t latent_dim() const {
        return static_cast<std::size_t>(item_factors.cols());
    }
};

/// Alternating least squares on every entry of the target:
///
///   sum_{m,n} (y_mn - u_m . p_n)^2 + lambda (sum_m |u_m|^2 + sum_n |p_n|^2)
///
/// Each iteration solves for all item rows given the user factors, then all
/// user columns given the item factors, in closed form. Factors start
/// uniform on [0, 1/sqrt(l)] from `seed`. If `objective_trace` is given it
/// receives the objective at start and after every half-step.
FactorModel als_factorize(const RatingsMatrix& ratings, const AlsOptions& options,
                          std::vector<double>* objective_trace = nullptr);
FactorModel als_factorize(const Eigen::MatrixXd& target, const AlsOptions& options,
                          std::vector<double>* objective_trace = nullptr);

double als_objective(const Eigen::MatrixXd& target, const FactorModel& model);

double predict(const FactorModel& model, std::size_t sector, std::size_t company);

std::string format_factor_model(const FactorModel& model);
FactorModel parse_factor_model(std::string_view text);

}  // namespace secrel::cf
