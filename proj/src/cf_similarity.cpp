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
#include <cmath>
#include <cstdint>

#include "secrel/cf.hpp"
#include "secrel/io.hpp"

namespace secrel::cf {

namespace {

// Per-sector quantities shared by all closed forms.
struct RowSummary {
    std::vector<double> count;        // n_i, companies holding sector i
    std::vector<double> mean_mass;    // S_i, sum of company means over row i
    double mean_square_total = 0.0;   // Q, sum of squared company means
    double n = 0.0;                   // companies
};

RowSummary summarize(const RatingsMatrix& ratings) {
    RowSummary s;
    const std::size_t m = ratings.n_sectors();
    const std::size_t n = ratings.n_companies();
    s.n = static_cast<double>(n);
    std::vector<double> mean(n);
    for (std::size_t u = 0; u < n; ++u) {
        mean[u] = static_cast<double>(ratings.column(u).size()) / static_cast<double>(m);
        s.mean_square_total += mean[u] * mean[u];
    }
    s.count.resize(m);
    s.mean_mass.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        s.count[i] = static_cast<double>(ratings.row(i).size());
        double mass = 0.0;
        for (auto u : ratings.row(i)) {
            mass += mean[u];
        }
        s.mean_mass[i] = mass;
    }
    return s;
}

double choose2(double k) {
    return k * (k - 1.0) / 2.0;
}

// Binary rows with a = both 1, b = only i, c = only j, d = neither.
std::optional<double> entry(const RowSummary& s, const SimilarityOptions& options, std::size_t i, std::size_t j,
                            double both) {
    const double ni = s.count[i];
    const double nj = s.count[j];
    switch (options.measure) {
        case Measure::Pearson: {
            const double q = s.mean_square_total;
            const double cross = both - s.mean_mass[i] - s.mean_mass[j] + q;
            const double norm_i = ni - 2.0 * s.mean_mass[i] + q;
            const double norm_j = nj - 2.0 * s.mean_mass[j] + q;
            if (norm_i <= 0.0 || norm_j <= 0.0) {
                return std::nullopt;
            }
            return std::clamp(cross / (std::sqrt(norm_i) * std::sqrt(norm_j)), -1.0, 1.0);
        }
        case Measure::Kendall: {
            const double a = both;
            const double b = ni - both;
            const double c = nj - both;
            const double d = s.n - ni - nj + both;
            const double numerator = a * d - b * c;
            const double all_pairs = choose2(s.n);
            if (options.kendall == KendallVariant::TauA) {
                return numerator / all_pairs;
            }
            const double ties_i = choose2(ni) + choose2(s.n - ni);
            const double ties_j = choose2(nj) + choose2(s.n - nj);
            const double denom = std::sqrt(all_pairs - ties_i) * std::sqrt(all_pairs - ties_j);
            if (denom == 0.0) {
                return std::nullopt;
            }
            return std::clamp(numerator / denom, -1.0, 1.0);
        }
        case Measure::Spearman: {
            // Average ranks: zeros share (z + 1) / 2, ones share z + (ones + 1) / 2.
            const double zi = s.n - ni;
            const double zj = s.n - nj;
            const double zero_i = (zi + 1.0) / 2.0;
            const double one_i = zi + (ni + 1.0) / 2.0;
            const double zero_j = (zj + 1.0) / 2.0;
            const double one_j = zj + (nj + 1.0) / 2.0;
            const double a = both;
            const double b = ni - both;
            const double c = nj - both;
            const double d = s.n - ni - nj + both;
            const double sum_sq = a * (one_i - one_j) * (one_i - one_j) + b * (one_i - zero_j) * (one_i - zero_j) +
                                  c * (zero_i - one_j) * (zero_i - one_j) + d * (zero_i - zero_j) * (zero_i - zero_j);
            return std::clamp(1.0 - 6.0 * sum_sq / (s.n * (s.n * s.n - 1.0)), -1.0, 1.0);
        }
    }
    return std::nullopt;
}

}  // namespace

SimilarityMatrix item_similarity_matrix(const RatingsMatrix& ratings, const SimilarityOptions& options, Exec exec) {
    const std::size_t m = ratings.n_sectors();
    const std::size_t n = ratings.n_companies();
    SimilarityMatrix sim;
    sim.measure = options.measure;
    sim.size = m;
    sim.values.assign(m * m, 0.0);
    sim.defined.assign(m * m, 0);
    const RowSummary summary = summarize(ratings);
    const auto rows = static_cast<std::ptrdiff_t>(m);

#pragma omp parallel if (is_parallel(exec))
    {
        std::vector<std::uint32_t> both(m);
#pragma omp for schedule(dynamic)
        for (std::ptrdiff_t row = 0; row < rows; ++row) {
            const auto i = static_cast<std::size_t>(row);
            const std::size_t ni = ratings.row(i).size();
            if (ni == 0 || ni == n) {
                continue;  // constant row: zero variance
            }
            std::fill(both.begin(), both.end(), 0U);
            for (auto u : ratings.row(i)) {
                for (auto j : ratings.column(u)) {
                    ++both[j];
                }
            }
            for (std::size_t j = i; j < m; ++j) {
                const std::size_t nj = ratings.row(j).size();
                if (nj == 0 || nj == n) {
                    continue;
                }
                if (auto value = entry(summary, options, i, j, static_cast<double>(both[j]))) {
                    sim.values[i * m + j] = *value;
                    sim.defined[i * m + j] = 1;
                }
            }
        }
    }
    // Mirror the upper triangle so the matrix is exactly symmetric.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            sim.values[i * m + j] = sim.values[j * m + i];
            sim.defined[i * m + j] = sim.defined[j * m + i];
        }
    }
    return sim;
}

std::string format_similarity(const SimilarityMatrix& sim, const SectorCatalog& catalog) {
    std::string out = "# measure=" + std::string(measure_name(sim.measure)) + "\n";
    for (std::size_t i = 0; i < sim.size; ++i) {
        for (std::size_t j = 0; j < sim.size; ++j) {
            if (sim.is_defined(i, j)) {
                out += catalog.id(static_cast<SectorIndex>(i)) + "\t" + catalog.id(static_cast<SectorIndex>(j)) +
                       "\t" + io::format_double(sim.at(i, j)) + "\n";
            }
        }
    }
    return out;
}

std::string format_similarity_mask(const SimilarityMatrix& sim, const SectorCatalog& catalog) {
    std::string out = "# measure=" + std::string(measure_name(sim.measure)) + "\n";
    for (std::size_t i = 0; i < sim.size; ++i) {
        for (std::size_t j = 0; j < sim.size; ++j) {
            out += catalog.id(static_cast<SectorIndex>(i)) + "\t" + catalog.id(static_cast<SectorIndex>(j)) + "\t" +
                   (sim.is_defined(i, j) ? "1" : "0") + "\n";
        }
    }
    return out;
}

}  // namespace secrel::cf
