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

#include <cmath>
#include <string>

#include "random.hpp"
#include "secrel/cf.hpp"
#include "secrel/error.hpp"
#include "secrel/io.hpp"

namespace secrel::cf {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

// Y given as sparse binary ratings: products touch only the stored ones.
class SparseTarget {
public:
    explicit SparseTarget(const RatingsMatrix& y) : y_(y) {}

    Index rows() const {
        return static_cast<Index>(y_.n_sectors());
    }
    Index cols() const {
        return static_cast<Index>(y_.n_companies());
    }

    // Y * P^T, M x l.
    MatrixXd times_user_factors(const MatrixXd& p, Exec exec) const {
        MatrixXd out = MatrixXd::Zero(rows(), p.rows());
        const Index m = rows();
#pragma omp parallel for schedule(dynamic, 16) if (is_parallel(exec))
        for (Index row = 0; row < m; ++row) {
            for (auto company : y_.row(static_cast<std::size_t>(row))) {
                out.row(row) += p.col(company).transpose();
            }
        }
        return out;
    }

    // Y^T * U, N x l.
    MatrixXd transposed_times_item_factors(const MatrixXd& u, Exec exec) const {
        MatrixXd out = MatrixXd::Zero(cols(), u.cols());
        const Index n = cols();
#pragma omp parallel for schedule(static) if (is_parallel(exec))
        for (Index col = 0; col < n; ++col) {
            for (auto sector : y_.column(static_cast<std::size_t>(col))) {
                out.row(col) += u.row(sector);
            }
        }
        return out;
    }

    // |Y - U P|^2 = |Y|^2 - 2 <Y, U P> + tr((U^T U)(P P^T)).
    double residual(const MatrixXd& u, const MatrixXd& p, Exec exec) const {
        const MatrixXd projected = times_user_factors(p, exec);
        const double cross = (u.array() * projected.array()).sum();
        const MatrixXd gram_u = u.transpose() * u;
        const MatrixXd gram_p = p * p.transpose();
        return static_cast<double>(y_.nonzeros()) - 2.0 * cross + (gram_u.array() * gram_p.array()).sum();
    }

private:
    const RatingsMatrix& y_;
};

class DenseTarget {
public:
    explicit DenseTarget(const MatrixXd& y) : y_(y) {}

    Index rows() const {
        return y_.rows();
    }
    Index cols() const {
        return y_.cols();
    }

    MatrixXd times_user_factors(const MatrixXd& p, Exec exec) const {
        MatrixXd out(rows(), p.rows());
        const Index m = rows();
#pragma omp parallel for schedule(static) if (is_parallel(exec))
        for (Index row = 0; row < m; ++row) {
            out.row(row).noalias() = y_.row(row) * p.transpose();
        }
        return out;
    }

    MatrixXd transposed_times_item_factors(const MatrixXd& u, Exec exec) const {
        MatrixXd out(cols(), u.cols());
        const Index n = cols();
#pragma omp parallel for schedule(static) if (is_parallel(exec))
        for (Index col = 0; col < n; ++col) {
            out.row(col).noalias() = y_.col(col).transpose() * u;
        }
        return out;
    }

    double residual(const MatrixXd& u, const MatrixXd& p, Exec) const {
        return (y_ - u * p).squaredNorm();
    }

private:
    const MatrixXd& y_;
};

constexpr double kSingularPivotRatio = 1e-13;

// Solves x (G + lambda I) = b for every row b of `rhs`.
MatrixXd solve_rows(const MatrixXd& gram, double lambda, const MatrixXd& rhs, Exec exec) {
    MatrixXd system = gram;
    system.diagonal().array() += lambda;
    const Eigen::LLT<MatrixXd> llt(system);
    const auto pivots = llt.matrixLLT().diagonal().array().square().eval();
    if (llt.info() != Eigen::Success || !(pivots > 0.0).all() ||
        pivots.minCoeff() < kSingularPivotRatio * pivots.maxCoeff()) {
        throw Error("singular least-squares subproblem; use lambda > 0");
    }
    MatrixXd out(rhs.rows(), rhs.cols());
    const Index rows = rhs.rows();
#pragma omp parallel for schedule(static) if (is_parallel(exec))
    for (Index r = 0; r < rows; ++r) {
        out.row(r) = llt.solve(rhs.row(r).transpose()).transpose();
    }
    if (!out.allFinite()) {
        throw Error("non-finite least-squares solution; use lambda > 0");
    }
    return out;
}

template <typename Target>
FactorModel run_als(const Target& target, const AlsOptions& options, std::vector<double>* trace) {
    const Index m = target.rows();
    const Index n = target.cols();
    const auto l = static_cast<Index>(options.factors);
    if (l < 1 || l > std::min(m, n)) {
        throw Error("latent dimension must lie in [1, min(M, N)] = [1, " + std::to_string(std::min(m, n)) + "]");
    }
    if (!(options.lambda >= 0.0) || !std::isfinite(options.lambda)) {
        throw Error("lambda must be a finite non-negative number");
    }
    if (options.iterations < 1) {
        throw Error("ALS needs at least one iteration");
    }

    FactorModel model;
    model.lambda = options.lambda;
    model.seed = options.seed;
    model.item_factors.resize(m, l);
    model.user_factors.resize(l, n);
    detail::Rng rng(options.seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l));
    for (Index r = 0; r < m; ++r) {
        for (Index k = 0; k < l; ++k) {
            model.item_factors(r, k) = detail::uniform01(rng) * scale;
        }
    }
    for (Index c = 0; c < n; ++c) {
        for (Index k = 0; k < l; ++k) {
            model.user_factors(k, c) = detail::uniform01(rng) * scale;
        }
    }

    auto& u = model.item_factors;
    auto& p = model.user_factors;
    auto objective = [&] {
        return target.residual(u, p, options.exec) + options.lambda * (u.squaredNorm() + p.squaredNorm());
    };
    if (trace) {
        trace->clear();
        trace->push_back(objective());
    }
    for (std::size_t it = 0; it < options.iterations; ++it) {
        u = solve_rows(p * p.transpose(), options.lambda, target.times_user_factors(p, options.exec), options.exec);
        if (trace) {
            trace->push_back(objective());
        }
        p = solve_rows(u.transpose() * u, options.lambda, target.transposed_times_item_factors(u, options.exec),
                       options.exec)
                .transpose();
        if (trace) {
            trace->push_back(objective());
        }
    }
    return model;
}

}  // namespace

FactorModel als_factorize(const RatingsMatrix& ratings, const AlsOptions& options, std::vector<double>* trace) {
    return run_als(SparseTarget(ratings), options, trace);
}

FactorModel als_factorize(const Eigen::MatrixXd& target, const AlsOptions& options, std::vector<double>* trace) {
    if (!target.allFinite()) {
        throw Error("ALS target has non-finite entries");
    }
    return run_als(DenseTarget(target), options, trace);
}

double als_objective(const Eigen::MatrixXd& target, const FactorModel& model) {
    return (target - model.item_factors * model.user_factors).squaredNorm() +
           model.lambda * (model.item_factors.squaredNorm() + model.user_factors.squaredNorm());
}

double predict(const FactorModel& model, std::size_t sector, std::size_t company) {
    if (sector >= static_cast<std::size_t>(model.item_factors.rows()) ||
        company >= static_cast<std::size_t>(model.user_factors.cols())) {
        throw Error("prediction index out of range");
    }
    const auto m = static_cast<Index>(sector);
    const auto n = static_cast<Index>(company);
    double sum = 0.0;
    for (Index k = 0; k < model.item_factors.cols(); ++k) {
        sum += model.item_factors(m, k) * model.user_factors(k, n);
    }
    return sum;
}

std::string format_factor_model(const FactorModel& model) {
    std::string out = "# secrel factor model\n";
    out += "M\t" + std::to_string(model.item_factors.rows()) + "\n";
    out += "N\t" + std::to_string(model.user_factors.cols()) + "\n";
    out += "l\t" + std::to_string(model.item_factors.cols()) + "\n";
    out += "lambda\t" + io::format_double(model.lambda) + "\n";
    out += "seed\t" + std::to_string(model.seed) + "\n";
    auto emit = [&out](const MatrixXd& matrix) {
        for (Index r = 0; r < matrix.rows(); ++r) {
            for (Index c = 0; c < matrix.cols(); ++c) {
                if (c > 0) {
                    out.push_back('\t');
                }
                out += io::format_double(matrix(r, c));
            }
            out.push_back('\n');
        }
    };
    out += "U\n";
    emit(model.item_factors);
    out += "P\n";
    emit(model.user_factors);
    return out;
}

FactorModel parse_factor_model(std::string_view text) {
    const auto rows = io::read_tsv(text);
    auto header = [&](std::size_t k, std::string_view key) -> const std::string& {
        if (k >= rows.size() || rows[k].fields.size() != 2 || rows[k].fields[0] != key) {
            throw Error("factor model: expected header '" + std::string(key) + "'");
        }
        return rows[k].fields[1];
    };
    const auto m = io::parse_integer(header(0, "M"), "M");
    const auto n = io::parse_integer(header(1, "N"), "N");
    const auto l = io::parse_integer(header(2, "l"), "l");
    if (m < 1 || n < 1 || l < 1) {
        throw Error("factor model: dimensions must be positive");
    }
    FactorModel model;
    model.lambda = io::parse_double(header(3, "lambda"), "lambda");
    model.seed = static_cast<std::uint64_t>(std::stoull(header(4, "seed")));
    std::size_t k = 5;
    auto read_block = [&](std::string_view tag, Index r_count, Index c_count) {
        if (k >= rows.size() || rows[k].fields.size() != 1 || rows[k].fields[0] != tag) {
            throw Error("factor model: expected block '" + std::string(tag) + "'");
        }
        ++k;
        MatrixXd matrix(r_count, c_count);
        for (Index r = 0; r < r_count; ++r, ++k) {
            if (k >= rows.size() || rows[k].fields.size() != static_cast<std::size_t>(c_count)) {
                throw Error("factor model: malformed row in block '" + std::string(tag) + "'");
            }
            for (Index c = 0; c < c_count; ++c) {
                matrix(r, c) = io::parse_double(rows[k].fields[static_cast<std::size_t>(c)], "factor");
            }
        }
        return matrix;
    };
    model.item_factors = read_block("U", m, l);
    model.user_factors = read_block("P", l, n);
    return model;
}

}  // namespace secrel::cf
