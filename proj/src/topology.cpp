/*
   Copyright 2026 The dgfm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "dgfm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "dgfm/errors.hpp"

namespace dgfm {

namespace {

Matrix averaging_matrix(Eigen::Index m) {
    return Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
}

double largest_singular_value(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

// Spectral gaps within this distance of one are treated as disconnected.
constexpr double kConnectivityMargin = 1e-10;

bool is_connected(const std::vector<std::vector<bool>>& adjacency) {
    const std::size_t m = adjacency.size();
    if (m == 0) {
        return false;
    }
    std::vector<bool> seen(m, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop();
        for (std::size_t j = 0; j < m; ++j) {
            if (adjacency[i][j] && !seen[j]) {
                seen[j] = true;
                ++reached;
                frontier.push(j);
            }
        }
    }
    return reached == m;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::vector<double> row;
        std::string token;
        while (tokens >> token) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(token, &used);
            } catch (const std::exception&) {
                throw ParseError("non-numeric matrix entry '" + token + "'", line_no);
            }
            if (used != token.size()) {
                throw ParseError("non-numeric matrix entry '" + token + "'", line_no);
            }
            row.push_back(value);
        }
        if (!row.empty()) {
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

bool TopologyReport::ok() const {
    return square && nonnegative && positive_diagonal && rows_stochastic && columns_stochastic &&
           connected;
}

std::string TopologyReport::summary() const {
    std::ostringstream out;
    if (!square) {
        return "matrix is not square";
    }
    out << "nonnegative=" << (nonnegative ? "yes" : "no") << " (worst " << worst_negative_entry
        << "), positive_diagonal=" << (positive_diagonal ? "yes" : "no") << " (min "
        << smallest_diagonal << "), rows=" << (rows_stochastic ? "ok" : "bad") << " (err "
        << worst_row_sum_error << "), columns=" << (columns_stochastic ? "ok" : "bad")
        << " (err " << worst_column_sum_error << "), rho=" << rho;
    return out.str();
}

TopologyReport validate(const Matrix& weights) {
    TopologyReport report;
    if (weights.rows() != weights.cols() || weights.rows() == 0) {
        report.square = false;
        report.nonnegative = report.positive_diagonal = false;
        report.rows_stochastic = report.columns_stochastic = report.connected = false;
        return report;
    }
    report.worst_negative_entry = std::min(0.0, weights.minCoeff());
    report.nonnegative = report.worst_negative_entry >= 0.0;
    report.smallest_diagonal = weights.diagonal().minCoeff();
    report.positive_diagonal = report.smallest_diagonal > 0.0;
    const Vector ones = Vector::Ones(weights.rows());
    report.worst_row_sum_error = (weights.rowwise().sum() - ones).cwiseAbs().maxCoeff();
    report.worst_column_sum_error =
        (weights.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff();
    report.rows_stochastic = report.worst_row_sum_error <= kStochasticTolerance;
    report.columns_stochastic = report.worst_column_sum_error <= kStochasticTolerance;
    report.rho = largest_singular_value(weights - averaging_matrix(weights.rows()));
    report.connected = report.rho < 1.0 - kConnectivityMargin;
    return report;
}

double spectral_gap(const Matrix& weights) {
    if (weights.rows() != weights.cols() || weights.rows() == 0) {
        throw InvalidTopology("spectral_gap: matrix must be square and nonempty");
    }
    const TopologyReport report = validate(weights);
    if (!report.doubly_stochastic()) {
        throw InvalidTopology("spectral_gap: matrix is not doubly stochastic: " + report.summary());
    }
    return report.rho;
}

MixingMatrix::MixingMatrix(Matrix weights) : weights_(std::move(weights)), rho_(0.0) {
    const TopologyReport report = validate(weights_);
    if (!report.square || !report.nonnegative || !report.positive_diagonal ||
        !report.doubly_stochastic()) {
        throw InvalidTopology("invalid mixing matrix: " + report.summary());
    }
    if (!report.connected) {
        throw DisconnectedGraph("mixing matrix has spectral gap 1 (graph disconnected)");
    }
    rho_ = report.rho;
    const std::size_t m = agents();
    rows_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double a = weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (a != 0.0) {
                rows_[i].emplace_back(j, a);
            }
        }
    }
}

Stacked MixingMatrix::mix(const Stacked& stacked) const {
    if (static_cast<std::size_t>(stacked.rows()) != agents()) {
        throw ShapeError("mix: expected " + std::to_string(agents()) + " rows, got " +
                         std::to_string(stacked.rows()));
    }
    Stacked out = Stacked::Zero(stacked.rows(), stacked.cols());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        auto row = out.row(static_cast<Eigen::Index>(i));
        for (const auto& [j, a] : rows_[i]) {
            row.noalias() += a * stacked.row(static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

MixingMatrix build_ring(std::size_t m) {
    if (m < 3) {
        throw InvalidTopology("ring topology needs at least 3 agents, got " + std::to_string(m));
    }
    const auto n = static_cast<Eigen::Index>(m);
    Matrix weights = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        weights(i, i) += 1.0 / 3.0;
        weights(i, (i + 1) % n) += 1.0 / 3.0;
        weights(i, (i + n - 1) % n) += 1.0 / 3.0;
    }
    return MixingMatrix(std::move(weights));
}

MixingMatrix build_complete(std::size_t m) {
    if (m == 0) {
        throw InvalidTopology("complete topology needs at least 1 agent");
    }
    return MixingMatrix(averaging_matrix(static_cast<Eigen::Index>(m)));
}

MixingMatrix build_metropolis_hastings(const std::vector<std::vector<bool>>& adjacency) {
    const std::size_t m = adjacency.size();
    if (m == 0) {
        throw InvalidTopology("empty adjacency matrix");
    }
    std::vector<std::size_t> degree(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (adjacency[i].size() != m) {
            throw InvalidTopology("adjacency matrix is not square");
        }
        if (!adjacency[i][i]) {
            throw InvalidTopology("adjacency matrix must have self-loops on the diagonal");
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (adjacency[i][j] != adjacency[j][i]) {
                throw InvalidTopology("adjacency matrix is not symmetric at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (i != j && adjacency[i][j]) {
                ++degree[i];
            }
        }
    }
    if (!is_connected(adjacency)) {
        throw DisconnectedGraph("communication graph is disconnected");
    }
    const auto n = static_cast<Eigen::Index>(m);
    Matrix weights = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        double off_diagonal = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && adjacency[i][j]) {
                const double a = 1.0 / (1.0 + static_cast<double>(std::max(degree[i], degree[j])));
                weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
                off_diagonal += a;
            }
        }
        weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 - off_diagonal;
    }
    return MixingMatrix(std::move(weights));
}

MixingMatrix load_mixing_matrix(std::istream& in) {
    const auto rows = read_rows(in);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Matrix weights(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != m) {
            throw InvalidTopology("matrix row " + std::to_string(i + 1) + " has " +
                                  std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(m));
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            weights(i, j) = row[static_cast<std::size_t>(j)];
        }
    }
    return MixingMatrix(std::move(weights));
}

MixingMatrix load_mixing_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mixing matrix file '" + path + "'");
    }
    return load_mixing_matrix(in);
}

std::vector<std::vector<bool>> load_adjacency(std::istream& in) {
    const auto rows = read_rows(in);
    std::vector<std::vector<bool>> adjacency(rows.size(), std::vector<bool>(rows.size(), false));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw InvalidTopology("adjacency row " + std::to_string(i + 1) + " has wrong length");
        }
        for (std::size_t j = 0; j < rows.size(); ++j) {
            adjacency[i][j] = rows[i][j] != 0.0;
        }
        adjacency[i][i] = true;
    }
    return adjacency;
}

std::vector<std::vector<bool>> load_adjacency_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open adjacency file '" + path + "'");
    }
    return load_adjacency(in);
}

TopologySchedule::TopologySchedule(MixingMatrix base) : base_(std::move(base)) {}

void TopologySchedule::set(std::size_t k, std::size_t tau, MixingMatrix matrix) {
    if (matrix.agents() != base_.agents()) {
        throw InvalidTopology("scheduled matrix has " + std::to_string(matrix.agents()) +
                              " agents, expected " + std::to_string(base_.agents()));
    }
    overrides_.insert_or_assign({k, tau}, std::move(matrix));
}

const MixingMatrix& TopologySchedule::at(std::size_t k, std::size_t tau) const {
    if (const auto it = overrides_.find({k, tau}); it != overrides_.end()) {
        return it->second;
    }
    return base_;
}

double TopologySchedule::rho() const {
    double worst = base_.rho();
    for (const auto& [key, matrix] : overrides_) {
        worst = std::max(worst, matrix.rho());
    }
    return worst;
}

}  // namespace dgfm
