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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgfm/types.hpp"

namespace dgfm {

/// Outcome of checking a candidate gossip matrix.
struct TopologyReport {
    bool square = true;
    bool nonnegative = true;
    bool positive_diagonal = true;
    bool rows_stochastic = true;
    bool columns_stochastic = true;
    bool connected = true;  // spectral gap strictly below one

    double worst_negative_entry = 0.0;
    double smallest_diagonal = 0.0;
    double worst_row_sum_error = 0.0;
    double worst_column_sum_error = 0.0;
    double rho = 0.0;

    bool doubly_stochastic() const { return rows_stochastic && columns_stochastic; }
    bool ok() const;
    std::string summary() const;
};

inline constexpr double kStochasticTolerance = 1e-12;

/// Checks every gossip-matrix invariant. Never throws for a square input.
TopologyReport validate(const Matrix& weights);

/// Largest singular value of (A - 11^T/m).
double spectral_gap(const Matrix& weights);

/// Doubly stochastic gossip weights with the spectral gap cached.
class MixingMatrix {
public:
    /// Throws InvalidTopology (or DisconnectedGraph) if any invariant fails.
    explicit MixingMatrix(Matrix weights);

    std::size_t agents() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    const Matrix& weights() const noexcept { return weights_; }
    double rho() const noexcept { return rho_; }

    /// Row i of the result is sum_j a_ij * row j of `stacked`.
    Stacked mix(const Stacked& stacked) const;

private:
    Matrix weights_;
    double rho_;
    // Nonzero pattern per row: (column, weight).
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

/// Ring with weight 1/3 on self and each neighbour. Requires m >= 3.
MixingMatrix build_ring(std::size_t m);

/// Uniform averaging over all agents (A = J). Any m >= 1.
MixingMatrix build_complete(std::size_t m);

/// Metropolis-Hastings weights a_ij = 1/(1 + max(deg_i, deg_j)).
/// `adjacency` must be symmetric with a true diagonal; degrees exclude the
/// self-loop.
MixingMatrix build_metropolis_hastings(const std::vector<std::vector<bool>>& adjacency);

/// Whitespace-separated rows, one agent per line. Validated.
MixingMatrix load_mixing_matrix(std::istream& in);
MixingMatrix load_mixing_matrix_file(const std::string& path);

/// 0/1 adjacency, one row per line. Diagonal entries are forced true.
std::vector<std::vector<bool>> load_adjacency(std::istream& in);
std::vector<std::vector<bool>> load_adjacency_file(const std::string& path);

/// Gossip matrix lookup for iteration k and gossip repetition tau.
///
/// tau = 0 is the ordinary per-iteration mix; tau >= 1 indexes the repeated
/// gossip rounds of a restart. Without overrides every lookup returns the
/// base matrix.
class TopologySchedule {
public:
    TopologySchedule(MixingMatrix base);  // NOLINT: implicit by intent

    void set(std::size_t k, std::size_t tau, MixingMatrix matrix);

    const MixingMatrix& at(std::size_t k, std::size_t tau = 0) const;
    const MixingMatrix& base() const noexcept { return base_; }
    std::size_t agents() const noexcept { return base_.agents(); }

    /// Largest spectral gap over the base and all overrides.
    double rho() const;

private:
    MixingMatrix base_;
    std::map<std::pair<std::size_t, std::size_t>, MixingMatrix> overrides_;
};

}  // namespace dgfm
