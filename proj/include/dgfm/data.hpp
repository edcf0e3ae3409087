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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgfm/types.hpp"

namespace dgfm {

/// Sparse row with strictly increasing 0-based indices.
struct SparseVector {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;

    std::size_t nonzeros() const noexcept { return indices.size(); }
    double dot(const VectorRef& x) const;
    double norm() const;

    bool operator==(const SparseVector&) const = default;
};

/// Binary-labelled sparse samples; labels are exactly -1 or +1.
struct SparseDataset {
    std::vector<SparseVector> rows;
    std::vector<double> labels;
    std::size_t dim = 0;

    std::size_t size() const noexcept { return rows.size(); }
};

/// Parses LIBSVM text ("label idx:val ..."), 1-based indices on disk.
///
/// Two distinct labels are mapped to {-1,+1} with the smaller one negative.
/// A single distinct label keeps its sign. Throws ParseError with the line
/// number for malformed pairs or non-increasing indices.
SparseDataset parse_libsvm(std::istream& in);

/// Loads a LIBSVM file; names ending in ".gz" are decompressed.
SparseDataset load_libsvm(const std::string& path);

/// Writes LIBSVM text that parse_libsvm reads back to the same dataset.
void write_libsvm(std::ostream& out, const SparseDataset& dataset);

/// Scales every nonzero row to unit l2 norm.
SparseDataset normalize_rows(SparseDataset dataset);

/// First `n` rows (all rows if n >= size).
SparseDataset subset_first(const SparseDataset& dataset, std::size_t n);

/// `n` rows drawn without replacement by `seed`, kept in file order.
SparseDataset subset_sample(const SparseDataset& dataset, std::size_t n, std::uint64_t seed);

/// Sample ownership per agent.
struct Partition {
    std::vector<std::vector<std::size_t>> assignment;

    std::size_t agents() const noexcept { return assignment.size(); }
    std::size_t local_size(std::size_t agent) const { return assignment.at(agent).size(); }
};

/// Seeded shuffle dealt round-robin; local sizes differ by at most one.
/// Throws InvalidPartition when n < m or m == 0.
Partition partition(std::size_t n, std::size_t m, std::uint64_t seed);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed, std::uint32_t salt);

}  // namespace dgfm
