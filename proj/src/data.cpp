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

#include "dgfm/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "dgfm/errors.hpp"
#include "dgfm/random.hpp"

namespace dgfm {

double SparseVector::dot(const VectorRef& x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        sum += values[k] * x[indices[k]];
    }
    return sum;
}

double SparseVector::norm() const {
    double sum = 0.0;
    for (const double v : values) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

namespace {

bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string_view next_token(std::string_view& line) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string_view::npos) {
        line = {};
        return {};
    }
    line.remove_prefix(start);
    const auto stop = line.find_first_of(" \t\r");
    const auto token = line.substr(0, stop);
    line.remove_prefix(stop == std::string_view::npos ? line.size() : stop);
    return token;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in) {
    SparseDataset dataset;
    std::vector<double> raw_labels;
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
            rest = rest.substr(0, hash);
        }
        const auto label_token = next_token(rest);
        if (label_token.empty()) {
            continue;
        }
        double label = 0.0;
        if (!parse_double(label_token, label)) {
            throw ParseError("invalid label '" + std::string(label_token) + "'", line_no);
        }
        SparseVector row;
        for (auto token = next_token(rest); !token.empty(); token = next_token(rest)) {
            const auto colon = token.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError("missing ':' in '" + std::string(token) + "'", line_no);
            }
            const auto key = token.substr(0, colon);
            if (key == "qid") {
                continue;
            }
            std::uint64_t index = 0;
            const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
            if (ec != std::errc() || ptr != key.data() + key.size() || index == 0 ||
                index > UINT32_MAX) {
                throw ParseError("invalid feature index '" + std::string(key) + "'", line_no);
            }
            double value = 0.0;
            if (!parse_double(token.substr(colon + 1), value)) {
                throw ParseError("invalid feature value in '" + std::string(token) + "'", line_no);
            }
            const auto zero_based = static_cast<std::uint32_t>(index - 1);
            if (!row.indices.empty() && zero_based <= row.indices.back()) {
                throw ParseError("feature indices must be strictly increasing", line_no);
            }
            row.indices.push_back(zero_based);
            row.values.push_back(value);
            max_index = std::max<std::size_t>(max_index, index);
        }
        raw_labels.push_back(label);
        dataset.rows.push_back(std::move(row));
    }

    const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
    if (distinct.size() > 2) {
        throw ParseError("more than two distinct labels; binary data expected", line_no);
    }
    const double negative = distinct.empty() ? 0.0 : *distinct.begin();
    dataset.labels.reserve(raw_labels.size());
    for (const double label : raw_labels) {
        if (distinct.size() == 2) {
            dataset.labels.push_back(label == negative ? -1.0 : 1.0);
        } else {
            dataset.labels.push_back(label > 0.0 ? 1.0 : -1.0);
        }
    }
    dataset.dim = max_index;
    return dataset;
}

namespace {

std::string read_gzip(const std::string& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw IoError("cannot open '" + path + "'");
    }
    std::string text;
    std::array<char, 1 << 16> buffer{};
    int got = 0;
    while ((got = gzread(file, buffer.data(), static_cast<unsigned>(buffer.size()))) > 0) {
        text.append(buffer.data(), static_cast<std::size_t>(got));
    }
    int err = Z_OK;
    const char* message = gzerror(file, &err);
    const std::string error_text = message != nullptr ? message : "";
    gzclose(file);
    if (got < 0 || (err != Z_OK && err != Z_STREAM_END)) {
        throw IoError("error decompressing '" + path + "': " + error_text);
    }
    return text;
}

}  // namespace

SparseDataset load_libsvm(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        std::istringstream in(read_gzip(path));
        return parse_libsvm(in);
    }
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return parse_libsvm(in);
}

void write_libsvm(std::ostream& out, const SparseDataset& dataset) {
    std::array<char, 32> buffer{};
    const auto write_double = [&](double value) {
        const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
        out.write(buffer.data(), ptr - buffer.data());
    };
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        out << (dataset.labels[r] > 0 ? "+1" : "-1");
        const auto& row = dataset.rows[r];
        for (std::size_t k = 0; k < row.nonzeros(); ++k) {
            out << ' ' << (row.indices[k] + 1) << ':';
            write_double(row.values[k]);
        }
        out << '\n';
    }
}

SparseDataset normalize_rows(SparseDataset dataset) {
    for (auto& row : dataset.rows) {
        const double norm = row.norm();
        if (norm > 0.0) {
            for (auto& v : row.values) {
                v /= norm;
            }
        }
    }
    return dataset;
}

SparseDataset subset_first(const SparseDataset& dataset, std::size_t n) {
    SparseDataset out;
    const std::size_t keep = std::min(n, dataset.size());
    out.rows.assign(dataset.rows.begin(), dataset.rows.begin() + static_cast<std::ptrdiff_t>(keep));
    out.labels.assign(dataset.labels.begin(),
                      dataset.labels.begin() + static_cast<std::ptrdiff_t>(keep));
    out.dim = dataset.dim;
    return out;
}

SparseDataset subset_sample(const SparseDataset& dataset, std::size_t n, std::uint64_t seed) {
    if (n >= dataset.size()) {
        return dataset;
    }
    auto order = seeded_permutation(dataset.size(), seed, 0);
    order.resize(n);
    std::sort(order.begin(), order.end());
    SparseDataset out;
    out.dim = dataset.dim;
    for (const std::size_t r : order) {
        out.rows.push_back(dataset.rows[r]);
        out.labels.push_back(dataset.labels[r]);
    }
    return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed, std::uint32_t salt) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    RandomStream rng(seed, {salt, 0, StreamPurpose::partition});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }
    return order;
}

Partition partition(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m == 0) {
        throw InvalidPartition("partition needs at least one agent");
    }
    if (n < m) {
        throw InvalidPartition("cannot split " + std::to_string(n) + " samples over " +
                               std::to_string(m) + " agents");
    }
    const auto order = seeded_permutation(n, seed, 1);
    Partition result;
    result.assignment.resize(m);
    for (std::size_t position = 0; position < n; ++position) {
        result.assignment[position % m].push_back(order[position]);
    }
    return result;
}

}  // namespace dgfm
