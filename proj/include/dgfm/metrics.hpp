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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dgfm/objectives.hpp"
#include "dgfm/state.hpp"
#include "dgfm/types.hpp"

namespace dgfm {

class RandomStream;

/// sum_i |x_i - mean(x)|^2.
double consensus_error(const Stacked& stacked);
inline double consensus_error(const NetworkState& state) { return consensus_error(state.x); }

struct Stationarity {
    double norm = 0.0;
    double standard_error = 0.0;
};

/// Norm of a Monte Carlo estimate of grad f_delta(x). The smoothed gradient
/// lies in the delta-Goldstein subdifferential, so this upper-bounds the
/// stationarity measure min{|g| : g in that subdifferential}, up to noise.
Stationarity stationarity_estimate(const StochasticObjective& objective, const VectorRef& x,
                                   double delta, std::size_t n_samples, RandomStream& rng);

/// Same, for f = (1/m) sum_i f^i; each local objective gets `n_samples`
/// draws from its own metrics stream.
Stationarity network_stationarity(const std::vector<ObjectivePtr>& locals, const VectorRef& x,
                                  double delta, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t iteration);

struct RecordEntry {
    std::size_t iter = 0;
    std::uint64_t zo_calls = 0;
    std::uint64_t comm_rounds = 0;
    double loss = 0.0;
    double consensus_error = 0.0;
    std::optional<double> stationarity;
    double wall_ms = 0.0;
};

/// Stacked iterates x^k kept for output selection.
struct IterateSnapshot {
    std::size_t iter = 0;
    Stacked x;
};

using ConfigValue = std::variant<std::string, double, std::int64_t>;

struct RunMetadata {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::string dataset;
    std::string topology;
    double rho = 0.0;
    /// Complete configuration echo, in insertion order.
    std::vector<std::pair<std::string, ConfigValue>> config;
    /// Values computed from the configuration (e.g. prescribed parameters).
    std::vector<std::pair<std::string, ConfigValue>> derived;
};

struct RunRecord {
    RunMetadata metadata;
    std::vector<RecordEntry> entries;
    std::vector<IterateSnapshot> iterates;
    std::vector<std::size_t> restarts;  // iterations that began a cycle
};

enum class RecordFormat { csv, json };

inline constexpr const char* kCsvHeader =
    "algo,seed,iter,zo_calls,comm_rounds,loss,consensus_err,stationarity,wall_ms";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_json(std::ostream& out, const std::vector<RunRecord>& records);

/// Writes to `path`; throws IoError naming the path on failure.
void write_records(const std::vector<RunRecord>& records, const std::string& path,
                   RecordFormat format);

struct CsvRow {
    std::string algo;
    std::uint64_t seed = 0;
    RecordEntry entry;
};

/// Reads what write_csv produces.
std::vector<CsvRow> read_csv(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace dgfm
