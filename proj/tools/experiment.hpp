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
#include <vector>

#include "dgfm/errors.hpp"
#include "dgfm/metrics.hpp"

namespace dgfm::cli {

/// Exit codes of the experiment runner.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kDataError = 3,
    kNumericError = 4,
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Everything one invocation needs. Optional fields are "not given".
struct ExperimentConfig {
    std::string algo;                 // dgfm | dgfm-plus | gfm | gfm-plus
    std::string dataset;              // LIBSVM path or builtin:quadratic|abs
    std::optional<std::size_t> subset;
    std::string subset_mode = "first";  // first | sample
    std::size_t m = 8;
    std::string topology = "ring";    // ring | complete | metropolis:<file> | matrix:<file>
    std::optional<double> eta;
    double delta = 1e-3;
    std::optional<std::size_t> iters;
    std::optional<std::size_t> batch;
    std::optional<std::size_t> mega_batch;
    std::optional<std::size_t> period;
    std::optional<std::size_t> gossip;
    std::uint64_t seed = 0;
    std::size_t repeats = 1;
    std::size_t record_every = 1;
    std::size_t stationarity_every = 0;
    std::size_t stationarity_samples = 0;
    std::string out;                  // empty: $DGFM_OUT_DIR/records.<format>
    std::string format = "csv";       // csv | json
    std::string params = "manual";    // manual | theorem:<epsilon>
    std::optional<double> lambda;     // default 1e-5 / n
    double alpha = 2.0;
    std::size_t dim = 10;             // builtin objectives only
    std::optional<double> init;       // starting value for every coordinate
    std::optional<double> lipschitz;  // theorem mode; default: objective hint
    std::optional<double> delta_gap;  // theorem mode; default: f(x0) + delta L_f
    double c = 1.0;
};

/// Parses flags (and an optional key=value --config file; flags win).
/// Throws ConfigError; `--help` is reported through `help_text`.
ExperimentConfig parse_arguments(int argc, const char* const* argv,
                                 std::string* help_text = nullptr);

/// Checks required fields and mutual exclusions. Throws ConfigError.
void check_config(const ExperimentConfig& cfg);

/// Runs every repeat and returns one record per seed. Throws library errors.
std::vector<RunRecord> execute(const ExperimentConfig& cfg);

/// execute() + write + one-line summary on `out`; maps errors to exit codes
/// with a message on `err`.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// argv entry point used by the dgfm-bench binary.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Renders a record's configuration echo as a --config file.
std::string config_file_text(const RunRecord& record);

}  // namespace dgfm::cli
