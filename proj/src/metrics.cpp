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

#include "dgfm/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dgfm/errors.hpp"
#include "dgfm/random.hpp"
#include "dgfm/smoothing.hpp"

namespace dgfm {

double consensus_error(const Stacked& stacked) {
    if (stacked.rows() == 0) {
        return 0.0;
    }
    const Eigen::RowVectorXd mean = stacked.colwise().mean();
    return (stacked.rowwise() - mean).squaredNorm();
}

Stationarity stationarity_estimate(const StochasticObjective& objective, const VectorRef& x,
                                   double delta, std::size_t n_samples, RandomStream& rng) {
    const SmoothingParams params(delta, objective.dim());
    const auto estimate = surrogate_grad_estimate(objective, x, params, n_samples, rng);
    return {estimate.mean.norm(), estimate.standard_error};
}

Stationarity network_stationarity(const std::vector<ObjectivePtr>& locals, const VectorRef& x,
                                  double delta, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t iteration) {
    if (locals.empty()) {
        throw ShapeError("network_stationarity needs at least one objective");
    }
    const SmoothingParams params(delta, static_cast<std::size_t>(x.size()));
    Vector sum = Vector::Zero(x.size());
    double variance = 0.0;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        RandomStream rng(seed, {static_cast<std::uint32_t>(i), iteration, StreamPurpose::metrics});
        const auto estimate = surrogate_grad_estimate(*locals[i], x, params, n_samples, rng);
        sum += estimate.mean;
        variance += estimate.standard_error * estimate.standard_error;
    }
    const auto m = static_cast<double>(locals.size());
    return {(sum / m).norm(), std::sqrt(variance) / m};
}

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& record : records) {
        for (const auto& e : record.entries) {
            out << record.metadata.algorithm << ',' << record.metadata.seed << ',' << e.iter << ','
                << e.zo_calls << ',' << e.comm_rounds << ',' << format_double(e.loss) << ','
                << format_double(e.consensus_error) << ','
                << (e.stationarity ? format_double(*e.stationarity) : std::string()) << ','
                << format_double(e.wall_ms) << '\n';
        }
    }
}

namespace {

nlohmann::ordered_json to_json(const ConfigValue& value) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, value);
}

}  // namespace

void write_json(std::ostream& out, const std::vector<RunRecord>& records) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& record : records) {
        nlohmann::ordered_json config = nlohmann::ordered_json::object();
        for (const auto& [key, value] : record.metadata.config) {
            config[key] = to_json(value);
        }
        nlohmann::ordered_json derived = nlohmann::ordered_json::object();
        for (const auto& [key, value] : record.metadata.derived) {
            derived[key] = to_json(value);
        }
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto& e : record.entries) {
            entries.push_back({{"iter", e.iter},
                               {"zo_calls", e.zo_calls},
                               {"comm_rounds", e.comm_rounds},
                               {"loss", e.loss},
                               {"consensus_err", e.consensus_error},
                               {"stationarity", e.stationarity ? nlohmann::ordered_json(*e.stationarity)
                                                               : nlohmann::ordered_json(nullptr)},
                               {"wall_ms", e.wall_ms}});
        }
        array.push_back({{"metadata",
                          {{"algorithm", record.metadata.algorithm},
                           {"seed", record.metadata.seed},
                           {"dataset", record.metadata.dataset},
                           {"topology", record.metadata.topology},
                           {"rho", record.metadata.rho},
                           {"config", config},
                           {"derived", derived}}},
                         {"restarts", record.restarts},
                         {"entries", entries}});
    }
    out << array.dump(2) << '\n';
}

void write_records(const std::vector<RunRecord>& records, const std::string& path,
                   RecordFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    if (format == RecordFormat::csv) {
        write_csv(out, records);
    } else {
        write_json(out, records);
    }
    out.flush();
    if (!out) {
        throw IoError("error while writing '" + path + "'");
    }
}

namespace {

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("invalid number '" + text + "'", line);
    }
    return value;
}

}  // namespace

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw ParseError("unexpected CSV header", line_no);
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream tokens(line);
        std::string field;
        while (std::getline(tokens, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        if (fields.size() != 9) {
            throw ParseError("expected 9 CSV fields, got " + std::to_string(fields.size()), line_no);
        }
        CsvRow row;
        row.algo = fields[0];
        row.seed = parse_number<std::uint64_t>(fields[1], line_no);
        row.entry.iter = parse_number<std::size_t>(fields[2], line_no);
        row.entry.zo_calls = parse_number<std::uint64_t>(fields[3], line_no);
        row.entry.comm_rounds = parse_number<std::uint64_t>(fields[4], line_no);
        row.entry.loss = parse_number<double>(fields[5], line_no);
        row.entry.consensus_error = parse_number<double>(fields[6], line_no);
        if (!fields[7].empty()) {
            row.entry.stationarity = parse_number<double>(fields[7], line_no);
        }
        row.entry.wall_ms = parse_number<double>(fields[8], line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dgfm
