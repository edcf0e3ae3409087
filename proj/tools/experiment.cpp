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

#include "experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "dgfm/algorithms.hpp"
#include "dgfm/data.hpp"
#include "dgfm/objectives.hpp"
#include "dgfm/random.hpp"
#include "dgfm/theorem.hpp"
#include "dgfm/topology.hpp"

namespace dgfm::cli {

namespace {

constexpr std::size_t kMaxIterations = 100'000'000;

bool is_decentralized(const std::string& algo) { return algo == "dgfm" || algo == "dgfm-plus"; }
bool is_recursive(const std::string& algo) { return algo == "dgfm-plus" || algo == "gfm-plus"; }
bool is_builtin(const std::string& dataset) { return dataset.rfind("builtin:", 0) == 0; }

std::optional<double> theorem_epsilon(const std::string& params) {
    if (params == "manual") {
        return std::nullopt;
    }
    const std::string prefix = "theorem:";
    if (params.rfind(prefix, 0) != 0) {
        throw ConfigError("--params must be 'manual' or 'theorem:<epsilon>', got '" + params + "'");
    }
    const std::string text = params.substr(prefix.size());
    char* end = nullptr;
    const double epsilon = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !(epsilon > 0.0)) {
        throw ConfigError("--params theorem:<epsilon> needs a positive epsilon, got '" + text + "'");
    }
    return epsilon;
}

}  // namespace

ExperimentConfig parse_arguments(int argc, const char* const* argv, std::string* help_text) {
    ExperimentConfig cfg;
    CLI::App app{"Decentralized zeroth-order optimization benchmark", "dgfm-bench"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.add_option("--algo", cfg.algo, "dgfm | dgfm-plus | gfm | gfm-plus")
        ->required()
        ->check(CLI::IsMember({"dgfm", "dgfm-plus", "gfm", "gfm-plus"}));
    app.add_option("--dataset", cfg.dataset, "LIBSVM file (.gz ok) or builtin:quadratic|abs")
        ->required();
    app.add_option("--subset", cfg.subset, "keep this many samples");
    app.add_option("--subset-mode", cfg.subset_mode, "first | sample")
        ->check(CLI::IsMember({"first", "sample"}));
    app.add_option("--m", cfg.m, "number of agents")->check(CLI::PositiveNumber);
    app.add_option("--topology", cfg.topology, "ring | complete | metropolis:<file> | matrix:<file>");
    app.add_option("--eta", cfg.eta, "step size");
    app.add_option("--delta", cfg.delta, "smoothing radius");
    app.add_option("--iters", cfg.iters, "iterations K");
    app.add_option("--batch", cfg.batch, "pairs per estimate (b)");
    app.add_option("--mega-batch", cfg.mega_batch, "pairs per restart estimate (b')");
    app.add_option("--period", cfg.period, "cycle length T");
    app.add_option("--gossip", cfg.gossip, "gossip rounds after each restart");
    app.add_option("--seed", cfg.seed, "first seed");
    app.add_option("--repeats", cfg.repeats, "runs with seeds seed, seed+1, ...")
        ->check(CLI::PositiveNumber);
    app.add_option("--record-every", cfg.record_every, "metrics interval")
        ->check(CLI::PositiveNumber);
    app.add_option("--stationarity-every", cfg.stationarity_every,
                   "stationarity interval (0: 10 x record-every)");
    app.add_option("--stationarity-samples", cfg.stationarity_samples,
                   "draws per agent for stationarity (0: off)");
    app.add_option("--out", cfg.out, "output path");
    app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--params", cfg.params, "manual | theorem:<epsilon>");
    app.add_option("--lambda", cfg.lambda, "capped-l1 weight (default 1e-5/n)");
    app.add_option("--alpha", cfg.alpha, "capped-l1 cap");
    app.add_option("--dim", cfg.dim, "dimension of builtin objectives")->check(CLI::PositiveNumber);
    app.add_option("--init", cfg.init, "starting value of every coordinate");
    app.add_option("--lipschitz", cfg.lipschitz, "L_f for theorem mode");
    app.add_option("--delta-gap", cfg.delta_gap, "Delta_delta for theorem mode");
    app.add_option("--c", cfg.c, "smoothness constant c for theorem mode");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        if (help_text != nullptr) {
            *help_text = app.help();
        }
        throw;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

void check_config(const ExperimentConfig& cfg) {
    if (cfg.algo.empty() || cfg.dataset.empty()) {
        throw ConfigError("--algo and --dataset are required");
    }
    if (!(cfg.delta > 0.0)) {
        throw ConfigError("--delta must be positive");
    }
    if (cfg.repeats == 0 || cfg.record_every == 0) {
        throw ConfigError("--repeats and --record-every must be positive");
    }
    const auto epsilon = theorem_epsilon(cfg.params);
    if (epsilon) {
        if (cfg.eta) {
            throw ConfigError("--eta cannot be combined with --params theorem:<epsilon>");
        }
        if (cfg.batch || cfg.mega_batch || cfg.period || cfg.gossip) {
            throw ConfigError("--batch/--mega-batch/--period/--gossip are prescribed in theorem mode");
        }
        return;
    }
    if (!cfg.eta) {
        throw ConfigError("--eta is required (or use --params theorem:<epsilon>)");
    }
    if (!(*cfg.eta > 0.0)) {
        throw ConfigError("--eta must be positive");
    }
    if (!cfg.iters) {
        throw ConfigError("--iters is required");
    }
    if (is_recursive(cfg.algo)) {
        if (!cfg.batch || !cfg.mega_batch || !cfg.period) {
            throw ConfigError(cfg.algo + " requires --batch, --mega-batch and --period");
        }
        if (cfg.algo == "dgfm-plus" && !cfg.gossip) {
            throw ConfigError("dgfm-plus requires --gossip");
        }
    }
    for (const auto& [value, name] : {std::pair{cfg.batch, "--batch"},
                                      std::pair{cfg.mega_batch, "--mega-batch"},
                                      std::pair{cfg.period, "--period"},
                                      std::pair{cfg.gossip, "--gossip"}}) {
        if (value && *value == 0) {
            throw ConfigError(std::string(name) + " must be at least 1");
        }
    }
}

namespace {

struct Problem {
    std::vector<ObjectivePtr> locals;  // one per agent
    ObjectivePtr global;               // whole objective, for centralized runs
    Vector x0;
    std::optional<double> lambda;      // resolved, SVM only
};

// Bare names such as "a9a" are looked up in $DGFM_DATA_DIR.
std::string resolve_dataset_path(const std::string& name) {
    const char* dir = std::getenv("DGFM_DATA_DIR");
    if (std::filesystem::exists(name) || dir == nullptr || *dir == '\0') {
        return name;
    }
    for (const std::string candidate : {name, name + ".gz"}) {
        const auto path = std::filesystem::path(dir) / candidate;
        if (std::filesystem::exists(path)) {
            return path.string();
        }
    }
    return name;
}

class DatasetCache {
public:
    const SparseDataset& get(const std::string& path) {
        if (!dataset_) {
            dataset_ = std::make_shared<SparseDataset>(load_libsvm(resolve_dataset_path(path)));
        }
        return *dataset_;
    }

private:
    std::shared_ptr<SparseDataset> dataset_;
};

Problem build_problem(const ExperimentConfig& cfg, std::uint64_t seed, DatasetCache& cache) {
    Problem problem;
    const std::size_t agents = is_decentralized(cfg.algo) ? cfg.m : 1;
    if (is_builtin(cfg.dataset)) {
        const std::string which = cfg.dataset.substr(std::string("builtin:").size());
        if (which == "quadratic") {
            problem.global = make_quadratic_test(cfg.dim);
        } else if (which == "abs") {
            problem.global = std::make_shared<AbsTest>(cfg.dim);
        } else {
            throw ConfigError("unknown builtin objective '" + which + "'");
        }
        problem.locals.assign(agents, problem.global);
        problem.x0 = Vector::Constant(static_cast<Eigen::Index>(cfg.dim), cfg.init.value_or(1.0));
        return problem;
    }

    SparseDataset data = cache.get(cfg.dataset);
    if (cfg.subset) {
        data = cfg.subset_mode == "sample" ? subset_sample(data, *cfg.subset, seed)
                                           : subset_first(data, *cfg.subset);
    }
    data = normalize_rows(std::move(data));
    if (data.size() == 0 || data.dim == 0) {
        throw InvalidPartition("dataset '" + cfg.dataset + "' has no samples");
    }
    const auto shared = std::make_shared<const SparseDataset>(std::move(data));
    const double lambda = cfg.lambda.value_or(default_svm_lambda(shared->size()));
    problem.lambda = lambda;
    problem.global = std::make_shared<CappedL1Svm>(shared, lambda, cfg.alpha);
    if (agents > 1) {
        problem.locals = make_svm_locals(shared, partition(shared->size(), agents, seed), lambda,
                                         cfg.alpha);
    } else {
        problem.locals = {problem.global};
    }
    problem.x0 = Vector::Constant(static_cast<Eigen::Index>(shared->dim), cfg.init.value_or(0.0));
    return problem;
}

std::unique_ptr<TopologySchedule> build_topology(const ExperimentConfig& cfg) {
    const std::string& spec = cfg.topology;
    if (spec == "ring") {
        return std::make_unique<TopologySchedule>(build_ring(cfg.m));
    }
    if (spec == "complete") {
        return std::make_unique<TopologySchedule>(build_complete(cfg.m));
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string path = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "metropolis" && !path.empty()) {
        auto schedule = std::make_unique<TopologySchedule>(
            build_metropolis_hastings(load_adjacency_file(path)));
        if (schedule->agents() != cfg.m) {
            throw ConfigError("adjacency file has " + std::to_string(schedule->agents()) +
                              " agents but --m is " + std::to_string(cfg.m));
        }
        return schedule;
    }
    if (kind == "matrix" && !path.empty()) {
        auto schedule = std::make_unique<TopologySchedule>(load_mixing_matrix_file(path));
        if (schedule->agents() != cfg.m) {
            throw ConfigError("matrix file has " + std::to_string(schedule->agents()) +
                              " agents but --m is " + std::to_string(cfg.m));
        }
        return schedule;
    }
    throw ConfigError("unknown topology '" + spec + "'");
}

// Effective (manual-mode) parameters of one run.
struct Resolved {
    double eta = 0.0;
    std::size_t iters = 0;
    std::size_t batch = 1;
    std::size_t mega_batch = 0;
    std::size_t period = 0;
    std::size_t gossip = 0;
    std::vector<std::pair<std::string, ConfigValue>> derived;
};

Resolved resolve_parameters(const ExperimentConfig& cfg, const Problem& problem, double rho) {
    Resolved r;
    const auto epsilon = theorem_epsilon(cfg.params);
    if (!epsilon) {
        r.eta = *cfg.eta;
        r.iters = *cfg.iters;
        r.batch = cfg.batch.value_or(1);
        r.mega_batch = cfg.mega_batch.value_or(0);
        r.period = cfg.period.value_or(0);
        r.gossip = cfg.gossip.value_or(0);
        return r;
    }

    TheoremInputs in;
    in.rho = std::max(rho, kRhoFloor);
    in.dim = problem.global->dim();
    in.delta = cfg.delta;
    in.epsilon = *epsilon;
    in.agents = is_decentralized(cfg.algo) ? cfg.m : 1;
    in.c = cfg.c;
    std::string lipschitz_source = "flag";
    if (cfg.lipschitz) {
        in.lipschitz = *cfg.lipschitz;
    } else if (const auto hint = problem.global->lipschitz_hint(); hint && *hint > 0.0) {
        in.lipschitz = *hint;
        lipschitz_source = "objective";
    } else {
        RandomStream rng(cfg.seed, {0, 0, StreamPurpose::probe});
        const double radius = std::max(1.0, problem.x0.norm());
        in.lipschitz = estimate_lipschitz(*problem.global, 1000, radius, problem.x0, rng).value;
        lipschitz_source = "estimated lower bound";
        if (!(in.lipschitz > 0.0)) {
            throw ConfigError("could not estimate a positive Lipschitz constant; pass --lipschitz");
        }
    }
    in.delta_gap = cfg.delta_gap.value_or(network_loss(problem.locals, problem.x0) +
                                          cfg.delta * in.lipschitz);

    const TheoremParams p = is_recursive(cfg.algo) ? theorem_params_dgfm_plus(in)
                                                   : theorem_params_dgfm(in);
    for (const auto& warning : p.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    r.eta = p.eta;
    r.iters = cfg.iters.value_or(p.iterations);
    if (r.iters > kMaxIterations) {
        throw ConfigError("prescribed K = " + std::to_string(r.iters) +
                          " is impractically large; pass --iters");
    }
    if (is_recursive(cfg.algo)) {
        r.batch = p.batch;
        r.mega_batch = p.mega_batch;
        r.period = p.period;
        r.gossip = p.gossip_rounds;
    }
    r.derived = {{"params", cfg.params},
                 {"epsilon", *epsilon},
                 {"rho", in.rho},
                 {"lipschitz", in.lipschitz},
                 {"lipschitz_source", lipschitz_source},
                 {"delta_gap", in.delta_gap},
                 {"c", in.c},
                 {"sigma_squared", p.sigma_squared},
                 {"smoothness", p.smoothness},
                 {"eta", p.eta},
                 {"iterations", static_cast<std::int64_t>(p.iterations)},
                 {"alpha_1", p.alpha_1},
                 {"alpha_2", p.alpha_2},
                 {"beta_x", p.beta_x},
                 {"beta_y", p.beta_y}};
    if (is_recursive(cfg.algo)) {
        r.derived.emplace_back("batch", static_cast<std::int64_t>(p.batch));
        r.derived.emplace_back("mega_batch", static_cast<std::int64_t>(p.mega_batch));
        r.derived.emplace_back("period", static_cast<std::int64_t>(p.period));
        r.derived.emplace_back("gossip", static_cast<std::int64_t>(p.gossip_rounds));
        r.derived.emplace_back("cycles", static_cast<std::int64_t>(p.cycles));
        r.derived.emplace_back("gossip_raw", p.gossip_rounds_raw);
    }
    return r;
}

std::vector<std::pair<std::string, ConfigValue>> echo_config(const ExperimentConfig& cfg,
                                                            const Problem& problem,
                                                            const Resolved& r,
                                                            std::uint64_t seed) {
    using I = std::int64_t;
    std::vector<std::pair<std::string, ConfigValue>> echo{{"algo", cfg.algo},
                                                          {"dataset", cfg.dataset}};
    if (cfg.subset) {
        echo.emplace_back("subset", static_cast<I>(*cfg.subset));
        echo.emplace_back("subset-mode", cfg.subset_mode);
    }
    if (is_decentralized(cfg.algo)) {
        echo.emplace_back("m", static_cast<I>(cfg.m));
        echo.emplace_back("topology", cfg.topology);
    }
    echo.emplace_back("eta", r.eta);
    echo.emplace_back("delta", cfg.delta);
    echo.emplace_back("iters", static_cast<I>(r.iters));
    echo.emplace_back("batch", static_cast<I>(r.batch));
    if (is_recursive(cfg.algo)) {
        echo.emplace_back("mega-batch", static_cast<I>(r.mega_batch));
        echo.emplace_back("period", static_cast<I>(r.period));
    }
    if (cfg.algo == "dgfm-plus") {
        echo.emplace_back("gossip", static_cast<I>(r.gossip));
    }
    echo.emplace_back("seed", static_cast<I>(seed));
    echo.emplace_back("repeats", I{1});
    echo.emplace_back("record-every", static_cast<I>(cfg.record_every));
    echo.emplace_back("stationarity-every", static_cast<I>(cfg.stationarity_every));
    echo.emplace_back("stationarity-samples", static_cast<I>(cfg.stationarity_samples));
    echo.emplace_back("format", cfg.format);
    echo.emplace_back("params", std::string("manual"));
    if (problem.lambda) {
        echo.emplace_back("lambda", *problem.lambda);
        echo.emplace_back("alpha", cfg.alpha);
    }
    if (is_builtin(cfg.dataset)) {
        echo.emplace_back("dim", static_cast<I>(cfg.dim));
    }
    echo.emplace_back("init", problem.x0.size() > 0 ? problem.x0[0] : 0.0);
    return echo;
}

}  // namespace

std::vector<RunRecord> execute(const ExperimentConfig& cfg) {
    check_config(cfg);
    std::unique_ptr<TopologySchedule> topology;
    if (is_decentralized(cfg.algo)) {
        topology = build_topology(cfg);
    }
    DatasetCache cache;
    RunOptions options;
    options.record_every = cfg.record_every;
    options.stationarity_every = cfg.stationarity_every;
    options.stationarity_samples = cfg.stationarity_samples;
    options.keep_iterates = false;

    std::vector<RunRecord> records;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        const Problem problem = build_problem(cfg, seed, cache);
        const double rho = topology ? topology->rho() : 0.0;
        const Resolved p = resolve_parameters(cfg, problem, rho);

        RunResult result;
        if (cfg.algo == "dgfm") {
            result = dgfm_run(*topology, problem.locals,
                              DgfmConfig{p.eta, cfg.delta, p.iters, seed, p.batch}, problem.x0,
                              options);
        } else if (cfg.algo == "gfm") {
            result = gfm_run(problem.global, DgfmConfig{p.eta, cfg.delta, p.iters, seed, p.batch},
                             problem.x0, options);
        } else {
            const DgfmPlusConfig plus{p.eta,    cfg.delta,    p.iters, seed,
                                      p.period, p.mega_batch, p.batch, std::max<std::size_t>(p.gossip, 1)};
            result = cfg.algo == "dgfm-plus"
                         ? dgfm_plus_run(*topology, problem.locals, plus, problem.x0, options)
                         : gfm_plus_run(problem.global, plus, problem.x0, options);
        }
        result.record.metadata.dataset = cfg.dataset;
        result.record.metadata.topology = topology ? cfg.topology : "centralized";
        result.record.metadata.config = echo_config(cfg, problem, p, seed);
        result.record.metadata.derived = p.derived;
        records.push_back(std::move(result.record));
    }
    return records;
}

namespace {

std::string output_path(const ExperimentConfig& cfg) {
    if (!cfg.out.empty()) {
        return cfg.out;
    }
    const char* dir = std::getenv("DGFM_OUT_DIR");
    const std::string base = (dir != nullptr && *dir != '\0') ? std::string(dir) : ".";
    return base + "/records." + cfg.format;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto records = execute(cfg);
        const std::string path = output_path(cfg);
        write_records(records, path, cfg.format == "json" ? RecordFormat::json : RecordFormat::csv);

        double sum = 0.0;
        double sum_sq = 0.0;
        std::uint64_t calls = 0;
        for (const auto& record : records) {
            const double loss = record.entries.back().loss;
            sum += loss;
            sum_sq += loss * loss;
            calls = record.entries.back().zo_calls;
        }
        const auto n = static_cast<double>(records.size());
        const double mean = sum / n;
        const double std_dev =
            records.size() > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)))
                               : 0.0;
        out << cfg.algo << ": " << records.size() << " run(s), final loss "
            << format_double(mean) << " +/- " << format_double(std_dev) << " after " << calls
            << " zeroth-order calls; records in " << path << '\n';
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericError& e) {
        err << "numeric failure at iteration " << e.iteration() << ": " << e.what() << '\n';
        return kNumericError;
    } catch (const ParseError& e) {
        err << "data error in '" << cfg.dataset << "': " << e.what() << '\n';
        return kDataError;
    } catch (const InvalidPartition& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kDataError;
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        std::string help;
        try {
            cfg = parse_arguments(argc, argv, &help);
        } catch (const CLI::CallForHelp&) {
            out << help;
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return run_experiment(cfg, out, err);
}

std::string config_file_text(const RunRecord& record) {
    std::ostringstream text;
    for (const auto& [key, value] : record.metadata.config) {
        text << key << '=';
        std::visit(
            [&text](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::string>) {
                    text << '"' << v << '"';
                } else if constexpr (std::is_same_v<T, double>) {
                    text << format_double(v);
                } else {
                    text << v;
                }
            },
            value);
        text << '\n';
    }
    return text.str();
}

}  // namespace dgfm::cli
