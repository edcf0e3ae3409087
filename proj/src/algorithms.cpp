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

#include "dgfm/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "dgfm/errors.hpp"
#include "dgfm/random.hpp"
#include "dgfm/smoothing.hpp"

namespace dgfm {

void validate(const DgfmConfig& cfg) {
    if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
        throw InvalidParameter("step size eta must be positive");
    }
    if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
        throw InvalidParameter("smoothing radius delta must be positive");
    }
    if (cfg.batch == 0) {
        throw InvalidParameter("batch size must be at least 1");
    }
}

void validate(const DgfmPlusConfig& cfg) {
    // eta = 0 is allowed here: it freezes x, which is a useful probe of the
    // recursive estimator.
    if (!(cfg.eta >= 0.0) || !std::isfinite(cfg.eta)) {
        throw InvalidParameter("step size eta must be nonnegative");
    }
    if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
        throw InvalidParameter("smoothing radius delta must be positive");
    }
    if (cfg.period == 0 || cfg.mega_batch == 0 || cfg.batch == 0 || cfg.gossip_rounds == 0) {
        throw InvalidParameter("period, mega-batch, batch and gossip rounds must be at least 1");
    }
}

namespace {

void check_network(const NetworkState& state, const TopologySchedule& topology,
                   const std::vector<ObjectivePtr>& locals) {
    if (locals.size() != state.agents() || topology.agents() != state.agents()) {
        throw ShapeError("network has " + std::to_string(state.agents()) + " agents but " +
                         std::to_string(locals.size()) + " objectives and a " +
                         std::to_string(topology.agents()) + "-agent topology");
    }
    for (const auto& local : locals) {
        if (!local || local->dim() != state.dim()) {
            throw ShapeError("local objective dimension does not match the iterate");
        }
    }
}

void check_budget(const NetworkState& state, std::size_t iterations) {
    if (state.k >= iterations) {
        throw BudgetExceeded("iteration budget of " + std::to_string(iterations) +
                             " already used");
    }
}

RandomStream agent_stream(std::uint64_t seed, std::size_t agent, std::size_t k) {
    return RandomStream(seed, {static_cast<std::uint32_t>(agent), k, StreamPurpose::estimator});
}

// Mini-batch estimate for every agent at its own iterate.
Stacked local_estimates(const Stacked& x, const std::vector<ObjectivePtr>& locals,
                        double delta, std::size_t batch_size, std::uint64_t seed, std::size_t k,
                        std::uint64_t& calls) {
    Stacked g(x.rows(), x.cols());
    const SmoothingParams params(delta, static_cast<std::size_t>(x.cols()));
    for (std::size_t i = 0; i < locals.size(); ++i) {
        auto rng = agent_stream(seed, i, k);
        const auto batch = draw_batch(*locals[i], batch_size, rng);
        ZerothOrderOracle oracle(*locals[i]);
        const auto row = static_cast<Eigen::Index>(i);
        g.row(row) = minibatch_estimate(oracle, x.row(row).transpose(), params, batch).transpose();
        calls += oracle.calls();
    }
    return g;
}

// v^{k-1} + g(x^k; S) - g(x^{k-1}; S) for every agent.
Stacked recursive_estimates(const NetworkState& state, const std::vector<ObjectivePtr>& locals,
                            double delta, std::size_t batch_size, std::uint64_t seed,
                            std::uint64_t& calls) {
    Stacked v(state.v.rows(), state.v.cols());
    const SmoothingParams params(delta, state.dim());
    for (std::size_t i = 0; i < locals.size(); ++i) {
        auto rng = agent_stream(seed, i, state.k);
        const auto batch = draw_batch(*locals[i], batch_size, rng);
        ZerothOrderOracle oracle(*locals[i]);
        const auto row = static_cast<Eigen::Index>(i);
        const Vector diff = spider_difference(oracle, state.x.row(row).transpose(),
                                              state.x_prev.row(row).transpose(), params, batch);
        v.row(row) = state.v.row(row) + diff.transpose();
        calls += oracle.calls();
    }
    return v;
}

void check_finite(const NetworkState& state) {
    if (!state.x.allFinite() || !state.y.allFinite()) {
        throw NumericError("non-finite iterate after iteration " + std::to_string(state.k - 1),
                           state.k - 1);
    }
}

using StepFn = std::function<NetworkState(const NetworkState&)>;
using LossFn = std::function<double(const Vector&)>;
using StationarityFn = std::function<double(const Vector&, std::size_t)>;

RunResult run_loop(NetworkState state, std::size_t iterations, const StepFn& step,
                   const LossFn& loss, const StationarityFn& stationarity,
                   const RunOptions& options, RunMetadata metadata, std::size_t period) {
    if (options.record_every == 0) {
        throw InvalidParameter("record_every must be at least 1");
    }
    const std::size_t stationarity_every =
        options.stationarity_every == 0 ? 10 * options.record_every : options.stationarity_every;
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    result.record.metadata = std::move(metadata);
    const auto record = [&](const NetworkState& s) {
        RecordEntry entry;
        entry.iter = s.k;
        entry.zo_calls = s.oracle_calls;
        entry.comm_rounds = s.comm_rounds;
        const Vector mean = row_mean(s.x);
        entry.loss = loss(mean);
        entry.consensus_error = consensus_error(s.x);
        if (options.stationarity_samples > 0 &&
            (s.k % stationarity_every == 0 || s.k == iterations)) {
            entry.stationarity = stationarity(mean, s.k);
        }
        entry.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        result.record.entries.push_back(entry);
        if (options.keep_iterates && s.k > 0) {
            result.record.iterates.push_back({s.k, s.x});
        }
    };

    record(state);
    while (state.k < iterations) {
        if (period > 0 && state.k % period == 0) {
            result.record.restarts.push_back(state.k);
        }
        state = step(state);
        check_finite(state);
        if (state.k % options.record_every == 0 || state.k == iterations) {
            record(state);
        }
    }
    result.state = std::move(state);
    return result;
}

std::vector<std::pair<std::string, ConfigValue>> echo(const DgfmConfig& cfg) {
    return {{"eta", cfg.eta},
            {"delta", cfg.delta},
            {"iters", static_cast<std::int64_t>(cfg.iterations)},
            {"seed", static_cast<std::int64_t>(cfg.seed)},
            {"batch", static_cast<std::int64_t>(cfg.batch)}};
}

std::vector<std::pair<std::string, ConfigValue>> echo(const DgfmPlusConfig& cfg) {
    return {{"eta", cfg.eta},
            {"delta", cfg.delta},
            {"iters", static_cast<std::int64_t>(cfg.iterations)},
            {"seed", static_cast<std::int64_t>(cfg.seed)},
            {"batch", static_cast<std::int64_t>(cfg.batch)},
            {"mega_batch", static_cast<std::int64_t>(cfg.mega_batch)},
            {"period", static_cast<std::int64_t>(cfg.period)},
            {"gossip", static_cast<std::int64_t>(cfg.gossip_rounds)}};
}

StationarityFn network_stationarity_fn(const std::vector<ObjectivePtr>& locals, double delta,
                                       std::size_t samples, std::uint64_t seed) {
    return [&locals, delta, samples, seed](const Vector& x, std::size_t k) {
        return network_stationarity(locals, x, delta, samples, seed, k).norm;
    };
}

}  // namespace

NetworkState dgfm_step(const NetworkState& state, const TopologySchedule& topology,
                       const std::vector<ObjectivePtr>& locals, const DgfmConfig& cfg) {
    validate(cfg);
    check_budget(state, cfg.iterations);
    check_network(state, topology, locals);
    const MixingMatrix& mixing = topology.at(state.k, 0);

    NetworkState next;
    next.oracle_calls = state.oracle_calls;
    const Stacked g =
        local_estimates(state.x, locals, cfg.delta, cfg.batch, cfg.seed, state.k, next.oracle_calls);
    // (y - g_prev) + g: when y already equals g_prev (one agent) this is g
    // bit for bit.
    next.y = mixing.mix((state.y - state.g_prev) + g);
    next.x = mixing.mix(state.x - cfg.eta * next.y);
    next.comm_rounds = state.comm_rounds + 2;
    next.g_prev = g;
    next.x_prev = state.x;
    next.v = state.v;
    next.k = state.k + 1;
    return next;
}

RunResult dgfm_run(const TopologySchedule& topology, const std::vector<ObjectivePtr>& locals,
                   const DgfmConfig& cfg, const VectorRef& x0, const RunOptions& options) {
    validate(cfg);
    NetworkState initial = NetworkState::initial(topology.agents(), x0);
    check_network(initial, topology, locals);
    RunMetadata metadata{"dgfm", cfg.seed, "", "", topology.rho(), echo(cfg), {}};
    return run_loop(
        std::move(initial), cfg.iterations,
        [&](const NetworkState& s) { return dgfm_step(s, topology, locals, cfg); },
        [&](const Vector& x) { return network_loss(locals, x); },
        network_stationarity_fn(locals, cfg.delta, options.stationarity_samples, cfg.seed),
        options, std::move(metadata), 0);
}

NetworkState dgfm_plus_step(const NetworkState& state, const TopologySchedule& topology,
                            const std::vector<ObjectivePtr>& locals, const DgfmPlusConfig& cfg) {
    validate(cfg);
    check_budget(state, cfg.iterations);
    check_network(state, topology, locals);

    NetworkState next;
    next.oracle_calls = state.oracle_calls;
    next.comm_rounds = state.comm_rounds;
    if (state.k % cfg.period == 0) {
        next.v = local_estimates(state.x, locals, cfg.delta, cfg.mega_batch, cfg.seed, state.k,
                                 next.oracle_calls);
        next.y = next.v;
        for (std::size_t tau = 1; tau <= cfg.gossip_rounds; ++tau) {
            next.y = topology.at(state.k, tau).mix(next.y);
        }
        next.comm_rounds += cfg.gossip_rounds;
    } else {
        next.v = recursive_estimates(state, locals, cfg.delta, cfg.batch, cfg.seed,
                                     next.oracle_calls);
        next.y = topology.at(state.k, 0).mix((state.y - state.v) + next.v);
        next.comm_rounds += 1;
    }
    next.x = topology.at(state.k, 0).mix(state.x - cfg.eta * next.y);
    next.comm_rounds += 1;
    next.x_prev = state.x;
    next.g_prev = state.g_prev;
    next.k = state.k + 1;
    return next;
}

RunResult dgfm_plus_run(const TopologySchedule& topology, const std::vector<ObjectivePtr>& locals,
                        const DgfmPlusConfig& cfg, const VectorRef& x0,
                        const RunOptions& options) {
    validate(cfg);
    NetworkState initial = NetworkState::initial(topology.agents(), x0);
    check_network(initial, topology, locals);
    RunMetadata metadata{"dgfm-plus", cfg.seed, "", "", topology.rho(), echo(cfg), {}};
    return run_loop(
        std::move(initial), cfg.iterations,
        [&](const NetworkState& s) { return dgfm_plus_step(s, topology, locals, cfg); },
        [&](const Vector& x) { return network_loss(locals, x); },
        network_stationarity_fn(locals, cfg.delta, options.stationarity_samples, cfg.seed),
        options, std::move(metadata), cfg.period);
}

namespace {

void check_single(const ObjectivePtr& objective, const VectorRef& x0) {
    if (!objective) {
        throw InvalidParameter("objective is required");
    }
    if (static_cast<std::size_t>(x0.size()) != objective->dim()) {
        throw ShapeError("starting point dimension does not match the objective");
    }
}

}  // namespace

RunResult gfm_run(const ObjectivePtr& objective, const DgfmConfig& cfg, const VectorRef& x0,
                  const RunOptions& options) {
    validate(cfg);
    check_single(objective, x0);
    const std::vector<ObjectivePtr> locals{objective};
    const auto step = [&](const NetworkState& s) {
        check_budget(s, cfg.iterations);
        NetworkState next = s;
        const Stacked g =
            local_estimates(s.x, locals, cfg.delta, cfg.batch, cfg.seed, s.k, next.oracle_calls);
        next.x = s.x - cfg.eta * g;
        next.x_prev = s.x;
        next.g_prev = g;
        next.k = s.k + 1;
        return next;
    };
    RunMetadata metadata{"gfm", cfg.seed, "", "centralized", 0.0, echo(cfg), {}};
    return run_loop(
        NetworkState::initial(1, x0), cfg.iterations, step,
        [&](const Vector& x) { return full_loss(*objective, x); },
        network_stationarity_fn(locals, cfg.delta, options.stationarity_samples, cfg.seed),
        options, std::move(metadata), 0);
}

RunResult gfm_plus_run(const ObjectivePtr& objective, const DgfmPlusConfig& cfg,
                       const VectorRef& x0, const RunOptions& options) {
    validate(cfg);
    check_single(objective, x0);
    const std::vector<ObjectivePtr> locals{objective};
    const auto step = [&](const NetworkState& s) {
        check_budget(s, cfg.iterations);
        NetworkState next = s;
        if (s.k % cfg.period == 0) {
            next.v = local_estimates(s.x, locals, cfg.delta, cfg.mega_batch, cfg.seed, s.k,
                                     next.oracle_calls);
        } else {
            next.v = recursive_estimates(s, locals, cfg.delta, cfg.batch, cfg.seed,
                                         next.oracle_calls);
        }
        next.x = s.x - cfg.eta * next.v;
        next.x_prev = s.x;
        next.k = s.k + 1;
        return next;
    };
    RunMetadata metadata{"gfm-plus", cfg.seed, "", "centralized", 0.0, echo(cfg), {}};
    return run_loop(
        NetworkState::initial(1, x0), cfg.iterations, step,
        [&](const Vector& x) { return full_loss(*objective, x); },
        network_stationarity_fn(locals, cfg.delta, options.stationarity_samples, cfg.seed),
        options, std::move(metadata), cfg.period);
}

Vector select_output(const RunRecord& record, RandomStream& rng) {
    std::size_t total = 0;
    for (const auto& snapshot : record.iterates) {
        total += static_cast<std::size_t>(snapshot.x.rows());
    }
    if (total == 0) {
        throw EmptyTrajectory("no recorded iterates to select from");
    }
    std::size_t pick = rng.index(total);
    for (const auto& snapshot : record.iterates) {
        const auto rows = static_cast<std::size_t>(snapshot.x.rows());
        if (pick < rows) {
            return snapshot.x.row(static_cast<Eigen::Index>(pick)).transpose();
        }
        pick -= rows;
    }
    throw EmptyTrajectory("selection fell outside the trajectory");
}

}  // namespace dgfm
