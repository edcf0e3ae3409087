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

// Decentralized gradient-free methods with gradient tracking (DGFM, DGFM+)
// and their centralized counterparts (GFM, GFM+).
//
// Each step is a pure function of the previous NetworkState. All randomness
// for agent i at iteration k comes from the stream (seed, i, k), so agents
// can be evaluated in any order with bit-identical results.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dgfm/metrics.hpp"
#include "dgfm/objectives.hpp"
#include "dgfm/state.hpp"
#include "dgfm/topology.hpp"

namespace dgfm {

class RandomStream;

struct DgfmConfig {
    double eta = 0.0;
    double delta = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    /// Pairs per estimate. DGFM uses one; GFM may use more.
    std::size_t batch = 1;
};

struct DgfmPlusConfig {
    double eta = 0.0;
    double delta = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    std::size_t period = 1;         // T: a restart fires whenever k mod T == 0
    std::size_t mega_batch = 1;     // b'
    std::size_t batch = 1;          // b
    std::size_t gossip_rounds = 1;  // repeated mixes of y after a restart
};

/// Throws InvalidParameter for non-positive step, radius or counts.
void validate(const DgfmConfig& cfg);
void validate(const DgfmPlusConfig& cfg);

struct RunOptions {
    /// Metrics (and iterate snapshots) every `record_every` iterations, plus
    /// the final one. 1 keeps the full trajectory.
    std::size_t record_every = 1;
    /// Stationarity every this many iterations; 0 means 10 * record_every.
    std::size_t stationarity_every = 0;
    /// Draws per agent for each stationarity estimate; 0 disables it.
    std::size_t stationarity_samples = 0;
    bool keep_iterates = true;
};

struct RunResult {
    NetworkState state;
    RunRecord record;
};

/// One DGFM iteration:
///   y^{k+1} = A (y^k + g^k - g^{k-1}),   x^{k+1} = A (x^k - eta y^{k+1}).
/// Costs 2m*b evaluations and two gossip rounds.
NetworkState dgfm_step(const NetworkState& state, const TopologySchedule& topology,
                       const std::vector<ObjectivePtr>& locals, const DgfmConfig& cfg);

RunResult dgfm_run(const TopologySchedule& topology, const std::vector<ObjectivePtr>& locals,
                   const DgfmConfig& cfg, const VectorRef& x0, const RunOptions& options = {});

/// One DGFM+ iteration. When k mod T == 0 each agent restarts its estimate
/// with b' pairs, sets y = v and gossips y `gossip_rounds` times. Otherwise
/// it applies the recursive update
///   v^k = v^{k-1} + g(x^k; S) - g(x^{k-1}; S)
/// with one shared batch S, and mixes y^k + v^k - v^{k-1} once. Both branches
/// end with x^{k+1} = A (x^k - eta y^{k+1}).
NetworkState dgfm_plus_step(const NetworkState& state, const TopologySchedule& topology,
                            const std::vector<ObjectivePtr>& locals, const DgfmPlusConfig& cfg);

RunResult dgfm_plus_run(const TopologySchedule& topology, const std::vector<ObjectivePtr>& locals,
                        const DgfmPlusConfig& cfg, const VectorRef& x0,
                        const RunOptions& options = {});

/// Centralized two-point SGD: x^{k+1} = x^k - eta g(x^k; S), |S| = cfg.batch.
RunResult gfm_run(const ObjectivePtr& objective, const DgfmConfig& cfg, const VectorRef& x0,
                  const RunOptions& options = {});

/// Centralized SPIDER variant: mega-batch restart every T steps,
/// recursive correction in between, x^{k+1} = x^k - eta v^k.
RunResult gfm_plus_run(const ObjectivePtr& objective, const DgfmPlusConfig& cfg,
                       const VectorRef& x0, const RunOptions& options = {});

/// Uniform draw over the recorded (iteration, agent) iterates.
/// Throws EmptyTrajectory if nothing was recorded.
Vector select_output(const RunRecord& record, RandomStream& rng);

}  // namespace dgfm
