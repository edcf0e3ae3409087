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

// Counter-based random streams.
//
// Every random draw in the library comes from a Philox4x32-10 block keyed by
// the run seed. The counter encodes (agent, iteration, purpose, draw index),
// so the numbers an agent sees at iteration k never depend on how many draws
// other agents made or in which order agents were evaluated.

#include <array>
#include <cstddef>
#include <cstdint>

namespace dgfm {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection of `counter` under `key`.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// What a stream is used for; keeps streams of different roles disjoint.
enum class StreamPurpose : std::uint8_t {
    estimator = 1,
    output_selection = 2,
    metrics = 3,
    partition = 4,
    probe = 5,
    subset = 6,
    test = 7,
};

struct StreamId {
    std::uint32_t agent = 0;
    std::uint64_t iteration = 0;
    StreamPurpose purpose = StreamPurpose::estimator;
};

class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamId id);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller; values come in cached pairs.
    double normal();

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);

    std::uint64_t draws() const noexcept { return draw_; }

private:
    void refill();

    PhiloxKey key_{};
    PhiloxCounter base_{};
    std::uint64_t draw_ = 0;  // blocks consumed
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dgfm
