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

// Parameter prescriptions under which the convergence guarantees hold.
// beta_x, beta_y and the alphas are analysis constants, reported for
// reference only; the optimizers never read them.

#include <cstddef>
#include <string>
#include <vector>

namespace dgfm {

struct TheoremInputs {
    double rho = 0.0;          // spectral gap, in (0, 1)
    double lipschitz = 1.0;    // L_f
    std::size_t dim = 1;       // d
    double delta = 1e-3;       // smoothing radius
    double epsilon = 0.1;      // target stationarity
    std::size_t agents = 1;    // m
    double delta_gap = 1.0;    // Delta_delta = f_delta(x0) - f* bound
    double c = 1.0;            // constant in L_delta = c L_f sqrt(d) / delta
};

struct TheoremParams {
    double eta = 0.0;
    double beta_x = 0.0;
    double beta_y = 0.0;
    double alpha_1 = 0.0;
    double alpha_2 = 0.0;
    std::size_t iterations = 0;  // K

    // DGFM+ only.
    std::size_t batch = 0;          // b
    std::size_t mega_batch = 0;     // b'
    std::size_t period = 0;         // T
    std::size_t cycles = 0;         // R
    std::size_t gossip_rounds = 0;  // repeated gossip after a restart

    // Derived constants, for post-hoc checks.
    double sigma_squared = 0.0;
    double smoothness = 0.0;                // L_delta
    std::vector<double> eta_clauses;        // eta = min(eta_clauses)
    double gossip_rounds_raw = 0.0;         // before rounding and clamping
    std::vector<std::string> warnings;
};

/// Step size, K and analysis constants for DGFM. Throws InvalidParameter
/// unless 0 < rho < 1 and every other input is positive.
TheoremParams theorem_params_dgfm(const TheoremInputs& in);

/// Step size, batch sizes, cycle length, cycle count and gossip rounds for
/// DGFM+. A nonpositive gossip-round formula is clamped to 1 with a warning.
TheoremParams theorem_params_dgfm_plus(const TheoremInputs& in);

/// Smallest rho accepted by the helpers; complete graphs (rho = 0) should be
/// passed as this value.
inline constexpr double kRhoFloor = 1e-6;

}  // namespace dgfm
