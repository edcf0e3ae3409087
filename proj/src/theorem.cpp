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

#include "dgfm/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dgfm/errors.hpp"
#include "dgfm/smoothing.hpp"

namespace dgfm {

namespace {

void check_inputs(const TheoremInputs& in) {
    if (!(in.rho > 0.0 && in.rho < 1.0)) {
        throw InvalidParameter("rho must lie in (0, 1); for a complete graph pass rho = " +
                               std::to_string(kRhoFloor));
    }
    if (!(in.lipschitz > 0.0) || in.dim == 0 || !(in.delta > 0.0) || !(in.epsilon > 0.0) ||
        in.agents == 0 || !(in.delta_gap > 0.0) || !(in.c > 0.0)) {
        throw InvalidParameter("theorem parameters need positive L_f, d, delta, epsilon, m, "
                               "Delta_delta and c");
    }
}

std::size_t ceil_count(double value) {
    if (!std::isfinite(value) || value > 1e18) {
        throw InvalidParameter("prescribed count overflows");
    }
    return static_cast<std::size_t>(std::max(1.0, std::ceil(value)));
}

}  // namespace

TheoremParams theorem_params_dgfm(const TheoremInputs& in) {
    check_inputs(in);
    TheoremParams p;
    const double rho2 = in.rho * in.rho;
    const double eps = in.epsilon;
    const double m = static_cast<double>(in.agents);
    const double lf = in.lipschitz;
    const double s2 = sigma_squared(in.dim, lf);
    const double sigma = std::sqrt(s2);
    const double l_delta = in.c * lf * std::sqrt(static_cast<double>(in.dim)) / in.delta;

    p.sigma_squared = s2;
    p.smoothness = l_delta;
    p.alpha_1 = p.alpha_2 = (1.0 - rho2) / (2.0 * rho2);
    p.eta_clauses = {
        (1.0 - rho2) * (1.0 - rho2) / (48.0 * sigma * (1.0 + rho2) * rho2) * eps / l_delta,
        eps * eps / (32.0 * l_delta * (s2 + lf)),
        8.0 * std::sqrt(6.0 * m * s2) / (eps * l_delta),
    };
    p.eta = *std::min_element(p.eta_clauses.begin(), p.eta_clauses.end());
    p.beta_y = (1.0 - rho2) * eps * eps / (384.0 * s2 * rho2 * (1.0 + rho2)) * p.eta / m;
    p.beta_x = 1152.0 * s2 * rho2 * (1.0 + rho2) / ((1.0 - rho2) * (1.0 - rho2)) * l_delta *
               l_delta / (eps * eps) * p.beta_y;
    const double k_floor = 2.0 * (s2 + lf * lf) * (1.0 - rho2) / (3.0 * m * s2 * (1.0 + rho2));
    p.iterations = ceil_count(std::max(k_floor, 32.0 * in.delta_gap / (eps * eps * p.eta)));
    return p;
}

TheoremParams theorem_params_dgfm_plus(const TheoremInputs& in) {
    check_inputs(in);
    TheoremParams p;
    const double rho2 = in.rho * in.rho;
    const double eps = in.epsilon;
    const double m = static_cast<double>(in.agents);
    const double d = static_cast<double>(in.dim);
    const double lf = in.lipschitz;
    const double lf2 = lf * lf;
    const double c2 = in.c * in.c;
    const double s2 = sigma_squared(in.dim, lf);
    const double l_delta = in.c * lf * std::sqrt(d) / in.delta;

    p.sigma_squared = s2;
    p.smoothness = l_delta;
    p.alpha_1 = p.alpha_2 = (1.0 - rho2) / (2.0 * rho2);

    p.period = ceil_count(c2 / (2.0 * in.delta));
    const double period = static_cast<double>(p.period);
    p.batch = ceil_count(d / (m * eps));
    p.mega_batch = ceil_count(s2 / (12.0 * eps * eps));

    p.gossip_rounds_raw =
        (std::log(c2 * eps) - std::log(36.0 * (s2 + lf2) * (1.0 - rho2))) / std::log(in.rho) + 2.0;
    if (!(p.gossip_rounds_raw > 0.0)) {
        p.gossip_rounds = 1;
        p.warnings.push_back("gossip-round formula gave " + std::to_string(p.gossip_rounds_raw) +
                             "; clamped to 1");
    } else {
        p.gossip_rounds = ceil_count(p.gossip_rounds_raw);
    }

    const double eta_1 = std::pow(1.0 - rho2, 1.5) * std::sqrt(in.delta) / rho2 /
                         std::sqrt(1.0 + rho2) / std::sqrt(d) / std::sqrt(24.0);
    const double inner = lf2 / (m * eps) +
                         3.0 * (1.0 - rho2) / (2.0 * c2) *
                             (c2 * lf2 / ((1.0 - rho2) * in.delta) + 2.0 * rho2 * lf2 * m);
    const double eta_2 = 1.0 / (2.0 * std::sqrt(3.0 * d * period)) / std::sqrt(inner);
    const double eta_3 = 0.5 / l_delta;
    p.eta_clauses = {eta_1, eta_2, eta_3};
    p.eta = std::min({eta_1, eta_2, eta_3});

    p.beta_y = (1.0 - rho2) * in.delta * p.eta / (2.0 * rho2 * rho2 * c2 * m) *
               (c2 / (2.0 * in.delta) + 2.0 * period);
    p.beta_x = (1.0 - rho2) * (1.0 - rho2) / (2.0 * rho2 * (1.0 + rho2) * p.eta * p.eta) * p.beta_y;
    p.cycles = ceil_count(24.0 * in.delta_gap * in.delta / (eps * eps * p.eta * c2));
    if (p.cycles > SIZE_MAX / p.period) {
        throw InvalidParameter("prescribed iteration count overflows");
    }
    p.iterations = p.cycles * p.period;
    return p;
}

}  // namespace dgfm
