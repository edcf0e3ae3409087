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

#include "dgfm/state.hpp"

#include "dgfm/errors.hpp"

namespace dgfm {

NetworkState NetworkState::initial(std::size_t m, const VectorRef& x0) {
    if (m == 0 || x0.size() == 0) {
        throw ShapeError("network state needs at least one agent and one coordinate");
    }
    const auto rows = static_cast<Eigen::Index>(m);
    NetworkState state;
    state.x = x0.transpose().replicate(rows, 1);
    state.x_prev = state.x;
    state.y = Stacked::Zero(rows, x0.size());
    state.v = Stacked::Zero(rows, x0.size());
    state.g_prev = Stacked::Zero(rows, x0.size());
    return state;
}

Vector row_mean(const Stacked& stacked) {
    return stacked.colwise().mean().transpose();
}

}  // namespace dgfm
