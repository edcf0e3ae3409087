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

#include "dgfm/types.hpp"

namespace dgfm {

/// Stacked per-agent variables at iteration k. Row i belongs to agent i.
///
///   x       iterate x_i^k
///   y       gradient-tracking variable y_i^k
///   v       variance-reduced estimate v_i^{k-1} (DGFM+)
///   g_prev  last estimator g_i(x_i^{k-1}; S_i^{k-1}) (DGFM)
///   x_prev  previous iterate x_i^{k-1}
struct NetworkState {
    Stacked x;
    Stacked y;
    Stacked v;
    Stacked g_prev;
    Stacked x_prev;
    std::size_t k = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t comm_rounds = 0;

    /// Every agent at x0, x^{-1} = x^0, and y = v = g_prev = 0.
    static NetworkState initial(std::size_t m, const VectorRef& x0);

    std::size_t agents() const noexcept { return static_cast<std::size_t>(x.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(x.cols()); }
};

/// Average of the rows.
Vector row_mean(const Stacked& stacked);

}  // namespace dgfm
