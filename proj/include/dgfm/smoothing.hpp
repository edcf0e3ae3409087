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

// Two-point zeroth-order estimators of the randomized-smoothing gradient.
//
//   g(x; w, xi) = d / (2 delta) * (f(x + delta w; xi) - f(x - delta w; xi)) * w
//
// with w uniform on the unit sphere. In expectation over (w, xi) this is the
// gradient of f_delta(x) = E_u[f(x + delta u)], u uniform in the unit ball.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgfm/objectives.hpp"
#include "dgfm/types.hpp"

namespace dgfm {

class RandomStream;

/// Unit-norm direction on the sphere S^{d-1}.
class Direction {
public:
    /// Normalizes `v`; throws ShapeError for an empty or zero vector.
    static Direction normalized(Vector v);

    const Vector& vec() const noexcept { return w_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(w_.size()); }

    Direction operator-() const { return Direction(-w_); }

private:
    explicit Direction(Vector w) : w_(std::move(w)) {}
    Vector w_;
};

/// Gaussian draw, normalized: exactly uniform on the sphere.
Direction sample_sphere(std::size_t d, RandomStream& rng);

struct SamplePair {
    std::size_t xi;
    Direction w;
};

/// Mini-batch S = {(xi_j, w_j)}.
struct SampleBatch {
    std::vector<SamplePair> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
};

/// b pairs: xi uniform over the objective's samples, w uniform on the sphere.
SampleBatch draw_batch(const StochasticObjective& objective, std::size_t b, RandomStream& rng);

/// Smoothing radius delta and dimension d.
class SmoothingParams {
public:
    /// Throws InvalidParameter unless delta > 0 and d >= 1.
    SmoothingParams(double delta, std::size_t d);

    double delta() const noexcept { return delta_; }
    std::size_t dim() const noexcept { return d_; }

    /// L_delta = c L_f sqrt(d) / delta.
    double smoothness(double lipschitz, double c = 1.0) const;

private:
    double delta_;
    std::size_t d_;
};

/// Objective plus a count of every function evaluation made through it.
class ZerothOrderOracle {
public:
    explicit ZerothOrderOracle(const StochasticObjective& objective) : objective_(&objective) {}

    double operator()(const VectorRef& x, std::size_t xi) {
        ++calls_;
        return objective_->eval(x, xi);
    }

    const StochasticObjective& objective() const noexcept { return *objective_; }
    std::uint64_t calls() const noexcept { return calls_; }

private:
    const StochasticObjective* objective_;
    std::uint64_t calls_ = 0;
};

/// Exactly two evaluations, both at sample xi.
Vector two_point_estimate(ZerothOrderOracle& oracle, const VectorRef& x,
                          const SmoothingParams& params, const Direction& w, std::size_t xi);

/// Mean of two_point_estimate over the batch; 2b evaluations.
Vector minibatch_estimate(ZerothOrderOracle& oracle, const VectorRef& x,
                          const SmoothingParams& params, const SampleBatch& batch);

/// g(x_new; S) - g(x_old; S) with the same (xi, w) pairs at both points;
/// 4b evaluations.
Vector spider_difference(ZerothOrderOracle& oracle, const VectorRef& x_new, const VectorRef& x_old,
                         const SmoothingParams& params, const SampleBatch& batch);

/// Monte Carlo estimate of grad f_delta(x) with its standard error.
struct SurrogateGradient {
    Vector mean;
    /// RMS error of `mean`; also bounds the error of its norm.
    double standard_error = 0.0;
    std::size_t samples = 0;
};

SurrogateGradient surrogate_grad_estimate(const StochasticObjective& objective, const VectorRef& x,
                                          const SmoothingParams& params, std::size_t n_samples,
                                          RandomStream& rng);

/// sigma^2 = 16 sqrt(2 pi) d L_f^2, the second-moment bound of the
/// single-pair estimator.
double sigma_squared(std::size_t d, double lipschitz);

}  // namespace dgfm
