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

#include "dgfm/smoothing.hpp"

#include <cmath>
#include <numbers>

#include "dgfm/errors.hpp"
#include "dgfm/random.hpp"

namespace dgfm {

Direction Direction::normalized(Vector v) {
    const double norm = v.norm();
    if (v.size() == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
        throw ShapeError("direction must be a nonzero finite vector");
    }
    v /= norm;
    return Direction(std::move(v));
}

Direction sample_sphere(std::size_t d, RandomStream& rng) {
    if (d == 0) {
        throw ShapeError("sample_sphere: dimension must be at least 1");
    }
    Vector v(static_cast<Eigen::Index>(d));
    double norm = 0.0;
    while (norm == 0.0) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            v[j] = rng.normal();
        }
        norm = v.norm();
    }
    return Direction::normalized(std::move(v));
}

SampleBatch draw_batch(const StochasticObjective& objective, std::size_t b, RandomStream& rng) {
    SampleBatch batch;
    batch.pairs.reserve(b);
    const std::size_t n = objective.num_samples();
    const std::size_t d = objective.dim();
    for (std::size_t j = 0; j < b; ++j) {
        const std::size_t xi = rng.index(n);
        batch.pairs.push_back({xi, sample_sphere(d, rng)});
    }
    return batch;
}

SmoothingParams::SmoothingParams(double delta, std::size_t d) : delta_(delta), d_(d) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidParameter("smoothing radius delta must be positive and finite");
    }
    if (d == 0) {
        throw InvalidParameter("dimension must be at least 1");
    }
}

double SmoothingParams::smoothness(double lipschitz, double c) const {
    return c * lipschitz * std::sqrt(static_cast<double>(d_)) / delta_;
}

namespace {

void check_dims(const VectorRef& x, const SmoothingParams& params, const StochasticObjective& obj) {
    if (static_cast<std::size_t>(x.size()) != params.dim() || params.dim() != obj.dim()) {
        throw ShapeError("estimator: point dimension " + std::to_string(x.size()) +
                         ", smoothing dimension " + std::to_string(params.dim()) +
                         ", objective dimension " + std::to_string(obj.dim()));
    }
}

// Scalar factor d/(2 delta) * (f(x + delta w) - f(x - delta w)).
double two_point_scale(ZerothOrderOracle& oracle, const VectorRef& x, const SmoothingParams& params,
                       const Direction& w, std::size_t xi) {
    if (w.dim() != params.dim()) {
        throw ShapeError("direction dimension does not match the smoothing dimension");
    }
    const double delta = params.delta();
    const Vector step = delta * w.vec();
    const double up = oracle(x + step, xi);
    const double down = oracle(x - step, xi);
    return static_cast<double>(params.dim()) / (2.0 * delta) * (up - down);
}

}  // namespace

Vector two_point_estimate(ZerothOrderOracle& oracle, const VectorRef& x,
                          const SmoothingParams& params, const Direction& w, std::size_t xi) {
    check_dims(x, params, oracle.objective());
    return two_point_scale(oracle, x, params, w, xi) * w.vec();
}

Vector minibatch_estimate(ZerothOrderOracle& oracle, const VectorRef& x,
                          const SmoothingParams& params, const SampleBatch& batch) {
    if (batch.empty()) {
        throw EmptyBatch("minibatch_estimate: empty batch");
    }
    check_dims(x, params, oracle.objective());
    Vector sum = Vector::Zero(x.size());
    for (const auto& [xi, w] : batch.pairs) {
        sum.noalias() += two_point_scale(oracle, x, params, w, xi) * w.vec();
    }
    return sum / static_cast<double>(batch.size());
}

Vector spider_difference(ZerothOrderOracle& oracle, const VectorRef& x_new, const VectorRef& x_old,
                         const SmoothingParams& params, const SampleBatch& batch) {
    if (x_new.size() != x_old.size()) {
        throw ShapeError("spider_difference: points have different dimensions");
    }
    if (batch.empty()) {
        throw EmptyBatch("spider_difference: empty batch");
    }
    check_dims(x_new, params, oracle.objective());
    Vector sum = Vector::Zero(x_new.size());
    for (const auto& [xi, w] : batch.pairs) {
        const double scale_new = two_point_scale(oracle, x_new, params, w, xi);
        const double scale_old = two_point_scale(oracle, x_old, params, w, xi);
        sum.noalias() += (scale_new - scale_old) * w.vec();
    }
    return sum / static_cast<double>(batch.size());
}

SurrogateGradient surrogate_grad_estimate(const StochasticObjective& objective, const VectorRef& x,
                                          const SmoothingParams& params, std::size_t n_samples,
                                          RandomStream& rng) {
    if (n_samples == 0) {
        throw InvalidParameter("surrogate_grad_estimate needs at least one sample");
    }
    check_dims(x, params, objective);
    ZerothOrderOracle oracle(objective);
    Vector sum = Vector::Zero(x.size());
    Vector sum_sq = Vector::Zero(x.size());
    for (std::size_t s = 0; s < n_samples; ++s) {
        const std::size_t xi = rng.index(objective.num_samples());
        const Direction w = sample_sphere(params.dim(), rng);
        const Vector g = two_point_estimate(oracle, x, params, w, xi);
        sum += g;
        sum_sq += g.cwiseProduct(g);
    }
    const auto n = static_cast<double>(n_samples);
    SurrogateGradient result;
    result.mean = sum / n;
    result.samples = n_samples;
    if (n_samples > 1) {
        const Vector var = ((sum_sq / n) - result.mean.cwiseProduct(result.mean)).cwiseMax(0.0) *
                           (n / (n - 1.0));
        // |mean - grad| bounds the error of the norm, and its RMS is
        // sqrt(trace(Cov) / n).
        result.standard_error = std::sqrt(var.sum() / n);
    }
    return result;
}

double sigma_squared(std::size_t d, double lipschitz) {
    if (d == 0 || !(lipschitz > 0.0)) {
        throw InvalidParameter("sigma_squared needs d >= 1 and L_f > 0");
    }
    return 16.0 * std::sqrt(2.0 * std::numbers::pi) * static_cast<double>(d) * lipschitz *
           lipschitz;
}

}  // namespace dgfm
