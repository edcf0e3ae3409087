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

#include "dgfm/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "dgfm/errors.hpp"
#include "dgfm/random.hpp"

namespace dgfm {

double StochasticObjective::eval(const VectorRef& x, std::size_t xi) const {
    if (xi >= num_samples()) {
        throw SampleIndexError("sample index " + std::to_string(xi) + " out of range for " +
                               name() + " with " + std::to_string(num_samples()) + " samples");
    }
    if (static_cast<std::size_t>(x.size()) != dim()) {
        throw ShapeError(name() + ": point has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(dim()));
    }
    return eval_unchecked(x, xi);
}

double full_loss(const StochasticObjective& objective, const VectorRef& x) {
    const std::size_t n = objective.num_samples();
    double sum = 0.0;
    for (std::size_t xi = 0; xi < n; ++xi) {
        sum += objective.eval(x, xi);
    }
    return sum / static_cast<double>(n);
}

double network_loss(const std::vector<ObjectivePtr>& locals, const VectorRef& x) {
    double sum = 0.0;
    for (const auto& local : locals) {
        sum += full_loss(*local, x);
    }
    return sum / static_cast<double>(locals.size());
}

namespace {

Vector random_unit(std::size_t d, RandomStream& rng) {
    Vector u(static_cast<Eigen::Index>(d));
    double norm = 0.0;
    do {
        for (Eigen::Index j = 0; j < u.size(); ++j) {
            u[j] = rng.normal();
        }
        norm = u.norm();
    } while (norm == 0.0);
    return u / norm;
}

Vector random_in_ball(const VectorRef& center, double radius, RandomStream& rng) {
    const auto d = static_cast<double>(center.size());
    const double r = radius * std::pow(rng.uniform(), 1.0 / d);
    return center + r * random_unit(static_cast<std::size_t>(center.size()), rng);
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const StochasticObjective& objective, std::size_t probes,
                                     double radius, const VectorRef& center, RandomStream& rng) {
    if (probes < 2) {
        throw InvalidParameter("estimate_lipschitz needs at least 2 probes");
    }
    if (!(radius > 0.0)) {
        throw InvalidParameter("estimate_lipschitz needs a positive radius");
    }
    const std::size_t d = objective.dim();
    const std::size_t n = objective.num_samples();

    LipschitzEstimate best;
    best.probes = probes;
    Vector best_x = center;
    Vector best_u = random_unit(d, rng);
    std::size_t best_xi = 0;

    const auto quotient = [&](const Vector& x, const Vector& y, std::size_t xi) {
        const double gap = (x - y).norm();
        if (gap == 0.0) {
            return 0.0;
        }
        return std::abs(objective.eval(x, xi) - objective.eval(y, xi)) / gap;
    };

    // First half: independent pairs in the ball. Second half: local search
    // around the best (point, direction) so far, which matters in higher
    // dimension where random directions are nearly orthogonal to the
    // steepest one.
    const std::size_t exploration = probes / 2;
    for (std::size_t p = 0; p < probes; ++p) {
        Vector x;
        Vector y;
        std::size_t xi = 0;
        Vector u;
        if (p < exploration) {
            x = random_in_ball(center, radius, rng);
            y = random_in_ball(center, radius, rng);
            xi = rng.index(n);
            const double gap = (y - x).norm();
            u = gap > 0.0 ? Vector((y - x) / gap) : random_unit(d, rng);
        } else {
            const double progress =
                static_cast<double>(p - exploration) / static_cast<double>(probes - exploration);
            const double spread = 0.5 * (1.0 - progress) + 0.01;
            u = best_u + spread * random_unit(d, rng);
            u.normalize();
            x = best_x + 0.1 * spread * radius * random_unit(d, rng);
            y = x + 0.1 * radius * u;
            xi = rng.uniform() < 0.5 ? best_xi : rng.index(n);
        }
        const double q = quotient(x, y, xi);
        if (q > best.value) {
            best.value = q;
            best_x = x;
            best_u = u;
            best_xi = xi;
        }
    }
    return best;
}

CappedL1Svm::CappedL1Svm(std::shared_ptr<const SparseDataset> data, double lambda, double alpha,
                         std::vector<std::size_t> rows)
    : data_(std::move(data)), lambda_(lambda), alpha_(alpha), rows_(std::move(rows)) {
    if (!data_) {
        throw InvalidParameter("capped-l1 SVM needs a dataset");
    }
    if (!(lambda_ > 0.0) || !(alpha_ > 0.0)) {
        throw InvalidParameter("capped-l1 SVM needs lambda > 0 and alpha > 0");
    }
    if (rows_.empty()) {
        rows_.resize(data_->size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            rows_[r] = r;
        }
    }
    if (rows_.empty()) {
        throw InvalidParameter("capped-l1 SVM needs at least one sample");
    }
    double max_row_norm = 0.0;
    for (const std::size_t r : rows_) {
        if (r >= data_->size()) {
            throw SampleIndexError("row " + std::to_string(r) + " outside dataset");
        }
        const double label = data_->labels[r];
        if (label != 1.0 && label != -1.0) {
            throw InvalidParameter("labels must be -1 or +1");
        }
        for (const auto index : data_->rows[r].indices) {
            if (index >= data_->dim) {
                throw ShapeError("feature index outside dataset dimension");
            }
        }
        max_row_norm = std::max(max_row_norm, data_->rows[r].norm());
    }
    // Hinge slope is bounded by |a|; the penalty gradient by lambda per coordinate.
    lipschitz_ = max_row_norm + lambda_ * std::sqrt(static_cast<double>(data_->dim));
}

double CappedL1Svm::hinge(const VectorRef& x, std::size_t xi) const {
    const std::size_t r = rows_[xi];
    const double margin = data_->labels[r] * data_->rows[r].dot(x);
    return std::max(1.0 - margin, 0.0);
}

double CappedL1Svm::penalty(const VectorRef& x) const {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        sum += std::min(std::abs(x[j]), alpha_);
    }
    return lambda_ * sum;
}

double CappedL1Svm::eval_unchecked(const VectorRef& x, std::size_t xi) const {
    return hinge(x, xi) + penalty(x);
}

std::vector<ObjectivePtr> make_svm_locals(std::shared_ptr<const SparseDataset> data,
                                          const Partition& partition, double lambda,
                                          double alpha) {
    std::vector<ObjectivePtr> locals;
    locals.reserve(partition.agents());
    for (const auto& rows : partition.assignment) {
        locals.push_back(std::make_shared<CappedL1Svm>(data, lambda, alpha, rows));
    }
    return locals;
}

QuadraticTest::QuadraticTest(std::size_t d) : QuadraticTest(Vector::Zero(static_cast<Eigen::Index>(d))) {}

QuadraticTest::QuadraticTest(Vector center) : center_(std::move(center)) {
    if (center_.size() == 0) {
        throw ShapeError("quadratic test needs d >= 1");
    }
}

double QuadraticTest::eval_unchecked(const VectorRef& x, std::size_t) const {
    return (x - center_).squaredNorm();
}

std::shared_ptr<QuadraticTest> make_quadratic_test(std::size_t d) {
    return std::make_shared<QuadraticTest>(d);
}

LinearTest::LinearTest(Vector slope) : LinearTest(std::vector<Vector>{std::move(slope)}) {}

LinearTest::LinearTest(std::vector<Vector> slopes) : slopes_(std::move(slopes)) {
    if (slopes_.empty() || slopes_.front().size() == 0) {
        throw ShapeError("linear test needs at least one nonempty slope");
    }
    for (const auto& s : slopes_) {
        if (s.size() != slopes_.front().size()) {
            throw ShapeError("linear test slopes must share a dimension");
        }
    }
}

std::optional<double> LinearTest::lipschitz_hint() const {
    double worst = 0.0;
    for (const auto& s : slopes_) {
        worst = std::max(worst, s.norm());
    }
    return worst;
}

double LinearTest::eval_unchecked(const VectorRef& x, std::size_t xi) const {
    return slopes_[xi].dot(x);
}

AbsTest::AbsTest(std::size_t d) : d_(d) {
    if (d_ == 0) {
        throw ShapeError("abs test needs d >= 1");
    }
}

std::optional<double> AbsTest::lipschitz_hint() const {
    return std::sqrt(static_cast<double>(d_));
}

double AbsTest::eval_unchecked(const VectorRef& x, std::size_t) const {
    return x.cwiseAbs().sum();
}

ConstantTest::ConstantTest(std::size_t d, std::vector<double> values)
    : d_(d), values_(std::move(values)) {
    if (d_ == 0 || values_.empty()) {
        throw ShapeError("constant test needs d >= 1 and at least one sample");
    }
}

double ConstantTest::eval_unchecked(const VectorRef&, std::size_t xi) const {
    return values_[xi];
}

}  // namespace dgfm
