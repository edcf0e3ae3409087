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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgfm/data.hpp"
#include "dgfm/types.hpp"

namespace dgfm {

class RandomStream;

/// Finite-sum objective f(x) = (1/n) sum_xi f(x; xi), accessed through
/// function values only.
///
/// eval() checks the sample index and the dimension of x, then defers to
/// the subclass. Implementations must be deterministic in (x, xi) and safe
/// to call concurrently.
class StochasticObjective {
public:
    virtual ~StochasticObjective() = default;

    virtual std::size_t num_samples() const = 0;
    virtual std::size_t dim() const = 0;

    /// Known Lipschitz constant L_f, when the objective can supply one.
    virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }

    virtual std::string name() const = 0;

    double eval(const VectorRef& x, std::size_t xi) const;

protected:
    virtual double eval_unchecked(const VectorRef& x, std::size_t xi) const = 0;
};

using ObjectivePtr = std::shared_ptr<const StochasticObjective>;

/// Arithmetic mean of eval over every sample. Measurement only.
double full_loss(const StochasticObjective& objective, const VectorRef& x);

/// Mean of full_loss over the agents' local objectives, i.e.
/// f(x) = (1/m) sum_i f^i(x).
double network_loss(const std::vector<ObjectivePtr>& locals, const VectorRef& x);

struct LipschitzEstimate {
    double value = 0.0;
    std::size_t probes = 0;
    bool lower_bound = true;  // always: a sampled maximum of difference quotients
};

/// Largest |f(x;xi) - f(y;xi)| / |x - y| over `probes` random pairs drawn
/// uniformly from the ball of `radius` around `center`.
LipschitzEstimate estimate_lipschitz(const StochasticObjective& objective, std::size_t probes,
                                     double radius, const VectorRef& center, RandomStream& rng);

/// Nonconvex SVM: hinge loss plus capped-l1 penalty, one sample per row.
///
///   f(x; xi) = max(1 - b_xi a_xi^T x, 0) + lambda * sum_j min(|x_j|, alpha)
///
/// The penalty is deterministic and added in full to every sample.
class CappedL1Svm final : public StochasticObjective {
public:
    /// `rows` selects the samples this objective owns; empty means all.
    CappedL1Svm(std::shared_ptr<const SparseDataset> data, double lambda, double alpha,
                std::vector<std::size_t> rows = {});

    std::size_t num_samples() const override { return rows_.size(); }
    std::size_t dim() const override { return data_->dim; }
    std::optional<double> lipschitz_hint() const override { return lipschitz_; }
    std::string name() const override { return "capped-l1-svm"; }

    double lambda() const noexcept { return lambda_; }
    double alpha() const noexcept { return alpha_; }

    double hinge(const VectorRef& x, std::size_t xi) const;
    double penalty(const VectorRef& x) const;

protected:
    double eval_unchecked(const VectorRef& x, std::size_t xi) const override;

private:
    std::shared_ptr<const SparseDataset> data_;
    double lambda_;
    double alpha_;
    std::vector<std::size_t> rows_;
    double lipschitz_;
};

/// Paper default lambda = 1e-5 / n.
inline double default_svm_lambda(std::size_t n) { return 1e-5 / static_cast<double>(n); }
inline constexpr double kDefaultSvmAlpha = 2.0;

/// One local SVM objective per agent, sharing the dataset.
std::vector<ObjectivePtr> make_svm_locals(std::shared_ptr<const SparseDataset> data,
                                          const Partition& partition, double lambda,
                                          double alpha);

/// f(x) = |x - center|^2, one sample. With w uniform on the sphere the
/// smoothed surrogate is exactly |x - center|^2 + delta^2 and its gradient
/// is 2 (x - center).
class QuadraticTest final : public StochasticObjective {
public:
    explicit QuadraticTest(std::size_t d);
    explicit QuadraticTest(Vector center);

    std::size_t num_samples() const override { return 1; }
    std::size_t dim() const override { return static_cast<std::size_t>(center_.size()); }
    std::string name() const override { return "quadratic"; }
    const Vector& center() const noexcept { return center_; }

protected:
    double eval_unchecked(const VectorRef& x, std::size_t xi) const override;

private:
    Vector center_;
};

std::shared_ptr<QuadraticTest> make_quadratic_test(std::size_t d);

/// f(x; xi) = slopes_xi . x; the Lipschitz constant is the largest slope norm.
class LinearTest final : public StochasticObjective {
public:
    explicit LinearTest(Vector slope);
    explicit LinearTest(std::vector<Vector> slopes);

    std::size_t num_samples() const override { return slopes_.size(); }
    std::size_t dim() const override { return static_cast<std::size_t>(slopes_.front().size()); }
    std::optional<double> lipschitz_hint() const override;
    std::string name() const override { return "linear"; }

protected:
    double eval_unchecked(const VectorRef& x, std::size_t xi) const override;

private:
    std::vector<Vector> slopes_;
};

/// f(x) = |x|_1, one sample; 1-Lipschitz in d = 1.
class AbsTest final : public StochasticObjective {
public:
    explicit AbsTest(std::size_t d);

    std::size_t num_samples() const override { return 1; }
    std::size_t dim() const override { return d_; }
    std::optional<double> lipschitz_hint() const override;
    std::string name() const override { return "abs"; }

protected:
    double eval_unchecked(const VectorRef& x, std::size_t xi) const override;

private:
    std::size_t d_;
};

/// Per-sample constants; every estimator built on it returns exactly zero.
class ConstantTest final : public StochasticObjective {
public:
    ConstantTest(std::size_t d, std::vector<double> values);

    std::size_t num_samples() const override { return values_.size(); }
    std::size_t dim() const override { return d_; }
    std::optional<double> lipschitz_hint() const override { return 0.0; }
    std::string name() const override { return "constant"; }

protected:
    double eval_unchecked(const VectorRef& x, std::size_t xi) const override;

private:
    std::size_t d_;
    std::vector<double> values_;
};

}  // namespace dgfm
