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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dgfm/data.hpp"
#include "dgfm/errors.hpp"
#include "dgfm/objectives.hpp"
#include "dgfm/random.hpp"
#include "synthetic.hpp"

namespace dgfm {
namespace {

std::shared_ptr<const SparseDataset> tiny_dataset() {
    std::istringstream in("1 1:1\n-1 1:0.6 2:0.8\n");
    return std::make_shared<const SparseDataset>(parse_libsvm(in));
}

TEST(CappedL1Svm, OriginHasUnitHinge) {
    const CappedL1Svm svm(tiny_dataset(), 1e-3, 2.0);
    const Vector zero = Vector::Zero(2);
    EXPECT_EQ(svm.eval(zero, 0), 1.0);
    EXPECT_EQ(svm.eval(zero, 1), 1.0);
    EXPECT_EQ(svm.penalty(zero), 0.0);
}

TEST(CappedL1Svm, MarginBeyondOneIsFree) {
    std::istringstream in("1 1:1\n");
    const CappedL1Svm svm(std::make_shared<const SparseDataset>(parse_libsvm(in)), 1e-300, 2.0);
    Vector x(1);
    x << 2.0;
    EXPECT_EQ(svm.hinge(x, 0), 0.0);
}

TEST(CappedL1Svm, KnownValue) {
    const double lambda = 0.1;
    const CappedL1Svm svm(tiny_dataset(), lambda, 2.0);
    Vector x(2);
    x << 0.5, -3.0;
    // sample 1: b = -1, a.x = 0.3 - 2.4 = -2.1 -> hinge max(1 - 2.1, 0) = 0
    EXPECT_NEAR(svm.hinge(x, 1), 0.0, 1e-15);
    EXPECT_NEAR(svm.hinge(x, 0), 0.5, 1e-15);
    EXPECT_NEAR(svm.penalty(x), lambda * (0.5 + 2.0), 1e-15);
    EXPECT_NEAR(svm.eval(x, 0), 0.5 + lambda * 2.5, 1e-15);
}

TEST(CappedL1Svm, DefaultsAndValidation) {
    EXPECT_DOUBLE_EQ(default_svm_lambda(2000), 5e-9);
    EXPECT_EQ(kDefaultSvmAlpha, 2.0);
    EXPECT_THROW(CappedL1Svm(tiny_dataset(), 0.0, 2.0), InvalidParameter);
    EXPECT_THROW(CappedL1Svm(tiny_dataset(), 1.0, -1.0), InvalidParameter);
    const CappedL1Svm svm(tiny_dataset(), 1e-3, 2.0);
    EXPECT_THROW(svm.eval(Vector::Zero(2), 2), SampleIndexError);
    EXPECT_THROW(svm.eval(Vector::Zero(3), 0), ShapeError);
}

TEST(CappedL1Svm, PenaltyFlatBeyondCap) {
    const double lambda = 0.01;
    const double alpha = 2.0;
    const CappedL1Svm svm(tiny_dataset(), lambda, alpha);
    const Vector at_cap = Vector::Unit(2, 0) * alpha;
    const Vector beyond = Vector::Unit(2, 0) * (alpha + 1.0);
    EXPECT_EQ(svm.penalty(beyond), svm.penalty(at_cap));
    EXPECT_DOUBLE_EQ(svm.penalty(at_cap), lambda * alpha);
}

TEST(CappedL1Svm, NonnegativeAndCapped) {
    const auto data = std::make_shared<const SparseDataset>(
        normalize_rows(testing::make_census_like(100, 1)));
    const double lambda = 0.05;
    const CappedL1Svm svm(data, lambda, 2.0);
    RandomStream rng(1, {0, 0, StreamPurpose::test});
    const double cap = lambda * 2.0 * static_cast<double>(data->dim);
    for (int trial = 0; trial < 200; ++trial) {
        Vector x(static_cast<Eigen::Index>(data->dim));
        for (auto& v : x) {
            v = 5.0 * rng.normal();
        }
        EXPECT_LE(svm.penalty(x), cap);
        EXPECT_GE(svm.penalty(x), 0.0);
        EXPECT_GE(svm.eval(x, rng.index(100)), 0.0);
    }
}

TEST(CappedL1Svm, LipschitzHintIsRowNormPlusPenaltySlope) {
    const auto data = std::make_shared<const SparseDataset>(
        normalize_rows(testing::make_census_like(50, 2)));
    const CappedL1Svm svm(data, 1e-3, 2.0);
    ASSERT_TRUE(svm.lipschitz_hint().has_value());
    EXPECT_NEAR(*svm.lipschitz_hint(), 1.0 + 1e-3 * std::sqrt(static_cast<double>(data->dim)), 1e-12);
}

TEST(FullLoss, MeanOfSamples) {
    const CappedL1Svm svm(tiny_dataset(), 0.1, 2.0);
    Vector x(2);
    x << 0.3, 0.2;
    EXPECT_DOUBLE_EQ(full_loss(svm, x), 0.5 * (svm.eval(x, 0) + svm.eval(x, 1)));

    EXPECT_DOUBLE_EQ(full_loss(ConstantTest(3, {2.5, 2.5}), Vector::Zero(3)), 2.5);
    EXPECT_DOUBLE_EQ(full_loss(ConstantTest(1, {0.0, 1.0}), Vector::Zero(1)), 0.5);

    std::istringstream one("1 1:1\n");
    const CappedL1Svm single(std::make_shared<const SparseDataset>(parse_libsvm(one)), 0.1, 2.0);
    EXPECT_EQ(full_loss(single, x.head(1)), single.eval(x.head(1), 0));
}

TEST(FullLoss, NetworkLossAveragesAgents) {
    const auto data = std::make_shared<const SparseDataset>(
        normalize_rows(testing::make_census_like(40, 3)));
    const auto locals = make_svm_locals(data, partition(40, 4, 0), 1e-3, 2.0);
    ASSERT_EQ(locals.size(), 4u);
    const CappedL1Svm global(data, 1e-3, 2.0);
    Vector x = Vector::Constant(static_cast<Eigen::Index>(data->dim), 0.2);
    // Equal local sizes: the network loss equals the pooled mean.
    EXPECT_NEAR(network_loss(locals, x), full_loss(global, x), 1e-14);
}

TEST(EstimateLipschitz, LinearSlope) {
    Vector slope(3);
    slope << 1.0, -2.0, 2.0;
    const LinearTest linear(slope);
    RandomStream rng(4, {0, 0, StreamPurpose::probe});
    const LipschitzEstimate estimate = estimate_lipschitz(linear, 1000, 1.0, Vector::Zero(3), rng);
    EXPECT_TRUE(estimate.lower_bound);
    EXPECT_LE(estimate.value, 3.0 * (1.0 + 1e-12));
    EXPECT_GE(estimate.value, 0.95 * 3.0);
}

TEST(EstimateLipschitz, ConstantIsZero) {
    RandomStream rng(5, {0, 0, StreamPurpose::probe});
    EXPECT_EQ(estimate_lipschitz(ConstantTest(2, {1.0}), 100, 1.0, Vector::Zero(2), rng).value, 0.0);
    EXPECT_THROW(estimate_lipschitz(ConstantTest(2, {1.0}), 1, 1.0, Vector::Zero(2), rng),
                 InvalidParameter);
}

TEST(EstimateLipschitz, HingeNearKink) {
    std::istringstream in("1 1:0.6 2:0.8\n");
    const double lambda = 1e-4;
    const CappedL1Svm svm(std::make_shared<const SparseDataset>(parse_libsvm(in)), lambda, 2.0);
    Vector kink(2);
    kink << 0.6, 0.8;  // a.x = 1
    RandomStream rng(6, {0, 0, StreamPurpose::probe});
    const double value = estimate_lipschitz(svm, 1000, 0.1, kink, rng).value;
    EXPECT_LE(value, 1.0 + lambda * 2.0);
    EXPECT_GE(value, 0.8);
}

TEST(Quadratic, Values) {
    const auto q = make_quadratic_test(3);
    EXPECT_EQ(q->eval(Vector::Zero(3), 0), 0.0);
    EXPECT_EQ(q->eval(Vector::Unit(3, 0), 0), 1.0);
    EXPECT_THROW(make_quadratic_test(0), ShapeError);
}

TEST(Abs, ValuesAndHint) {
    const AbsTest f(2);
    Vector x(2);
    x << -1.5, 2.0;
    EXPECT_EQ(f.eval(x, 0), 3.5);
    EXPECT_NEAR(*f.lipschitz_hint(), std::sqrt(2.0), 1e-15);
}

}  // namespace
}  // namespace dgfm
