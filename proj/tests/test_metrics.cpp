// Copyright 2026 The qksvm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/pairwise_auroc.hpp"
#include "qksvm/metrics.hpp"

using namespace qksvm;

namespace {

/// Random labels (both classes guaranteed) and scores with injected ties.
void random_scored_labels(std::mt19937_64 &rng, Eigen::Index n,
                          VectorXi &y, Eigen::VectorXd &scores) {
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    y.resize(n);
    scores.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = (rng() & 1) ? 1 : -1;
        // Quantize a third of the scores onto a coarse grid to force ties.
        const double raw = value(rng);
        scores[i] = (rng() % 3 == 0) ? std::round(raw * 4.0) / 4.0 : raw;
    }
    y[0] = 1;
    y[n - 1] = -1;
}

} // namespace

TEST_CASE("confusion counts the four quadrants") {
    VectorXi truth(2), pred(2);
    truth << 1, -1;
    pred << 1, -1;
    const auto cm = confusion(truth, pred);
    CHECK(cm.tp == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);
    CHECK(cm.total() == 2);
}

TEST_CASE("confusion with constant predictions") {
    VectorXi truth(5), pred(5);
    truth << 1, 1, -1, -1, -1;
    pred.setOnes();
    const auto cm = confusion(truth, pred);
    CHECK(cm.tp == 2);
    CHECK(cm.fp == 3);
    CHECK(cm.tn == 0);
    CHECK(cm.fn == 0);
}

TEST_CASE("confusion partitions every sample") {
    std::mt19937_64 rng(61);
    VectorXi truth(10), pred(10);
    for (Eigen::Index i = 0; i < 10; ++i) {
        truth[i] = (rng() & 1) ? 1 : -1;
        pred[i] = (rng() & 1) ? 1 : -1;
    }
    CHECK(confusion(truth, pred).total() == 10);

    VectorXi three(3);
    three.setOnes();
    CHECK_THROWS_AS(confusion(truth, three), ShapeError);
    CHECK_THROWS_AS(confusion(VectorXi(), VectorXi()), ShapeError);
}

TEST_CASE("summary on a perfect classifier") {
    ConfusionMatrix cm;
    cm.tp = 1;
    cm.tn = 1;
    const auto s = summary(cm);
    CHECK(s.accuracy == 1.0);
    CHECK(s.positive.f1 == 1.0);
    CHECK(s.negative.f1 == 1.0);
    CHECK(s.positive.precision_defined);
    CHECK(s.negative.recall_defined);
}

TEST_CASE("summary on predict-all-majority class shares") {
    // 458 negative / 241 positive truth, everything predicted negative.
    ConfusionMatrix cm;
    cm.tn = 458;
    cm.fn = 241;
    const auto s = summary(cm);
    CHECK(s.accuracy == doctest::Approx(458.0 / 699.0).epsilon(1e-12));
    CHECK_FALSE(s.positive.precision_defined);
    CHECK(s.positive.precision == 0.0);
    CHECK(s.positive.recall == 0.0);
    CHECK_FALSE(s.positive.f1_defined);
    CHECK(s.negative.recall == 1.0);
}

TEST_CASE("summary flags undefined ratios") {
    ConfusionMatrix cm;
    cm.tn = 3;
    cm.fn = 2;
    const auto s = summary(cm);
    CHECK_FALSE(s.positive.precision_defined); // tp + fp == 0
    CHECK(s.positive.precision == 0.0);
    CHECK(s.positive.recall == 0.0);

    ConfusionMatrix empty;
    CHECK_THROWS_AS(summary(empty), ShapeError);
}

TEST_CASE("summary accuracy equals the direct agreement rate") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 5 + Eigen::Index(rng() % 40);
        VectorXi truth(n), pred(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            truth[i] = (rng() & 1) ? 1 : -1;
            pred[i] = (rng() & 1) ? 1 : -1;
        }
        const double direct =
            double((truth.array() == pred.array()).count()) / double(n);
        CHECK(summary(confusion(truth, pred)).accuracy == direct);
    }
}

TEST_CASE("auroc on tiny hand examples") {
    VectorXi truth(2);
    truth << 1, -1;
    Eigen::VectorXd separated(2);
    separated << 0.9, 0.1;
    CHECK(auroc(truth, separated) == 1.0);

    Eigen::VectorXd reversed(2);
    reversed << 0.1, 0.9;
    CHECK(auroc(truth, reversed) == 0.0);

    VectorXi mixed(4);
    mixed << 1, -1, 1, -1;
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 0.7);
    CHECK(auroc(mixed, flat) == 0.5);
}

TEST_CASE("auroc rejects degenerate inputs") {
    VectorXi ones(3);
    ones.setOnes();
    const Eigen::VectorXd scores = Eigen::VectorXd::Random(3);
    CHECK_THROWS_AS(auroc(ones, scores), DegenerateInputError);

    VectorXi truth(2);
    truth << 1, -1;
    const Eigen::VectorXd wrong = Eigen::VectorXd::Random(3);
    CHECK_THROWS_AS(auroc(truth, wrong), ShapeError);
}

TEST_CASE("auroc equals the all-pairs oracle exactly") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + Eigen::Index(rng() % 199);
        VectorXi y;
        Eigen::VectorXd scores;
        random_scored_labels(rng, n, y, scores);
        CHECK(auroc(y, scores) == testing::pairwise_auroc(y, scores));
    }
}

TEST_CASE("auroc complement identity for tie-free scores") {
    std::mt19937_64 rng(73);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 10 + Eigen::Index(rng() % 50);
        VectorXi y(n);
        Eigen::VectorXd scores(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = (rng() & 1) ? 1 : -1;
            scores[i] = gauss(rng);
        }
        y[0] = 1;
        y[1] = -1;
        const Eigen::VectorXd negated = -scores;
        CHECK(auroc(y, scores) + auroc(y, negated) ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 10 + Eigen::Index(rng() % 80);
        VectorXi y;
        Eigen::VectorXd scores;
        random_scored_labels(rng, n, y, scores);
        Eigen::VectorXd warped(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            warped[i] = std::atan(3.0 * scores[i]) + 0.1 * scores[i];
        }
        CHECK(auroc(y, scores) == auroc(y, warped));
    }
}
