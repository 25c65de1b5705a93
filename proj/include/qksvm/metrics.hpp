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

#ifndef QKSVM_METRICS_HPP
#define QKSVM_METRICS_HPP

/**
 * Binary classification metrics with +1 as the positive class: confusion
 * counts, accuracy/precision/recall/F1, and rank-based AUROC (ties count
 * one half). Ratios with a zero denominator are reported as 0 and flagged
 * rather than being silently invented.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"

namespace qksvm {

struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionMatrix confusion(const VectorXi &y_true,
                                 const VectorXi &y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ShapeError("confusion: label vectors differ in length");
    }
    if (y_true.size() < 1) {
        throw ShapeError("confusion: no samples");
    }
    ConfusionMatrix cm;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == 1;
        const bool predicted = y_pred[i] == 1;
        if (actual && predicted) {
            ++cm.tp;
        } else if (!actual && predicted) {
            ++cm.fp;
        } else if (!actual && !predicted) {
            ++cm.tn;
        } else {
            ++cm.fn;
        }
    }
    return cm;
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// False when the corresponding denominator was zero.
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

struct MetricsSummary {
    double accuracy = 0.0;
    ClassMetrics positive;
    ClassMetrics negative;
};

namespace detail {

inline ClassMetrics class_metrics(std::int64_t tp, std::int64_t fp,
                                  std::int64_t fn) {
    ClassMetrics m;
    m.precision_defined = tp + fp > 0;
    m.recall_defined = tp + fn > 0;
    m.precision = m.precision_defined ? double(tp) / double(tp + fp) : 0.0;
    m.recall = m.recall_defined ? double(tp) / double(tp + fn) : 0.0;
    m.f1_defined = m.precision + m.recall > 0.0 && m.precision_defined &&
                   m.recall_defined;
    m.f1 = m.f1_defined
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

} // namespace detail

inline MetricsSummary summary(const ConfusionMatrix &cm) {
    if (cm.total() < 1) {
        throw ShapeError("summary: empty confusion matrix");
    }
    MetricsSummary s;
    s.accuracy = double(cm.tp + cm.tn) / double(cm.total());
    s.positive = detail::class_metrics(cm.tp, cm.fp, cm.fn);
    // The negative class swaps roles: its "hits" are the true negatives.
    s.negative = detail::class_metrics(cm.tn, cm.fn, cm.fp);
    return s;
}

/**
 * Mann-Whitney AUROC: the fraction of (positive, negative) pairs whose
 * positive score ranks higher, ties counting one half. Computed from rank
 * sums, which matches the all-pairs count exactly.
 */
template <typename Scalar>
double auroc(const VectorXi &y_true, const VectorX<Scalar> &scores) {
    if (y_true.size() != scores.size()) {
        throw ShapeError("auroc: labels and scores differ in length");
    }
    const Eigen::Index n = y_true.size();
    const Eigen::Index n_pos = (y_true.array() == 1).count();
    const Eigen::Index n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DegenerateInputError("auroc: need both classes in y_true");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&scores](Eigen::Index a, Eigen::Index b) {
                  return scores[a] < scores[b];
              });

    // Sum of positive-class ranks with ties sharing their average rank.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double tied_rank = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (y_true[order[k]] == 1) {
                rank_sum_pos += tied_rank;
            }
        }
        i = j + 1;
    }

    const double u = rank_sum_pos -
                     0.5 * double(n_pos) * double(n_pos + 1);
    return u / (double(n_pos) * double(n_neg));
}

} // namespace qksvm

#endif // QKSVM_METRICS_HPP
