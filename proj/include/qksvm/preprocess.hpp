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

#ifndef QKSVM_PREPROCESS_HPP
#define QKSVM_PREPROCESS_HPP

/**
 * Data conditioning for kernel classifiers: one-hot expansion of
 * categorical columns, min-max rescaling to [0,1], PCA, and stratified
 * train/test splitting.
 *
 * The intended chain is one-hot -> min-max -> PCA -> min-max, so that the
 * final features land in [0,1]^k and can be used directly as rotation
 * angles. Scalers and PCA transforms are fitted once and immutable
 * afterwards; applying them to unseen rows clamps instead of refitting.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"

namespace qksvm {

// ---------------------------------------------------------------------------
// One-hot encoding

template <typename Scalar> struct OneHotColumns {
    /// Distinct category values in first-appearance order.
    std::vector<std::string> categories;
    /// One binary column per category; each row sums to exactly 1.
    MatrixX<Scalar> columns;
};

template <typename Scalar = double>
OneHotColumns<Scalar> one_hot(const std::vector<std::string> &column) {
    if (column.empty()) {
        throw ShapeError("one_hot: column is empty");
    }
    OneHotColumns<Scalar> out;
    std::map<std::string, Eigen::Index> index;
    for (const auto &value : column) {
        if (index.emplace(value, static_cast<Eigen::Index>(
                                     out.categories.size())).second) {
            out.categories.push_back(value);
        }
    }
    out.columns = MatrixX<Scalar>::Zero(
        static_cast<Eigen::Index>(column.size()),
        static_cast<Eigen::Index>(out.categories.size()));
    for (std::size_t i = 0; i < column.size(); ++i) {
        out.columns(static_cast<Eigen::Index>(i), index.at(column[i])) =
            Scalar{1};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Min-max scaling

template <typename Scalar> struct MinMaxScaler {
    VectorX<Scalar> min;
    VectorX<Scalar> max;
    /// Features whose fit data had zero range; they map to 0.
    Eigen::Array<bool, Eigen::Dynamic, 1> constant;
};

template <typename Scalar>
MinMaxScaler<Scalar> minmax_fit(const MatrixX<Scalar> &data) {
    if (data.rows() < 1 || data.cols() < 1) {
        throw ShapeError("minmax_fit: data is empty");
    }
    MinMaxScaler<Scalar> scaler;
    scaler.min = data.colwise().minCoeff();
    scaler.max = data.colwise().maxCoeff();
    scaler.constant = (scaler.max - scaler.min).array() <= Scalar{0};
    return scaler;
}

/// (x - min) / (max - min) per feature, clamped to [0,1]; constant
/// features map to 0.
template <typename Scalar>
MatrixX<Scalar> minmax_apply(const MinMaxScaler<Scalar> &scaler,
                             const MatrixX<Scalar> &data) {
    if (data.cols() != scaler.min.size()) {
        throw ShapeError("minmax_apply: feature count differs from fit");
    }
    MatrixX<Scalar> out(data.rows(), data.cols());
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        if (scaler.constant[j]) {
            out.col(j).setZero();
            continue;
        }
        const Scalar range = scaler.max[j] - scaler.min[j];
        out.col(j) = ((data.col(j).array() - scaler.min[j]) / range)
                         .cwiseMax(Scalar{0})
                         .cwiseMin(Scalar{1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Principal component analysis

template <typename Scalar> struct PcaTransform {
    /// Per-feature mean of the fit data.
    VectorX<Scalar> mean;
    /// d x k matrix whose columns are orthonormal directions.
    MatrixX<Scalar> components;
    /// Variance captured by each component, nonincreasing.
    VectorX<Scalar> explained_variance;
};

template <typename Scalar>
PcaTransform<Scalar> pca_fit(const MatrixX<Scalar> &data, Eigen::Index k) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2) {
        throw ShapeError("pca_fit: need at least two samples");
    }
    if (k < 1 || k > std::min(n, d)) {
        throw ShapeError("pca_fit: component count out of range");
    }

    PcaTransform<Scalar> t;
    t.mean = data.colwise().mean();
    const MatrixX<Scalar> centered = data.rowwise() - t.mean.transpose();
    const MatrixX<Scalar> cov =
        (centered.transpose() * centered) / Scalar(n - 1);

    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw ShapeError("pca_fit: eigendecomposition failed");
    }

    // Eigen returns eigenvalues in increasing order; take the top k.
    t.components.resize(d, k);
    t.explained_variance.resize(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index src = d - 1 - c;
        VectorX<Scalar> direction = solver.eigenvectors().col(src);
        // Deterministic sign: the largest-magnitude coordinate is positive.
        Eigen::Index pivot = 0;
        direction.cwiseAbs().maxCoeff(&pivot);
        if (direction[pivot] < Scalar{0}) {
            direction = -direction;
        }
        t.components.col(c) = direction;
        t.explained_variance[c] =
            std::max(Scalar{0}, solver.eigenvalues()[src]);
    }
    return t;
}

template <typename Scalar>
MatrixX<Scalar> pca_apply(const PcaTransform<Scalar> &t,
                          const MatrixX<Scalar> &data) {
    if (data.cols() != t.mean.size()) {
        throw ShapeError("pca_apply: feature count differs from fit");
    }
    return (data.rowwise() - t.mean.transpose()) * t.components;
}

// ---------------------------------------------------------------------------
// Stratified splitting

template <typename Scalar> struct LabeledDataset {
    MatrixX<Scalar> features;
    VectorXi labels;

    Eigen::Index size() const { return labels.size(); }
};

struct SplitIndices {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> test;
};

/**
 * Partitions row indices so that each label class contributes its share of
 * the test set (round(test_fraction * class size), capped so at least one
 * member of every class stays in train). Deterministic for a seed.
 */
inline SplitIndices split_indices(const VectorXi &labels,
                                  double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("split_indices: test_fraction must lie in (0,1)");
    }
    std::map<int, std::vector<Eigen::Index>> by_class;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    for (const auto &[label, members] : by_class) {
        if (members.size() < 2) {
            throw DegenerateInputError(
                "split_indices: class " + std::to_string(label) +
                " has fewer than two members");
        }
    }

    std::mt19937_64 rng(splitmix64(seed));
    SplitIndices split;
    for (auto &[label, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        const auto n_class = static_cast<long long>(members.size());
        long long n_test = std::llround(test_fraction * double(n_class));
        n_test = std::max(0LL, std::min(n_test, n_class - 1));
        split.test.insert(split.test.end(), members.begin(),
                          members.begin() + n_test);
        split.train.insert(split.train.end(), members.begin() + n_test,
                           members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace detail {

template <typename Scalar>
LabeledDataset<Scalar> take_rows(const LabeledDataset<Scalar> &dataset,
                                 const std::vector<Eigen::Index> &rows) {
    LabeledDataset<Scalar> out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()),
                        dataset.features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto dst = static_cast<Eigen::Index>(i);
        out.features.row(dst) = dataset.features.row(rows[i]);
        out.labels[dst] = dataset.labels[rows[i]];
    }
    return out;
}

} // namespace detail

template <typename Scalar>
std::pair<LabeledDataset<Scalar>, LabeledDataset<Scalar>>
stratified_split(const LabeledDataset<Scalar> &dataset, double test_fraction,
                 std::uint64_t seed) {
    if (dataset.features.rows() != dataset.labels.size()) {
        throw ShapeError("stratified_split: feature/label row mismatch");
    }
    const SplitIndices split =
        split_indices(dataset.labels, test_fraction, seed);
    return {detail::take_rows(dataset, split.train),
            detail::take_rows(dataset, split.test)};
}

} // namespace qksvm

#endif // QKSVM_PREPROCESS_HPP
