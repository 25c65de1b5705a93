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

/**
 * @file
 * Fidelity kernel entries and Gram matrices, exact and shot-sampled.
 *
 * The exact entry is |<Phi(x)|Phi(x')>|^2 clamped to [0, 1]. Shot sampling
 * draws a binomial count on the exact fidelity: on a noise-free simulator
 * this is distributionally identical to measuring the all-zeros outcome of
 * the inversion-test circuit, so no U^dagger U circuit is executed. Seeds
 * are derived per entry, which keeps sampled matrices deterministic under
 * any thread scheduling.
 */

#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"
#include "qksvm/feature_map.hpp"

namespace qksvm {

/**
 * Real Gram matrix of pairwise fidelities. `symmetric` is set when the
 * matrix was computed over one dataset against itself; symmetric matrices
 * are mirrored exactly, entry by entry.
 */
template <typename Scalar = double>
struct KernelMatrix {
    MatrixX<Scalar> values;
    bool symmetric = false;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

namespace detail {

template <typename Scalar>
Scalar fidelity_of(const StateVector<Scalar> &a, const StateVector<Scalar> &b) {
    const Scalar raw = std::norm(inner_product(a, b));
    return std::clamp(raw, Scalar{0}, Scalar{1});
}

template <typename Scalar>
std::vector<StateVector<Scalar>> encode_rows(const FeatureMapSpec<Scalar> &spec,
                                             const MatrixX<Scalar> &data) {
    std::vector<StateVector<Scalar>> states;
    states.reserve(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        states.push_back(encode(spec, VectorX<Scalar>(data.row(i))));
    }
    return states;
}

inline int resolve_threads(int n_threads, Eigen::Index work_items) {
    int n = n_threads > 0
                ? n_threads
                : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(n, 1);
    return static_cast<int>(
        std::min<Eigen::Index>(n, std::max<Eigen::Index>(work_items, 1)));
}

/// Runs f(i) for i in [0, count) across threads; rows are striped so the
/// assignment is deterministic even though execution order is not.
template <typename RowFn>
void parallel_rows(Eigen::Index count, int n_threads, RowFn &&f) {
    const int threads = resolve_threads(n_threads, count);
    if (threads <= 1) {
        for (Eigen::Index i = 0; i < count; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([count, threads, t, &f] {
            for (Eigen::Index i = t; i < count; i += threads) {
                f(i);
            }
        });
    }
    for (auto &worker : pool) {
        worker.join();
    }
}

/// Per-entry RNG stream for sampled kernels.
inline std::uint64_t entry_seed(std::uint64_t seed, Eigen::Index i,
                                Eigen::Index j) {
    const auto key = (static_cast<std::uint64_t>(i) << 32) ^
                     static_cast<std::uint64_t>(j);
    return splitmix64(seed ^ splitmix64(key));
}

template <typename Scalar>
Scalar binomial_fraction(Scalar p, int shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::binomial_distribution<long> dist(shots, static_cast<double>(p));
    return static_cast<Scalar>(dist(rng)) / static_cast<Scalar>(shots);
}

} // namespace detail

/// Exact fidelity between the encodings of two feature vectors.
template <typename Scalar>
Scalar kernel_entry(const FeatureMapSpec<Scalar> &spec, const VectorX<Scalar> &x,
                    const VectorX<Scalar> &x2) {
    if (x.size() != x2.size()) {
        throw ShapeError("kernel_entry: feature dimensions differ");
    }
    return detail::fidelity_of(encode(spec, x), encode(spec, x2));
}

/// Shot-sampled estimate of kernel_entry; unbiased, deterministic per seed.
template <typename Scalar>
Scalar kernel_entry_sampled(const FeatureMapSpec<Scalar> &spec,
                            const VectorX<Scalar> &x, const VectorX<Scalar> &x2,
                            int shots, std::uint64_t seed) {
    if (shots < 1) {
        throw ConfigError("kernel_entry_sampled: shots must be >= 1");
    }
    const Scalar p = kernel_entry(spec, x, x2);
    return detail::binomial_fraction(p, shots, splitmix64(seed));
}

/**
 * Symmetric Gram matrix of `A` (rows are samples). Each row is encoded
 * exactly once; the upper triangle is computed (in parallel when
 * `n_threads` != 1) and mirrored, so K(i,j) == K(j,i) holds exactly.
 */
template <typename Scalar>
KernelMatrix<Scalar> kernel_matrix(const FeatureMapSpec<Scalar> &spec,
                                   const MatrixX<Scalar> &A,
                                   int n_threads = 0) {
    if (A.rows() < 1) {
        throw ShapeError("kernel_matrix: dataset must be nonempty");
    }
    const auto states = detail::encode_rows(spec, A);
    const Eigen::Index n = A.rows();

    KernelMatrix<Scalar> km;
    km.symmetric = true;
    km.values.resize(n, n);
    detail::parallel_rows(n, n_threads, [&](Eigen::Index i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Scalar value = detail::fidelity_of(states[i], states[j]);
            km.values(i, j) = value;
            km.values(j, i) = value;
        }
    });
    return km;
}

/// Cross kernel: entry (i, j) = fidelity of A-row i against B-row j.
template <typename Scalar>
KernelMatrix<Scalar> kernel_matrix(const FeatureMapSpec<Scalar> &spec,
                                   const MatrixX<Scalar> &A,
                                   const MatrixX<Scalar> &B,
                                   int n_threads = 0) {
    if (A.rows() < 1 || B.rows() < 1) {
        throw ShapeError("kernel_matrix: datasets must be nonempty");
    }
    if (A.cols() != B.cols()) {
        throw ShapeError("kernel_matrix: feature dimensions differ (" +
                         std::to_string(A.cols()) + " vs " +
                         std::to_string(B.cols()) + ")");
    }
    const auto a_states = detail::encode_rows(spec, A);
    const auto b_states = detail::encode_rows(spec, B);

    KernelMatrix<Scalar> km;
    km.symmetric = false;
    km.values.resize(A.rows(), B.rows());
    detail::parallel_rows(A.rows(), n_threads, [&](Eigen::Index i) {
        for (Eigen::Index j = 0; j < B.rows(); ++j) {
            km.values(i, j) = detail::fidelity_of(a_states[i], b_states[j]);
        }
    });
    return km;
}

/// Shot-sampled symmetric Gram matrix; per-entry derived seeds.
template <typename Scalar>
KernelMatrix<Scalar> kernel_matrix_sampled(const FeatureMapSpec<Scalar> &spec,
                                           const MatrixX<Scalar> &A, int shots,
                                           std::uint64_t seed,
                                           int n_threads = 0) {
    if (shots < 1) {
        throw ConfigError("kernel_matrix_sampled: shots must be >= 1");
    }
    KernelMatrix<Scalar> km = kernel_matrix(spec, A, n_threads);
    const Eigen::Index n = km.rows();
    detail::parallel_rows(n, n_threads, [&](Eigen::Index i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Scalar sampled = detail::binomial_fraction(
                km.values(i, j), shots, detail::entry_seed(seed, i, j));
            km.values(i, j) = sampled;
            km.values(j, i) = sampled;
        }
    });
    return km;
}

/// Shot-sampled cross kernel; per-entry derived seeds.
template <typename Scalar>
KernelMatrix<Scalar> kernel_matrix_sampled(const FeatureMapSpec<Scalar> &spec,
                                           const MatrixX<Scalar> &A,
                                           const MatrixX<Scalar> &B, int shots,
                                           std::uint64_t seed,
                                           int n_threads = 0) {
    if (shots < 1) {
        throw ConfigError("kernel_matrix_sampled: shots must be >= 1");
    }
    KernelMatrix<Scalar> km = kernel_matrix(spec, A, B, n_threads);
    detail::parallel_rows(km.rows(), n_threads, [&](Eigen::Index i) {
        for (Eigen::Index j = 0; j < km.cols(); ++j) {
            km.values(i, j) = detail::binomial_fraction(
                km.values(i, j), shots, detail::entry_seed(seed, i, j));
        }
    });
    return km;
}

/// Writes `km` as CSV: a dims header line, then row-major entries.
template <typename Scalar>
void write_kernel_csv(const KernelMatrix<Scalar> &km, std::ostream &out) {
    out << "rows,cols,symmetric\n"
        << km.rows() << ',' << km.cols() << ',' << (km.symmetric ? 1 : 0)
        << '\n';
    out << std::setprecision(std::numeric_limits<Scalar>::max_digits10);
    for (Eigen::Index i = 0; i < km.rows(); ++i) {
        for (Eigen::Index j = 0; j < km.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << km.values(i, j);
        }
        out << '\n';
    }
}

template <typename Scalar>
void write_kernel_csv(const KernelMatrix<Scalar> &km,
                      const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open \"" + path + "\" for writing");
    }
    write_kernel_csv(km, out);
}

/// Reads a matrix written by write_kernel_csv.
template <typename Scalar = double>
KernelMatrix<Scalar> read_kernel_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("rows,cols,symmetric", 0) != 0) {
        throw IoError("kernel CSV: missing header line");
    }
    if (!std::getline(in, line)) {
        throw IoError("kernel CSV: missing dims line");
    }
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    int symmetric = 0;
    {
        std::istringstream dims(line);
        char sep = ',';
        if (!(dims >> rows >> sep >> cols >> sep >> symmetric) || rows < 1 ||
            cols < 1) {
            throw IoError("kernel CSV: malformed dims line: " + line);
        }
    }
    KernelMatrix<Scalar> km;
    km.symmetric = symmetric != 0;
    km.values.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw IoError("kernel CSV: unexpected end of file at row " +
                          std::to_string(i));
        }
        std::istringstream row(line);
        std::string cell;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!std::getline(row, cell, ',')) {
                throw IoError("kernel CSV: row " + std::to_string(i) +
                              " has fewer than " + std::to_string(cols) +
                              " columns");
            }
            km.values(i, j) = static_cast<Scalar>(std::stod(cell));
        }
    }
    return km;
}

template <typename Scalar = double>
KernelMatrix<Scalar> read_kernel_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open \"" + path + "\" for reading");
    }
    return read_kernel_csv<Scalar>(in);
}

} // namespace qksvm
