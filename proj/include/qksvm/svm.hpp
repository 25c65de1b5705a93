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
 * Soft-margin SVM on a precomputed kernel: SMO training of the dual,
 * decision values, prediction, and JSON model serialization.
 *
 * The solver follows the classic two-coefficient scheme: pick a KKT
 * violator, pair it with a second coefficient, and solve the restricted
 * two-variable problem analytically. When the pair's curvature is not
 * positive (eta = K11 + K22 - 2*K12 <= 0, which happens for every pair of
 * a rank-one Gram matrix), the objective is linear along the constraint
 * segment and is evaluated at both endpoints instead; without this rule
 * degenerate kernels would never move any coefficient. The second
 * coefficient falls back to randomized scans seeded from `seed`, so runs
 * are reproducible.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"
#include "qksvm/kernel.hpp"

namespace qksvm {

/// Coefficients below this count as zero when collecting support vectors.
inline constexpr double kSupportEpsilon = 1e-8;

/**
 * Trained dual model. Invariants: 0 <= alpha_i <= C and
 * |sum_i alpha_i y_i| <= 1e-8.
 */
template <typename Scalar = double>
struct SvmModel {
    VectorX<Scalar> alphas;
    Scalar bias = 0;
    VectorXi labels;
    std::vector<Eigen::Index> support_indices;
    Scalar C = 1;
};

namespace detail {

inline void validate_labels(const VectorXi &y) {
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 1) {
            has_pos = true;
        } else if (y[i] == -1) {
            has_neg = true;
        } else {
            throw DegenerateInputError(
                "labels must be +1 or -1, got " + std::to_string(y[i]) +
                " at index " + std::to_string(i));
        }
    }
    if (!has_pos || !has_neg) {
        throw DegenerateInputError(
            "training labels contain a single class");
    }
}

/// Two-coefficient solver state; one instance per train_smo call.
template <typename Scalar>
class SmoSolver {
  public:
    SmoSolver(const MatrixX<Scalar> &K, const VectorXi &y, Scalar C,
              Scalar tol, std::uint64_t seed)
        : K_(K), n_(K.rows()), C_(C), tol_(tol),
          rng_(splitmix64(seed)) {
        y_ = y.template cast<Scalar>();
        alpha_ = VectorX<Scalar>::Zero(n_);
        err_ = -y_; // decision values start at zero
        b_ = 0;
    }

    void run(int max_passes, long max_sweeps) {
        int idle_full_sweeps = 0;
        bool examine_all = true;
        long sweeps = 0;
        while (idle_full_sweeps < max_passes && sweeps < max_sweeps) {
            ++sweeps;
            int changed = 0;
            if (examine_all) {
                refresh_errors();
                for (Eigen::Index i = 0; i < n_; ++i) {
                    changed += examine(i);
                }
                if (changed == 0) {
                    ++idle_full_sweeps;
                } else {
                    idle_full_sweeps = 0;
                    examine_all = false;
                }
            } else {
                for (Eigen::Index i = 0; i < n_; ++i) {
                    if (is_free(i)) {
                        changed += examine(i);
                    }
                }
                if (changed == 0) {
                    examine_all = true;
                }
            }
        }
    }

    const VectorX<Scalar> &alphas() const { return alpha_; }

    /// Post-training bias: mean of y_j - s_j over free support vectors,
    /// else the midpoint of the interval the KKT conditions leave open.
    Scalar final_bias() const {
        const VectorX<Scalar> s = K_ * alpha_.cwiseProduct(y_);
        Scalar sum = 0;
        Eigen::Index count = 0;
        for (Eigen::Index i = 0; i < n_; ++i) {
            if (is_free(i)) {
                sum += y_[i] - s[i];
                ++count;
            }
        }
        if (count > 0) {
            return sum / static_cast<Scalar>(count);
        }
        Scalar lo = -std::numeric_limits<Scalar>::infinity();
        Scalar hi = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index i = 0; i < n_; ++i) {
            const bool at_zero = alpha_[i] <= Scalar{kSupportEpsilon};
            const Scalar gap = y_[i] - s[i];
            if (y_[i] > 0) {
                // y=+1: alpha=0 wants s+b >= 1, alpha=C wants s+b <= 1.
                if (at_zero) {
                    lo = std::max(lo, gap);
                } else {
                    hi = std::min(hi, gap);
                }
            } else {
                if (at_zero) {
                    hi = std::min(hi, gap);
                } else {
                    lo = std::max(lo, gap);
                }
            }
        }
        if (std::isinf(lo) && std::isinf(hi)) {
            return 0;
        }
        if (std::isinf(lo)) {
            return hi;
        }
        if (std::isinf(hi)) {
            return lo;
        }
        return (lo + hi) / 2;
    }

  private:
    bool is_free(Eigen::Index i) const {
        return alpha_[i] > Scalar{kSupportEpsilon} &&
               alpha_[i] < C_ - Scalar{kSupportEpsilon};
    }

    void refresh_errors() {
        err_ = K_ * alpha_.cwiseProduct(y_);
        err_.array() += b_;
        err_ -= y_;
    }

    int examine(Eigen::Index i2) {
        const Scalar r2 = err_[i2] * y_[i2];
        const bool violated = (r2 < -tol_ && alpha_[i2] < C_) ||
                              (r2 > tol_ && alpha_[i2] > Scalar{0});
        if (!violated) {
            return 0;
        }

        // Heuristic 1: the free point with the largest |E1 - E2|.
        Eigen::Index best = -1;
        Scalar best_gap = -1;
        for (Eigen::Index i = 0; i < n_; ++i) {
            if (i != i2 && is_free(i)) {
                const Scalar gap = std::abs(err_[i] - err_[i2]);
                if (gap > best_gap) {
                    best_gap = gap;
                    best = i;
                }
            }
        }
        if (best >= 0 && take_step(best, i2)) {
            return 1;
        }

        // Heuristic 2: free points from a random start.
        const Eigen::Index start1 =
            static_cast<Eigen::Index>(rng_() % static_cast<std::uint64_t>(n_));
        for (Eigen::Index k = 0; k < n_; ++k) {
            const Eigen::Index i1 = (start1 + k) % n_;
            if (is_free(i1) && take_step(i1, i2)) {
                return 1;
            }
        }

        // Heuristic 3: everything, again from a random start.
        const Eigen::Index start2 =
            static_cast<Eigen::Index>(rng_() % static_cast<std::uint64_t>(n_));
        for (Eigen::Index k = 0; k < n_; ++k) {
            const Eigen::Index i1 = (start2 + k) % n_;
            if (take_step(i1, i2)) {
                return 1;
            }
        }
        return 0;
    }

    bool take_step(Eigen::Index i1, Eigen::Index i2) {
        if (i1 == i2) {
            return false;
        }
        const Scalar a1_old = alpha_[i1];
        const Scalar a2_old = alpha_[i2];
        const Scalar y1 = y_[i1];
        const Scalar y2 = y_[i2];
        const Scalar s = y1 * y2;

        Scalar L, H;
        if (s < 0) {
            L = std::max(Scalar{0}, a2_old - a1_old);
            H = std::min(C_, C_ + a2_old - a1_old);
        } else {
            L = std::max(Scalar{0}, a1_old + a2_old - C_);
            H = std::min(C_, a1_old + a2_old);
        }
        if (L >= H) {
            return false;
        }

        const Scalar k11 = K_(i1, i1);
        const Scalar k12 = K_(i1, i2);
        const Scalar k22 = K_(i2, i2);
        const Scalar eta = k11 + k22 - 2 * k12;
        const Scalar slope = y2 * (err_[i1] - err_[i2]);

        Scalar a2;
        if (eta > Scalar{0}) {
            a2 = std::clamp(a2_old + slope / eta, L, H);
        } else {
            // Objective change along the constraint line is
            // slope*(a2 - a2_old) - eta/2*(a2 - a2_old)^2; with eta <= 0 it
            // is maximized at one of the segment endpoints.
            const auto gain = [&](Scalar a) {
                const Scalar d = a - a2_old;
                return slope * d - eta / 2 * d * d;
            };
            const Scalar gain_l = gain(L);
            const Scalar gain_h = gain(H);
            constexpr Scalar tie = 1e-12;
            if (gain_l > gain_h + tie) {
                a2 = L;
            } else if (gain_h > gain_l + tie) {
                a2 = H;
            } else {
                a2 = a2_old;
            }
        }
        constexpr Scalar step_eps = 256 * std::numeric_limits<Scalar>::epsilon();
        if (std::abs(a2 - a2_old) < step_eps * (a2 + a2_old + step_eps)) {
            return false;
        }

        Scalar a1 = a1_old + s * (a2_old - a2);
        a1 = std::clamp(a1, Scalar{0}, C_);

        const Scalar d1 = a1 - a1_old;
        const Scalar d2 = a2 - a2_old;
        Scalar b_new;
        const Scalar b1 = b_ - err_[i1] - y1 * d1 * k11 - y2 * d2 * k12;
        const Scalar b2 = b_ - err_[i2] - y1 * d1 * k12 - y2 * d2 * k22;
        const bool a1_free = a1 > Scalar{0} && a1 < C_;
        const bool a2_free = a2 > Scalar{0} && a2 < C_;
        if (a1_free) {
            b_new = b1;
        } else if (a2_free) {
            b_new = b2;
        } else {
            b_new = (b1 + b2) / 2;
        }

        err_ += y1 * d1 * K_.col(i1) + y2 * d2 * K_.col(i2);
        err_.array() += b_new - b_;
        b_ = b_new;
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        return true;
    }

    const MatrixX<Scalar> &K_;
    Eigen::Index n_;
    Scalar C_;
    Scalar tol_;
    VectorX<Scalar> y_;
    VectorX<Scalar> alpha_;
    VectorX<Scalar> err_;
    Scalar b_;
    std::mt19937_64 rng_;
};

} // namespace detail

/// Value of the dual objective at `alphas`.
template <typename Scalar>
Scalar dual_objective(const KernelMatrix<Scalar> &K, const VectorXi &y,
                      const VectorX<Scalar> &alphas) {
    if (K.rows() != K.cols() || K.rows() != y.size() ||
        y.size() != alphas.size()) {
        throw ShapeError("dual_objective: shapes disagree");
    }
    const VectorX<Scalar> ay =
        alphas.cwiseProduct(y.template cast<Scalar>());
    return alphas.sum() - Scalar{0.5} * ay.dot(K.values * ay);
}

/**
 * Trains the dual on a symmetric precomputed kernel. `tol` is the KKT
 * slack at which a point stops counting as a violator; `max_passes` is the
 * number of consecutive non-improving full sweeps before the solver stops.
 */
template <typename Scalar>
SvmModel<Scalar> train_smo(const KernelMatrix<Scalar> &K, const VectorXi &y,
                           Scalar C, Scalar tol = Scalar{1e-3},
                           int max_passes = 5, std::uint64_t seed = 0) {
    if (!K.symmetric || K.rows() != K.cols()) {
        throw ShapeError("train_smo: kernel must be a symmetric Gram matrix");
    }
    if (K.rows() != y.size()) {
        throw ShapeError("train_smo: kernel size and label count differ");
    }
    if (y.size() < 2) {
        throw ShapeError("train_smo: need at least two samples");
    }
    detail::validate_labels(y);
    if (C <= Scalar{0}) {
        throw ConfigError("train_smo: C must be positive");
    }
    if (tol <= Scalar{0}) {
        throw ConfigError("train_smo: tol must be positive");
    }
    if (max_passes < 1) {
        throw ConfigError("train_smo: max_passes must be >= 1");
    }

    detail::SmoSolver<Scalar> solver(K.values, y, C, tol, seed);
    const long max_sweeps = std::max<long>(1000, 100 * K.rows());
    solver.run(max_passes, max_sweeps);

    SvmModel<Scalar> model;
    model.alphas = solver.alphas();
    model.bias = solver.final_bias();
    model.labels = y;
    model.C = C;
    for (Eigen::Index i = 0; i < model.alphas.size(); ++i) {
        if (model.alphas[i] > Scalar{kSupportEpsilon}) {
            model.support_indices.push_back(i);
        }
    }
    return model;
}

/// Raw decision values Sum_i y_i alpha_i K_cross(t, i) + b (rows = tests).
template <typename Scalar>
VectorX<Scalar> decision_values(const SvmModel<Scalar> &model,
                                const KernelMatrix<Scalar> &K_cross) {
    if (K_cross.cols() != model.alphas.size()) {
        throw ShapeError("decision_values: cross-kernel columns (" +
                         std::to_string(K_cross.cols()) +
                         ") must equal training size (" +
                         std::to_string(model.alphas.size()) + ")");
    }
    const VectorX<Scalar> ay =
        model.alphas.cwiseProduct(model.labels.template cast<Scalar>());
    VectorX<Scalar> values = K_cross.values * ay;
    values.array() += model.bias;
    return values;
}

/// Hard labels: sign of the decision value, with 0 mapping to +1.
template <typename Scalar>
VectorXi predict(const SvmModel<Scalar> &model,
                 const KernelMatrix<Scalar> &K_cross) {
    const VectorX<Scalar> values = decision_values(model, K_cross);
    VectorXi labels(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        labels[i] = values[i] >= Scalar{0} ? 1 : -1;
    }
    return labels;
}

/// JSON document with the model's fields; round-trips exactly.
template <typename Scalar>
nlohmann::json model_to_json(const SvmModel<Scalar> &model) {
    nlohmann::json doc;
    doc["alphas"] = std::vector<Scalar>(model.alphas.begin(),
                                        model.alphas.end());
    doc["bias"] = model.bias;
    doc["labels"] = std::vector<int>(model.labels.begin(),
                                     model.labels.end());
    doc["support_indices"] = model.support_indices;
    doc["C"] = model.C;
    return doc;
}

template <typename Scalar = double>
SvmModel<Scalar> model_from_json(const nlohmann::json &doc) {
    SvmModel<Scalar> model;
    try {
        const auto alphas = doc.at("alphas").get<std::vector<Scalar>>();
        const auto labels = doc.at("labels").get<std::vector<int>>();
        model.alphas = Eigen::Map<const VectorX<Scalar>>(
            alphas.data(), static_cast<Eigen::Index>(alphas.size()));
        model.labels = Eigen::Map<const VectorXi>(
            labels.data(), static_cast<Eigen::Index>(labels.size()));
        model.bias = doc.at("bias").get<Scalar>();
        model.C = doc.at("C").get<Scalar>();
        model.support_indices =
            doc.at("support_indices").get<std::vector<Eigen::Index>>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    }
    if (model.alphas.size() != model.labels.size()) {
        throw ShapeError("model JSON: alphas and labels lengths differ");
    }
    return model;
}

} // namespace qksvm
