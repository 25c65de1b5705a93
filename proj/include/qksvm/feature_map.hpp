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
 * The nine data-encoding circuits that map a classical feature vector x to
 * a quantum state |Phi(x)>.
 *
 * Conventions (fixed here, configurable where noted):
 *  - angle_scale defaults to pi so features in [0, 1] span angles [0, pi];
 *    rotation angles are angle_scale * x_i.
 *  - Pauli data maps use phi_i(x) = angle_scale * x_i and
 *    phi_ij(x) = (pi - angle_scale * x_i) * (pi - angle_scale * x_j).
 *  - Entanglement is a linear nearest-neighbor chain, control i -> target
 *    i+1; the ZZ phase block is decomposed as CX * RZ * CX.
 *  - AMPLITUDE pads with zeros at the high-index end and L2-normalizes.
 *  - Repetitions concatenate full layers, including the Hadamard layer of
 *    the Pauli maps each time.
 */

#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"
#include "qksvm/statevector.hpp"

namespace qksvm {

enum class FeatureMapFamily {
    ANGLE_X,
    ANGLE_Y,
    ANGLE_Z,
    AMPLITUDE,
    Z_FEATURE,
    ZZ_FEATURE,
    PARAM_X_CX,
    PARAM_Y_CY,
    PARAM_Z_CZ,
};

inline constexpr FeatureMapFamily kAllFamilies[] = {
    FeatureMapFamily::ANGLE_X,    FeatureMapFamily::ANGLE_Y,
    FeatureMapFamily::ANGLE_Z,    FeatureMapFamily::AMPLITUDE,
    FeatureMapFamily::Z_FEATURE,  FeatureMapFamily::ZZ_FEATURE,
    FeatureMapFamily::PARAM_X_CX, FeatureMapFamily::PARAM_Y_CY,
    FeatureMapFamily::PARAM_Z_CZ,
};

constexpr std::string_view family_name(FeatureMapFamily family) {
    switch (family) {
    case FeatureMapFamily::ANGLE_X:
        return "angle_x";
    case FeatureMapFamily::ANGLE_Y:
        return "angle_y";
    case FeatureMapFamily::ANGLE_Z:
        return "angle_z";
    case FeatureMapFamily::AMPLITUDE:
        return "amplitude";
    case FeatureMapFamily::Z_FEATURE:
        return "z_feature";
    case FeatureMapFamily::ZZ_FEATURE:
        return "zz_feature";
    case FeatureMapFamily::PARAM_X_CX:
        return "param_x_cx";
    case FeatureMapFamily::PARAM_Y_CY:
        return "param_y_cy";
    case FeatureMapFamily::PARAM_Z_CZ:
        return "param_z_cz";
    }
    return "unknown";
}

inline FeatureMapFamily family_from_name(std::string_view name) {
    for (FeatureMapFamily family : kAllFamilies) {
        if (family_name(family) == name) {
            return family;
        }
    }
    throw ConfigError("unknown feature-map family: \"" + std::string(name) +
                      "\"");
}

/**
 * Which encoding to build, how many times the layer pattern repeats, and
 * the multiplier applied to each feature before it is used as an angle.
 */
template <typename Scalar = double>
struct FeatureMapSpec {
    FeatureMapFamily family = FeatureMapFamily::ANGLE_X;
    int repetitions = 1;
    Scalar angle_scale = kPi<Scalar>;
};

namespace detail {

template <typename Scalar>
void validate_spec(const FeatureMapSpec<Scalar> &spec) {
    if (spec.repetitions < 1) {
        throw ConfigError("feature map repetitions must be >= 1, got " +
                          std::to_string(spec.repetitions));
    }
    if (!std::isfinite(static_cast<double>(spec.angle_scale))) {
        throw ConfigError("feature map angle_scale must be finite");
    }
}

template <typename Derived>
void validate_features(const Eigen::MatrixBase<Derived> &x) {
    if (x.size() < 1) {
        throw ShapeError("feature vector must have at least one entry");
    }
    if (!x.allFinite()) {
        throw DegenerateInputError("feature vector has non-finite entries");
    }
}

} // namespace detail

/// Qubits needed to encode a d-dimensional vector under `spec`.
template <typename Scalar>
int required_qubits(const FeatureMapSpec<Scalar> &spec, int d) {
    detail::validate_spec(spec);
    if (d < 1) {
        throw ShapeError("feature dimension must be >= 1, got " +
                         std::to_string(d));
    }
    if (spec.family != FeatureMapFamily::AMPLITUDE) {
        return d;
    }
    int q = 0;
    while ((1 << q) < d) {
        ++q;
    }
    return std::max(q, 1);
}

/**
 * Deterministic gate list realizing `spec` for feature vector `x`.
 * AMPLITUDE has no circuit form here (it writes amplitudes directly) and
 * is rejected.
 */
template <typename Scalar>
std::vector<GateSpec<Scalar>> circuit_for(const FeatureMapSpec<Scalar> &spec,
                                          const VectorX<Scalar> &x) {
    detail::validate_spec(spec);
    detail::validate_features(x);
    if (spec.family == FeatureMapFamily::AMPLITUDE) {
        throw UnsupportedFamilyError(
            "circuit_for: the amplitude map sets amplitudes directly and has "
            "no gate decomposition here");
    }

    const int n = static_cast<int>(x.size());
    const Scalar scale = spec.angle_scale;
    std::vector<GateSpec<Scalar>> gates;

    const auto rotation_layer = [&](GateKind kind) {
        for (int q = 0; q < n; ++q) {
            gates.push_back({kind, q, -1, scale * x[q]});
        }
    };
    const auto entangling_chain = [&](GateKind kind) {
        for (int q = 0; q + 1 < n; ++q) {
            gates.push_back({kind, q + 1, q, Scalar{0}});
        }
    };
    const auto pauli_z_layer = [&] {
        for (int q = 0; q < n; ++q) {
            gates.push_back(h<Scalar>(q));
        }
        for (int q = 0; q < n; ++q) {
            gates.push_back(rz(q, Scalar{2} * scale * x[q]));
        }
    };

    for (int rep = 0; rep < spec.repetitions; ++rep) {
        switch (spec.family) {
        case FeatureMapFamily::ANGLE_X:
            rotation_layer(GateKind::RX);
            break;
        case FeatureMapFamily::ANGLE_Y:
            rotation_layer(GateKind::RY);
            break;
        case FeatureMapFamily::ANGLE_Z:
            rotation_layer(GateKind::RZ);
            break;
        case FeatureMapFamily::Z_FEATURE:
            pauli_z_layer();
            break;
        case FeatureMapFamily::ZZ_FEATURE:
            pauli_z_layer();
            for (int q = 0; q + 1 < n; ++q) {
                const Scalar phi = (kPi<Scalar> - scale * x[q]) *
                                   (kPi<Scalar> - scale * x[q + 1]);
                gates.push_back(cx<Scalar>(q, q + 1));
                gates.push_back(rz(q + 1, Scalar{2} * phi));
                gates.push_back(cx<Scalar>(q, q + 1));
            }
            break;
        case FeatureMapFamily::PARAM_X_CX:
            rotation_layer(GateKind::RX);
            entangling_chain(GateKind::CX);
            break;
        case FeatureMapFamily::PARAM_Y_CY:
            rotation_layer(GateKind::RY);
            entangling_chain(GateKind::CY);
            break;
        case FeatureMapFamily::PARAM_Z_CZ:
            rotation_layer(GateKind::RZ);
            entangling_chain(GateKind::CZ);
            break;
        case FeatureMapFamily::AMPLITUDE:
            break; // unreachable
        }
    }
    return gates;
}

/// |Phi(x)>: the encoded state for feature vector `x`.
template <typename Scalar>
StateVector<Scalar> encode(const FeatureMapSpec<Scalar> &spec,
                           const VectorX<Scalar> &x) {
    detail::validate_spec(spec);
    detail::validate_features(x);

    const int d = static_cast<int>(x.size());
    const int n = required_qubits(spec, d);

    if (spec.family == FeatureMapFamily::AMPLITUDE) {
        const Scalar norm = x.norm();
        if (norm == Scalar{0}) {
            throw DegenerateInputError(
                "amplitude encoding: the all-zero vector cannot be "
                "normalized");
        }
        auto state = init_zero<Scalar>(n);
        state.amplitudes.setZero();
        for (int k = 0; k < d; ++k) {
            state.amplitudes[k] =
                typename StateVector<Scalar>::Complex{x[k] / norm, 0};
        }
        return state;
    }

    auto state = init_zero<Scalar>(n);
    for (const auto &gate : circuit_for(spec, x)) {
        apply_gate_in_place(state, gate);
    }
    return state;
}

} // namespace qksvm
