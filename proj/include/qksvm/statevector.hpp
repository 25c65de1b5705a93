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
 * Dense, exact simulation of pure n-qubit states and the gate set used by
 * the feature-map encodings.
 *
 * Convention: amplitudes are stored as a flat array indexed by the standard
 * binary encoding with qubit 0 as the least-significant bit. Basis index
 * b = sum_q bit_q(b) * 2^q, so e.g. on two qubits the amplitude of index 1
 * has qubit 0 in |1> and qubit 1 in |0>. Gates are applied in place over
 * strided index pairs; no 2^n x 2^n matrices are ever materialized.
 */

#pragma once

#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qksvm/common.hpp"
#include "qksvm/error.hpp"

namespace qksvm {

/// Hard cap on simulated qubits (2^24 amplitudes = 256 MiB of doubles).
inline constexpr int kMaxQubits = 24;

enum class GateKind { RX, RY, RZ, H, CX, CY, CZ, CPHASE };

constexpr bool is_controlled(GateKind kind) {
    return kind == GateKind::CX || kind == GateKind::CY ||
           kind == GateKind::CZ || kind == GateKind::CPHASE;
}

constexpr bool has_angle(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY ||
           kind == GateKind::RZ || kind == GateKind::CPHASE;
}

/**
 * One gate instance. `control` is meaningful only for the controlled kinds
 * (CX/CY/CZ/CPHASE) and must stay -1 otherwise; `angle` (radians) is
 * meaningful only for RX/RY/RZ/CPHASE.
 */
template <typename Scalar = double>
struct GateSpec {
    GateKind kind = GateKind::H;
    int target = 0;
    int control = -1;
    Scalar angle = Scalar{0};
};

// Terse constructors so circuit builders read like circuit diagrams.
template <typename Scalar = double>
GateSpec<Scalar> rx(int target, Scalar angle) {
    return {GateKind::RX, target, -1, angle};
}
template <typename Scalar = double>
GateSpec<Scalar> ry(int target, Scalar angle) {
    return {GateKind::RY, target, -1, angle};
}
template <typename Scalar = double>
GateSpec<Scalar> rz(int target, Scalar angle) {
    return {GateKind::RZ, target, -1, angle};
}
template <typename Scalar = double>
GateSpec<Scalar> h(int target) {
    return {GateKind::H, target, -1, Scalar{0}};
}
template <typename Scalar = double>
GateSpec<Scalar> cx(int control, int target) {
    return {GateKind::CX, target, control, Scalar{0}};
}
template <typename Scalar = double>
GateSpec<Scalar> cy(int control, int target) {
    return {GateKind::CY, target, control, Scalar{0}};
}
template <typename Scalar = double>
GateSpec<Scalar> cz(int control, int target) {
    return {GateKind::CZ, target, control, Scalar{0}};
}
template <typename Scalar = double>
GateSpec<Scalar> cphase(int control, int target, Scalar angle) {
    return {GateKind::CPHASE, target, control, angle};
}

/**
 * Pure n-qubit state. Invariant: amplitudes.size() == 2^n_qubits and the
 * squared L2 norm stays 1 (up to roundoff) under every gate.
 */
template <typename Scalar = double>
struct StateVector {
    using Complex = std::complex<Scalar>;
    using AmplitudeVector = VectorX<Complex>;

    int n_qubits = 0;
    AmplitudeVector amplitudes;
};

/// |0...0> on `n_qubits` qubits.
template <typename Scalar = double>
StateVector<Scalar> init_zero(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("init_zero: n_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n_qubits));
    }
    StateVector<Scalar> state;
    state.n_qubits = n_qubits;
    state.amplitudes =
        StateVector<Scalar>::AmplitudeVector::Zero(Eigen::Index{1} << n_qubits);
    state.amplitudes[0] = typename StateVector<Scalar>::Complex{1, 0};
    return state;
}

namespace detail {

/// Applies `f(a0, a1)` to every amplitude pair differing only in `target`.
template <typename Scalar, typename PairFn>
void for_each_target_pair(StateVector<Scalar> &state, int target, PairFn &&f) {
    auto &amps = state.amplitudes;
    const Eigen::Index dim = amps.size();
    const Eigen::Index stride = Eigen::Index{1} << target;
    for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            f(amps[k], amps[k + stride]);
        }
    }
}

/// Same pair walk, restricted to pairs whose `control` bit is set.
template <typename Scalar, typename PairFn>
void for_each_controlled_pair(StateVector<Scalar> &state, int control,
                              int target, PairFn &&f) {
    auto &amps = state.amplitudes;
    const Eigen::Index dim = amps.size();
    const Eigen::Index stride = Eigen::Index{1} << target;
    const Eigen::Index cbit = Eigen::Index{1} << control;
    for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            if ((k & cbit) != 0) {
                f(amps[k], amps[k + stride]);
            }
        }
    }
}

template <typename Scalar>
void validate_gate(const StateVector<Scalar> &state,
                   const GateSpec<Scalar> &gate) {
    const int n = state.n_qubits;
    if (gate.target < 0 || gate.target >= n) {
        throw IndexError("apply_gate: target " + std::to_string(gate.target) +
                         " out of range for " + std::to_string(n) + " qubits");
    }
    if (is_controlled(gate.kind)) {
        if (gate.control < 0 || gate.control >= n) {
            throw IndexError("apply_gate: control " +
                             std::to_string(gate.control) +
                             " out of range for " + std::to_string(n) +
                             " qubits");
        }
        if (gate.control == gate.target) {
            throw IndexError("apply_gate: control and target must differ");
        }
    } else if (gate.control != -1) {
        throw IndexError("apply_gate: control set on a single-qubit gate");
    }
}

} // namespace detail

/// In-place gate application; O(2^n) per gate.
template <typename Scalar>
void apply_gate_in_place(StateVector<Scalar> &state,
                         const GateSpec<Scalar> &gate) {
    using Complex = typename StateVector<Scalar>::Complex;
    detail::validate_gate(state, gate);

    const Scalar half = gate.angle / Scalar{2};
    switch (gate.kind) {
    case GateKind::RX: {
        const Scalar c = std::cos(half);
        const Scalar s = std::sin(half);
        detail::for_each_target_pair(state, gate.target,
                                     [c, s](Complex &a0, Complex &a1) {
                                         const Complex t0 = a0;
                                         a0 = c * t0 - Complex{0, 1} * s * a1;
                                         a1 = -Complex{0, 1} * s * t0 + c * a1;
                                     });
        break;
    }
    case GateKind::RY: {
        const Scalar c = std::cos(half);
        const Scalar s = std::sin(half);
        detail::for_each_target_pair(state, gate.target,
                                     [c, s](Complex &a0, Complex &a1) {
                                         const Complex t0 = a0;
                                         a0 = c * t0 - s * a1;
                                         a1 = s * t0 + c * a1;
                                     });
        break;
    }
    case GateKind::RZ: {
        const Complex p0 = std::polar(Scalar{1}, -half);
        const Complex p1 = std::polar(Scalar{1}, half);
        detail::for_each_target_pair(state, gate.target,
                                     [p0, p1](Complex &a0, Complex &a1) {
                                         a0 *= p0;
                                         a1 *= p1;
                                     });
        break;
    }
    case GateKind::H: {
        const Scalar inv_sqrt2 = Scalar{1} / std::sqrt(Scalar{2});
        detail::for_each_target_pair(state, gate.target,
                                     [inv_sqrt2](Complex &a0, Complex &a1) {
                                         const Complex t0 = a0;
                                         a0 = inv_sqrt2 * (t0 + a1);
                                         a1 = inv_sqrt2 * (t0 - a1);
                                     });
        break;
    }
    case GateKind::CX:
        detail::for_each_controlled_pair(
            state, gate.control, gate.target,
            [](Complex &a0, Complex &a1) { std::swap(a0, a1); });
        break;
    case GateKind::CY:
        detail::for_each_controlled_pair(state, gate.control, gate.target,
                                         [](Complex &a0, Complex &a1) {
                                             const Complex t0 = a0;
                                             a0 = -Complex{0, 1} * a1;
                                             a1 = Complex{0, 1} * t0;
                                         });
        break;
    case GateKind::CZ:
        detail::for_each_controlled_pair(
            state, gate.control, gate.target,
            [](Complex &, Complex &a1) { a1 = -a1; });
        break;
    case GateKind::CPHASE: {
        const Complex phase = std::polar(Scalar{1}, gate.angle);
        detail::for_each_controlled_pair(
            state, gate.control, gate.target,
            [phase](Complex &, Complex &a1) { a1 *= phase; });
        break;
    }
    }
}

/// Value-semantics gate application: the input state is left untouched.
template <typename Scalar>
StateVector<Scalar> apply_gate(StateVector<Scalar> state,
                               const GateSpec<Scalar> &gate) {
    apply_gate_in_place(state, gate);
    return state;
}

/// <a|b> = sum_i conj(a_i) b_i.
template <typename Scalar>
std::complex<Scalar> inner_product(const StateVector<Scalar> &a,
                                   const StateVector<Scalar> &b) {
    if (a.n_qubits != b.n_qubits) {
        throw ShapeError("inner_product: qubit counts differ (" +
                         std::to_string(a.n_qubits) + " vs " +
                         std::to_string(b.n_qubits) + ")");
    }
    // Eigen's dot conjugates its first operand, matching <a|b>.
    return a.amplitudes.dot(b.amplitudes);
}

} // namespace qksvm
