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
#include <complex>
#include <random>
#include <vector>

#include "oracle/dense_sim.hpp"
#include "qksvm/statevector.hpp"

using namespace qksvm;
using testing::CVector;
using Complexd = std::complex<double>;

namespace {

StateVector<double> random_state(int n_qubits, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto state = init_zero<double>(n_qubits);
    for (Eigen::Index k = 0; k < state.amplitudes.size(); ++k) {
        state.amplitudes[k] = Complexd{gauss(rng), gauss(rng)};
    }
    state.amplitudes.normalize();
    return state;
}

GateSpec<double> random_gate(int n_qubits, std::mt19937_64 &rng) {
    // Controlled kinds need a second qubit.
    std::uniform_int_distribution<int> kind_dist(0, n_qubits > 1 ? 7 : 3);
    std::uniform_int_distribution<int> qubit_dist(0, n_qubits - 1);
    std::uniform_real_distribution<double> angle_dist(-6.0, 6.0);
    GateSpec<double> g;
    g.kind = static_cast<GateKind>(kind_dist(rng));
    g.target = qubit_dist(rng);
    if (is_controlled(g.kind)) {
        do {
            g.control = qubit_dist(rng);
        } while (g.control == g.target);
    }
    if (has_angle(g.kind)) {
        g.angle = angle_dist(rng);
    }
    return g;
}

constexpr GateKind kAllKinds[] = {GateKind::RX, GateKind::RY, GateKind::RZ,
                                  GateKind::H,  GateKind::CX, GateKind::CY,
                                  GateKind::CZ, GateKind::CPHASE};

} // namespace

TEST_CASE("init_zero prepares |0...0>") {
    auto s1 = init_zero<double>(1);
    REQUIRE(s1.amplitudes.size() == 2);
    CHECK(s1.amplitudes[0] == Complexd{1, 0});
    CHECK(s1.amplitudes[1] == Complexd{0, 0});

    auto s3 = init_zero<double>(3);
    REQUIRE(s3.amplitudes.size() == 8);
    CHECK(s3.amplitudes[0] == Complexd{1, 0});
    for (Eigen::Index k = 1; k < 8; ++k) {
        CHECK(s3.amplitudes[k] == Complexd{0, 0});
    }
}

TEST_CASE("init_zero rejects out-of-range qubit counts") {
    CHECK_THROWS_AS(init_zero<double>(0), CapacityError);
    CHECK_THROWS_AS(init_zero<double>(-2), CapacityError);
    CHECK_THROWS_AS(init_zero<double>(kMaxQubits + 1), CapacityError);
}

TEST_CASE("Hadamard on |0> gives the uniform superposition") {
    auto s = apply_gate(init_zero<double>(1), h<double>(0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amplitudes[0] - Complexd{r, 0}) < 1e-15);
    CHECK(std::abs(s.amplitudes[1] - Complexd{r, 0}) < 1e-15);
}

TEST_CASE("CX truth table with qubit 0 as least-significant bit") {
    // State with qubit 0 = |1>, qubit 1 = |0> is basis index 1.
    auto s = init_zero<double>(2);
    s.amplitudes[0] = 0;
    s.amplitudes[1] = 1;
    auto out = apply_gate(s, cx<double>(0, 1));
    CHECK(out.amplitudes[3] == Complexd{1, 0});
    CHECK(out.amplitudes[1] == Complexd{0, 0});

    // Control bit clear: nothing moves.
    auto idle = apply_gate(init_zero<double>(2), cx<double>(0, 1));
    CHECK(idle.amplitudes[0] == Complexd{1, 0});
}

TEST_CASE("RX(pi/2) on |0> matches the rotation matrix column") {
    auto s = apply_gate(init_zero<double>(1), rx(0, kPi<double> / 2));
    const double c = std::cos(kPi<double> / 4);
    CHECK(std::abs(s.amplitudes[0] - Complexd{c, 0}) < 1e-15);
    CHECK(std::abs(s.amplitudes[1] - Complexd{0, -c}) < 1e-15);
}

TEST_CASE("RZ on |0...0> is a pure global phase") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto before = init_zero<double>(3);
        auto after = before;
        for (int q = 0; q < 3; ++q) {
            apply_gate_in_place(after, rz(q, angle(rng)));
        }
        const double fid = std::norm(inner_product(before, after));
        CHECK(fid == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("apply_gate keeps value semantics") {
    auto s = init_zero<double>(2);
    auto copy = s;
    auto out = apply_gate(s, h<double>(0));
    CHECK(s.amplitudes == copy.amplitudes);
    CHECK(out.amplitudes != s.amplitudes);
}

TEST_CASE("gate validation errors") {
    auto s = init_zero<double>(2);
    CHECK_THROWS_AS(apply_gate(s, h<double>(2)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, h<double>(-1)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, cx<double>(2, 0)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, cx<double>(1, 1)), IndexError);
    GateSpec<double> bad = h<double>(0);
    bad.control = 1;
    CHECK_THROWS_AS(apply_gate(s, bad), IndexError);
}

TEST_CASE("inner_product basics") {
    auto zero = init_zero<double>(1);
    auto one = zero;
    one.amplitudes[0] = 0;
    one.amplitudes[1] = 1;
    auto plus = apply_gate(zero, h<double>(0));

    CHECK(std::abs(inner_product(zero, zero) - Complexd{1, 0}) < 1e-12);
    CHECK(std::abs(inner_product(zero, one)) < 1e-15);
    CHECK(std::abs(inner_product(plus, zero) - Complexd{1 / std::sqrt(2.0), 0}) <
          1e-15);

    CHECK_THROWS_AS(inner_product(zero, init_zero<double>(2)), ShapeError);
}

TEST_CASE("inner_product conjugate symmetry on random states") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_state(3, rng);
        auto b = random_state(3, rng);
        const auto ab = inner_product(a, b);
        const auto ba = inner_product(b, a);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-14);
    }
}

TEST_CASE("every gate matches the dense Kronecker oracle on <=3 qubits") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    for (int n = 1; n <= 3; ++n) {
        for (GateKind kind : kAllKinds) {
            for (int target = 0; target < n; ++target) {
                for (int control = -1; control < n; ++control) {
                    if (is_controlled(kind) &&
                        (control < 0 || control == target)) {
                        continue;
                    }
                    if (!is_controlled(kind) && control != -1) {
                        continue;
                    }
                    for (int rep = 0; rep < 4; ++rep) {
                        GateSpec<double> g{kind, target, control,
                                           has_angle(kind) ? angle(rng) : 0.0};
                        auto in = random_state(n, rng);
                        auto out = apply_gate(in, g);
                        CVector expect =
                            testing::dense_apply(in.amplitudes, n, g);
                        const double err =
                            (out.amplitudes - expect).cwiseAbs().maxCoeff();
                        CHECK(err < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("dense oracle matrices are themselves unitary") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        auto g = random_gate(n, rng);
        auto u = testing::dense_unitary(n, g);
        auto gram = (u.adjoint() * u).eval();
        CHECK((gram - testing::CMatrix::Identity(u.rows(), u.cols()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("1000 random gate sequences preserve the norm") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        auto state = init_zero<double>(n);
        const int depth = 1 + static_cast<int>(rng() % 30);
        for (int d = 0; d < depth; ++d) {
            apply_gate_in_place(state, random_gate(n, rng));
        }
        CHECK(std::abs(state.amplitudes.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("rotation composition: R(a) then R(b) equals R(a+b)") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    using Maker = GateSpec<double> (*)(int, double);
    const Maker makers[] = {&rx<double>, &ry<double>, &rz<double>};
    for (auto maker : makers) {
        for (int trial = 0; trial < 30; ++trial) {
            const double a = angle(rng);
            const double b = angle(rng);
            auto in = random_state(2, rng);
            auto two_step = apply_gate(apply_gate(in, maker(1, a)), maker(1, b));
            auto one_step = apply_gate(in, maker(1, a + b));
            CHECK((two_step.amplitudes - one_step.amplitudes)
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
        }
    }
}
