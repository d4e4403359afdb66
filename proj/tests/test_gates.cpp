// Copyright 2026 The qtm-patterns Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "qtm/gates.hpp"
#include "qtm/state_vector.hpp"

using namespace qtm;
using std::numbers::pi;

namespace {

StateVector<double> random_state(std::size_t M, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> amps(std::size_t{1} << (M + 1));
    double norm = 0.0;
    for (auto &a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return StateVector<double>{M, std::move(amps)};
}

oracle::Vec to_eigen(const StateVector<double> &s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

double diff(const StateVector<double> &s, const oracle::Vec &v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        worst = std::max(worst, std::abs(s[i] - v(static_cast<Eigen::Index>(i))));
    }
    return worst;
}

} // namespace

TEST_CASE("head rotation", "[gates]") {
    SECTION("alpha = 0 is the identity") {
        auto s = random_state(3, 1);
        const auto before = s;
        apply_head_rotation(s, RotationAngle{0.0});
        CHECK(s == before);
    }
    SECTION("advances the head angle: phi0 -> phi0 + alpha") {
        const double phi0 = pi / 6;
        const double alpha = pi / std::sqrt(3.0);
        auto s = make_product_state(HeadAngle{phi0}, TapeSpec::parse("0+"));
        apply_head_rotation(s, RotationAngle{alpha});
        const auto expected =
            make_product_state(HeadAngle{phi0 + alpha}, TapeSpec::parse("0+"));
        CHECK(max_amplitude_diff(s, expected) <= 1e-15);
        CHECK(max_abs_diff(head_bloch(s), bloch_from_angle(phi0 + alpha)) <=
              1e-15);
    }
    SECTION("rotates the reduced Bloch vector about x, also when entangled") {
        const double alpha = 1.234;
        auto s = random_state(3, 2);
        const auto b = head_bloch(s);
        apply_head_rotation(s, RotationAngle{alpha});
        const BlochVector expected{
            b.x, b.y * std::cos(alpha) - b.z * std::sin(alpha),
            b.y * std::sin(alpha) + b.z * std::cos(alpha)};
        CHECK(max_abs_diff(head_bloch(s), expected) <= 1e-14);
    }
    SECTION("matches the dense operator") {
        auto s = random_state(3, 3);
        const oracle::Vec ref = oracle::head_rotation(3, 0.77) * to_eigen(s);
        apply_head_rotation(s, RotationAngle{0.77});
        CHECK(diff(s, ref) <= 1e-15);
    }
    SECTION("rotation by -alpha undoes rotation by alpha") {
        auto s = random_state(4, 4);
        const auto before = s;
        apply_head_rotation(s, RotationAngle{2.5});
        apply_head_rotation(s, RotationAngle{-2.5});
        CHECK(max_amplitude_diff(s, before) <= 1e-12);
        CHECK(std::abs(s.norm_squared() - 1.0) <= 1e-12);
    }
}

TEST_CASE("controlled gate, x variant", "[gates]") {
    SECTION("|0>_S |0>_mu flips to |0>_S |1>_mu") {
        StateVector<double> s{2};
        apply_qcnot(s, 2);
        CHECK(s[0b100] == std::complex<double>{1.0});
        CHECK(s[0] == std::complex<double>{0.0});
    }
    SECTION("head |1> branch is untouched") {
        std::vector<std::complex<double>> amps(8);
        amps[0b001] = 1.0;
        StateVector<double> s{2, amps};
        apply_qcnot(s, 1);
        CHECK(s[0b001] == std::complex<double>{1.0});
    }
    SECTION("|phi>|+> is invariant") {
        auto s = make_product_state(HeadAngle{0.4}, TapeSpec::parse("+-"));
        const auto before = s;
        apply_qcnot(s, 1);
        CHECK(max_amplitude_diff(s, before) == 0.0);
    }
    SECTION("matches the dense operator for every target") {
        for (std::size_t mu = 1; mu <= 3; ++mu) {
            auto s = random_state(3, 10 + static_cast<unsigned>(mu));
            const oracle::Vec ref = oracle::qcnot(3, mu) * to_eigen(s);
            apply_qcnot(s, mu);
            CHECK(diff(s, ref) <= 1e-15);
        }
    }
    SECTION("is an involution, bit-exact") {
        auto s = random_state(4, 5);
        const auto before = s;
        for (std::size_t mu = 1; mu <= 4; ++mu) {
            apply_qcnot(s, mu);
            CHECK_FALSE(s == before);
            apply_qcnot(s, mu);
            CHECK(s == before);
        }
    }
    SECTION("target out of range") {
        StateVector<double> s{2};
        CHECK_THROWS_AS(apply_qcnot(s, 0), ConfigError);
        CHECK_THROWS_AS(apply_qcnot(s, 3), ConfigError);
    }
}

TEST_CASE("controlled gate on a |-> tape spin acts as lambda_z on the head",
          "[gates]") {
    SECTION("phi0 = pi/6: Bloch (x, y, z) -> (-x, -y, z)") {
        auto s = make_product_state(HeadAngle{pi / 6}, TapeSpec::parse("-"));
        const auto b = head_bloch(s);
        apply_qcnot(s, 1);
        CHECK(max_abs_diff(head_bloch(s), BlochVector{-b.x, -b.y, b.z}) <=
              1e-15);
        CHECK(qcnot_minus_defect(HeadAngle{pi / 6}, TapeSpec::parse("-"), 1) <=
              1e-12);
    }
    SECTION("head |0> keeps Bloch (0, 0, -1), state picks up a sign") {
        auto s = make_product_state(HeadAngle{0.0}, TapeSpec::parse("-"));
        const auto before = s;
        apply_qcnot(s, 1);
        CHECK(max_abs_diff(head_bloch(s), BlochVector{0.0, 0.0, -1.0}) <= 1e-15);
        CHECK(max_amplitude_diff(s, before) > 0.5);
    }
    SECTION("20 random head angles and tapes") {
        std::mt19937 rng(21);
        std::uniform_real_distribution<double> u(-pi, pi);
        for (int i = 0; i < 20; ++i) {
            CHECK(qcnot_minus_defect(HeadAngle{u(rng)}, TapeSpec::parse("0-+1"),
                                     2) <= 1e-12);
        }
    }
}

TEST_CASE("rotation and controlled gate do not commute", "[gates]") {
    const double alpha = pi / std::sqrt(3.0);
    StateVector<double> a{1};
    StateVector<double> b{1};
    apply_qcnot(a, 1);
    apply_head_rotation(a, RotationAngle{alpha});
    apply_head_rotation(b, RotationAngle{alpha});
    apply_qcnot(b, 1);
    double defect = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        defect += std::norm(a[i] - b[i]);
    }
    CHECK(std::sqrt(defect) > 0.1);
}

TEST_CASE("controlled gate, i lambda_y variant", "[gates]") {
    SECTION("matches the dense operator") {
        for (std::size_t mu = 1; mu <= 3; ++mu) {
            auto s = random_state(3, 30 + static_cast<unsigned>(mu));
            const oracle::Vec ref = oracle::qcnot(3, mu, true) * to_eigen(s);
            apply_qcnot(s, mu, GateVariant::IYFlip);
            CHECK(diff(s, ref) <= 1e-15);
        }
    }
    SECTION("|0>_S|0>_mu -> |0>_S|1>_mu and |0>_S|1>_mu -> -|0>_S|0>_mu") {
        StateVector<double> s{1};
        apply_qcnot(s, 1, GateVariant::IYFlip);
        CHECK(s[0b10] == std::complex<double>{1.0});
        apply_qcnot(s, 1, GateVariant::IYFlip);
        CHECK(s[0b00] == std::complex<double>{-1.0});
    }
    SECTION("norm preserved over many applications") {
        auto s = random_state(5, 6);
        for (int rep = 0; rep < 50; ++rep) {
            for (std::size_t mu = 1; mu <= 5; ++mu) {
                apply_head_rotation(s, RotationAngle{0.9});
                apply_qcnot(s, mu, GateVariant::IYFlip);
            }
        }
        CHECK(std::abs(s.norm_squared() - 1.0) <= 1e-12);
    }
    CHECK(parse_gate_variant("iy") == GateVariant::IYFlip);
    CHECK(parse_gate_variant("x") == GateVariant::XFlip);
    CHECK_THROWS_AS(parse_gate_variant("z"), ConfigError);
}

TEST_CASE("chunked kernels equal the sequential kernels", "[gates][parallel]") {
    const std::size_t M = 17; // above the fan-out threshold
    auto seq = random_state(M, 99);
    auto par = seq;
    for (std::size_t mu : {1UL, 9UL, 17UL}) {
        apply_qcnot(seq, mu, GateVariant::XFlip, 1);
        apply_qcnot(par, mu, GateVariant::XFlip, 4);
        CHECK(seq == par);
        apply_qcnot(seq, mu, GateVariant::IYFlip, 1);
        apply_qcnot(par, mu, GateVariant::IYFlip, 4);
        CHECK(seq == par);
    }
    apply_head_rotation(seq, RotationAngle{1.1}, 1);
    apply_head_rotation(par, RotationAngle{1.1}, 4);
    CHECK(max_amplitude_diff(seq, par) <= 1e-15);
}
