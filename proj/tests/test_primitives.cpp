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
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "qtm/analysis.hpp"
#include "qtm/engine.hpp"
#include "qtm/primitives.hpp"

using namespace qtm;
using std::numbers::pi;

namespace {
const double kAlpha = pi / std::sqrt(3.0);
}

TEST_CASE("TapePattern ranks lexicographically with + before -", "[primitives]") {
    CHECK(TapePattern::parse("++").rank() == 0);
    CHECK(TapePattern::parse("+-").rank() == 1);
    CHECK(TapePattern::parse("-+").rank() == 2);
    CHECK(TapePattern::parse("--").rank() == 3);
    CHECK(TapePattern::parse("-+").minus_mask() == 0b01);
    CHECK(TapePattern::parse("+-+").repeated(2).str() == "+-++-+");
    for (std::size_t M = 1; M <= 6; ++M) {
        for (std::size_t r = 0; r < (std::size_t{1} << M); ++r) {
            CHECK(TapePattern::from_rank(r, M).rank() == r);
        }
    }
    CHECK_THROWS_AS(TapePattern::parse("+0"), ConfigError);
    CHECK_THROWS_AS(TapePattern::from_rank(4, 2), ConfigError);
}

TEST_CASE("primitive_step", "[primitives]") {
    const double phi0 = 0.3;
    const auto minus = TapePattern::parse("-");
    auto h = primitive_step({phi0}, minus, 1, RotationAngle{kAlpha});
    CHECK(h.phi == phi0 + kAlpha);
    h = primitive_step(h, minus, 2, RotationAngle{kAlpha});
    CHECK(h.phi == -(phi0 + kAlpha));

    const auto plus = TapePattern::parse("++");
    CHECK(primitive_step({phi0}, plus, 2, RotationAngle{kAlpha}).phi == phi0);
    CHECK(primitive_step({phi0}, plus, 4, RotationAngle{kAlpha}).phi == phi0);

    const auto t = run_primitive(TapePattern::parse("+++"), phi0, 0.0, 100);
    for (const auto &pt : t.points) {
        CHECK(pt.bloch == bloch_from_angle(phi0));
    }
}

TEST_CASE("run_primitive: M=1 machine rules", "[primitives]") {
    const double phi0 = pi / 6;
    SECTION("aperiodic |+>: phi0, phi0+a, phi0+a, phi0+2a, phi0+2a") {
        const auto t = run_primitive(TapePattern::parse("+"), phi0, kAlpha, 4);
        const double angles[] = {phi0, phi0 + kAlpha, phi0 + kAlpha,
                                 phi0 + 2 * kAlpha, phi0 + 2 * kAlpha};
        for (std::size_t m = 0; m <= 4; ++m) {
            CHECK(max_abs_diff(t[m], bloch_from_angle(angles[m])) <= 1e-15);
        }
    }
    SECTION("periodic |->: closes after 4 steps") {
        const auto t = run_primitive(TapePattern::parse("-"), phi0, kAlpha, 8);
        CHECK(max_abs_diff(t[4], t[0]) <= 1e-15);
        CHECK(max_abs_diff(t[8], t[0]) <= 1e-15);
        CHECK(std::abs(t[1].y + t[2].y) <= 1e-15);
        CHECK(std::abs(t[1].z - t[2].z) <= 1e-15);
        CHECK(std::abs(t[3].y + t[0].y) <= 1e-15);
    }
}

TEST_CASE("classify", "[primitives]") {
    auto kind = [](const char *p) { return classify(TapePattern::parse(p)).kind; };
    using K = PeriodicityKind;
    CHECK(kind("+") == K::Aperiodic);
    CHECK(kind("-") == K::Periodic);
    CHECK(kind("++") == K::Aperiodic);
    CHECK(kind("--") == K::Periodic);
    CHECK(kind("+-") == K::Periodic);
    CHECK(kind("-+") == K::Periodic);

    std::vector<std::string> periodic3;
    for (std::size_t r = 0; r < 8; ++r) {
        const auto p = TapePattern::from_rank(r, 3);
        if (classify(p).kind == K::Periodic) {
            periodic3.push_back(p.str());
        }
    }
    CHECK(periodic3 == std::vector<std::string>{"++-", "+-+", "-++", "---"});

    const auto c = classify(TapePattern::parse("+-++-+++"));
    CHECK(c.q == 2);
    CHECK(c.gaps == std::vector<std::size_t>{1, 2, 3});
    // n_0 + n_2 = 4 but (M - q)/2 = 3
    CHECK(c.kind == K::Aperiodic);
    CHECK(classify(TapePattern::parse("+-+++-++")).kind == K::Periodic);
    CHECK(classify(TapePattern::parse("+-++-++")).kind == K::Aperiodic);
    CHECK(classify(TapePattern::parse("++++")).q == 0);
    CHECK(kind("++++") == K::Aperiodic);
}

TEST_CASE("detect_period_numeric", "[primitives]") {
    const auto minus = TapePattern::parse("-");
    CHECK(detect_period_numeric(minus, 0.2, kAlpha, 10) == 4);
    CHECK(detect_period_numeric(minus, 0.2, 1.0, 10) == 4);
    CHECK_FALSE(
        detect_period_numeric(TapePattern::parse("+"), 0.0, kAlpha, 10000));
    // rotation by pi/2 per cycle: 4 cycles of 2 steps
    CHECK(detect_period_numeric(TapePattern::parse("+"), 0.0, pi / 2, 100) == 8);
    CHECK(detect_period_numeric(TapePattern::parse("--"), 0.0, kAlpha, 10)
              .value_or(0) <= 8);
    CHECK_THROWS_AS(detect_period_numeric(minus, 0.0, 1.0, 1), ConfigError);
}

TEST_CASE("classifier agrees with numeric period search", "[primitives][property]") {
    for (std::size_t M = 1; M <= 8; ++M) {
        for (std::size_t r = 0; r < (std::size_t{1} << M); ++r) {
            const auto p = TapePattern::from_rank(r, M);
            const auto cls = classify(p);
            INFO("pattern " << p.str());
            if (cls.kind == PeriodicityKind::Periodic) {
                const auto a = detect_period_numeric(p, 0.0, kAlpha, 1000);
                const auto b = detect_period_numeric(p, 0.0, 1.0, 1000);
                REQUIRE(a.has_value());
                CHECK(*a <= 4 * M);
                CHECK(a == b);
            } else {
                CHECK_FALSE(detect_period_numeric(p, 0.0, kAlpha, 1000));
            }
        }
    }
}

TEST_CASE("one cycle is an affine map of the head angle", "[primitives][property]") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t M = 1; M <= 6; ++M) {
        for (std::size_t r = 0; r < (std::size_t{1} << M); ++r) {
            const auto p = TapePattern::from_rank(r, M);
            std::vector<double> alphas(M);
            for (auto &a : alphas) {
                a = u(rng);
            }
            const double phi0 = u(rng);
            const auto map = cycle_map(p, alphas);
            const auto phis = primitive_angles(p, phi0, alphas, 4 * M);
            CHECK(map.sign == ((p.minus_count() % 2) ? -1 : 1));
            CHECK(std::abs(phis[2 * M] - (map.sign * phi0 + map.shift)) <= 1e-12);
            if (p.minus_count() % 2 == 1) {
                CHECK(std::abs(phis[4 * M] - phi0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("primitives equal the state-vector engine", "[primitives][property]") {
    for (std::size_t M = 1; M <= 6; ++M) {
        for (std::size_t r = 0; r < (std::size_t{1} << M); ++r) {
            const auto p = TapePattern::from_rank(r, M);
            const auto prim = run_primitive(p, pi / 6, kAlpha, 200);
            const auto full = run(
                MachineConfig::uniform(M, kAlpha, pi / 6, p.as_tape(), 200));
            INFO("pattern " << p.str());
            CHECK(max_trajectory_diff(prim, full) <= 1e-10);
            for (const auto &pt : prim.points) {
                CHECK(std::abs(purity(pt.bloch) - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("decompose", "[primitives]") {
    SECTION("all-zero tape has equal weights 1/2^M") {
        for (std::size_t M = 1; M <= 6; ++M) {
            const auto w = decompose(TapeSpec::zeros(M));
            for (double x : w.weights) {
                CHECK(x == std::ldexp(1.0, -static_cast<int>(M)));
            }
        }
    }
    SECTION("an eigenstate tape is a single primitive") {
        const auto w = decompose(TapeSpec::parse("+-"));
        CHECK(w.weights == std::vector<double>{0.0, 1.0, 0.0, 0.0});
    }
    SECTION("10 expands to four quarter weights") {
        const auto w = decompose(TapeSpec::parse("10"));
        CHECK(w.weights == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    }
    SECTION("projection route agrees with the product route") {
        for (const char *tape : {"0", "1-", "+0", "01+-", "1101"}) {
            const auto spec = TapeSpec::parse(tape);
            const std::size_t M = spec.size();
            // tape amplitudes = head |0> sector of the product state
            const auto full = make_product_state(HeadAngle{0.0}, spec);
            std::vector<std::complex<double>> amps;
            for (std::size_t t = 0; t < (std::size_t{1} << M); ++t) {
                amps.push_back(full[2 * t]);
            }
            const auto a = decompose(spec);
            const auto b = decompose_amplitudes(M, amps);
            for (std::size_t r = 0; r < a.weights.size(); ++r) {
                CHECK(std::abs(a.weights[r] - b.weights[r]) <= 1e-15);
            }
        }
        std::vector<std::complex<double>> bad(4, 1.0);
        CHECK_THROWS_AS(decompose_amplitudes(2, bad), ConfigError);
        CHECK_THROWS_AS(decompose_amplitudes(3, bad), ConfigError);
    }
    SECTION("restrict to periodic patterns") {
        const auto w =
            restrict_weights(decompose(TapeSpec::zeros(3)), PeriodicityKind::Periodic);
        double total = 0.0;
        for (std::size_t r = 0; r < 8; ++r) {
            const bool periodic = classify(TapePattern::from_rank(r, 3)).kind ==
                                  PeriodicityKind::Periodic;
            CHECK(w.weights[r] == (periodic ? 0.25 : 0.0));
            total += w.weights[r];
        }
        CHECK(total == 1.0);
        CHECK_THROWS_AS(restrict_weights(decompose(TapeSpec::parse("+")),
                                         PeriodicityKind::Periodic),
                        ConfigError);
    }
}

TEST_CASE("superpose", "[primitives]") {
    SECTION("unit weight reproduces the primitive") {
        WeightVector w{2, {0.0, 0.0, 1.0, 0.0}};
        const auto s = superpose(w, 0.4, kAlpha, 50);
        const auto p = run_primitive(TapePattern::parse("-+"), 0.4, kAlpha, 50);
        CHECK(s.points == p.points);
    }
    SECTION("M=1 equal weights cancel lambda_y after the first cycle") {
        const auto s = superpose(decompose(TapeSpec::zeros(1)), 0.0, kAlpha, 2);
        CHECK(std::abs(s[1].y - std::sin(kAlpha)) <= 1e-15);
        CHECK(std::abs(s[2].y) <= 1e-15);
    }
    SECTION("superposition of product tapes equals the engine") {
        for (std::size_t M = 1; M <= 6; ++M) {
            for (const auto &tape :
                 {std::string(M, '0'), std::string(M, '1'),
                  std::string("+0-1+0").substr(0, M)}) {
                const auto spec = TapeSpec::parse(tape);
                for (double phi0 : {0.0, pi / 6}) {
                    const auto s = superpose(decompose(spec), phi0, kAlpha, 200);
                    const auto e = run(
                        MachineConfig::uniform(M, kAlpha, phi0, spec, 200));
                    INFO("tape " << tape);
                    CHECK(max_trajectory_diff(s, e) <= 1e-9);
                }
            }
        }
    }
    SECTION("invalid weights") {
        CHECK_THROWS_AS(superpose(WeightVector{1, {0.5, 0.4}}, 0.0, 1.0, 2),
                        ConfigError);
        CHECK_THROWS_AS(superpose(WeightVector{2, {1.0}}, 0.0, 1.0, 2),
                        ConfigError);
    }
}

TEST_CASE("orbits of tape M are contained in those of kM", "[primitives][property]") {
    for (const char *base : {"+", "-"}) {
        const auto p = TapePattern::parse(base);
        for (double phi0 : {0.0, pi / 6}) {
            const auto small = distinct_points(run_primitive(p, phi0, kAlpha, 600));
            for (std::size_t k : {2, 3}) {
                const auto big = distinct_points(
                    run_primitive(p.repeated(k), phi0, kAlpha, 600 * k));
                INFO(base << " k=" << k);
                CHECK(is_subset(small, big, 1e-9));
            }
        }
    }
}
