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
/**
 * @file
 * In-place amplitude kernels for the two machine gates:
 *
 *   U_alpha(S) = cos(alpha/2) 1(S) - i sin(alpha/2) lambda_x(S)
 *   U(S,mu)    = P_00(S) G(mu) + P_11(S) 1(mu),  G = lambda_x or i lambda_y
 *
 * The controlled gate acts on the tape only when the head is |0>.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "error.hpp"
#include "parallel.hpp"
#include "state_vector.hpp"

namespace qtm {

/// Tape operator applied by the controlled gate on the head-|0> branch.
enum class GateVariant {
    XFlip,  ///< lambda_x: plain swap, self-inverse
    IYFlip, ///< i lambda_y = P_10 - P_01: |0> -> |1>, |1> -> -|0>
};

inline std::string_view to_string(GateVariant v) {
    return v == GateVariant::XFlip ? "x" : "iy";
}

inline GateVariant parse_gate_variant(std::string_view text) {
    if (text == "x" || text == "xflip") {
        return GateVariant::XFlip;
    }
    if (text == "iy" || text == "iyflip") {
        return GateVariant::IYFlip;
    }
    throw ConfigError("unknown gate variant \"" + std::string(text) +
                      "\" (expected x or iy)");
}

/// Kernels below this many amplitudes never fan out.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 16;

namespace detail {

/// Inserts a zero bit at position `bit` of `k`.
constexpr std::size_t insert_zero_bit(std::size_t k, std::size_t bit) {
    const std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k ^ low) << 1) | low;
}

inline std::size_t effective_threads(std::size_t size, std::size_t threads) {
    return size < kParallelThreshold ? 1 : threads;
}

} // namespace detail

/**
 * @brief Applies U_alpha(S) to every head pair (amps[2t], amps[2t+1]).
 *
 * (a, b) -> (c a - i s b, -i s a + c b), c = cos(alpha/2), s = sin(alpha/2).
 */
template <std::floating_point Real>
void apply_head_rotation(StateVector<Real> &state, RotationAngle alpha,
                         std::size_t threads = 1) {
    const Real c = static_cast<Real>(std::cos(alpha.radians / 2));
    const Real s = static_cast<Real>(std::sin(alpha.radians / 2));
    auto *amps = state.amplitudes().data();
    const std::size_t pairs = state.size() / 2;
    parallel_for(pairs, detail::effective_threads(state.size(), threads),
                 [=](std::size_t lo, std::size_t hi) {
                     for (std::size_t t = lo; t < hi; ++t) {
                         const auto a = amps[2 * t];
                         const auto b = amps[2 * t + 1];
                         // -i s b = (s b.im, -s b.re)
                         amps[2 * t] = {c * a.real() + s * b.imag(),
                                        c * a.imag() - s * b.real()};
                         amps[2 * t + 1] = {s * a.imag() + c * b.real(),
                                            -s * a.real() + c * b.imag()};
                     }
                 });
}

/**
 * @brief Applies the controlled gate U(S, mu).
 *
 * Visits each index i with head bit 0 and tape bit mu clear, paired with
 * j = i | 2^mu. XFlip swaps (amps[i], amps[j]); IYFlip maps them to
 * (-amps[j], amps[i]). Head-|1> amplitudes are untouched.
 */
template <std::floating_point Real>
void apply_qcnot(StateVector<Real> &state, std::size_t mu,
                 GateVariant variant = GateVariant::XFlip,
                 std::size_t threads = 1) {
    if (mu < 1 || mu > state.num_tape_spins()) {
        throw ConfigError("QCNOT target mu=" + std::to_string(mu) +
                          " outside 1.." +
                          std::to_string(state.num_tape_spins()));
    }
    const std::size_t mask = std::size_t{1} << mu;
    auto *amps = state.amplitudes().data();
    const std::size_t quads = state.size() / 4;
    const std::size_t nthreads =
        detail::effective_threads(state.size(), threads);
    if (variant == GateVariant::XFlip) {
        parallel_for(quads, nthreads, [=](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t i = detail::insert_zero_bit(k << 1, mu);
                std::swap(amps[i], amps[i | mask]);
            }
        });
    } else {
        parallel_for(quads, nthreads, [=](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t i = detail::insert_zero_bit(k << 1, mu);
                const auto a0 = amps[i];
                amps[i] = -amps[i | mask];
                amps[i | mask] = a0;
            }
        });
    }
}

/// lambda_z(S) = P_11 - P_00: negates every head-|0> amplitude.
template <std::floating_point Real>
void apply_head_lambda_z(StateVector<Real> &state) {
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); i += 2) {
        amps[i] = -amps[i];
    }
}

/// Largest amplitude difference between two states of equal size.
template <std::floating_point Real>
Real max_amplitude_diff(const StateVector<Real> &a,
                        const StateVector<Real> &b) {
    if (a.size() != b.size()) {
        throw ConfigError("states differ in size");
    }
    Real worst{0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

/**
 * @brief Defect of the identity U(S,mu) |phi> (x) |-(mu)> = lambda_z|phi>
 * (x) |-(mu)>.
 *
 * `tape` must carry '-' at site mu; other sites are arbitrary. Returns the
 * largest amplitude difference between the two sides (XFlip gate).
 */
inline double qcnot_minus_defect(HeadAngle phi, const TapeSpec &tape,
                                 std::size_t mu) {
    if (mu < 1 || mu > tape.size() || tape.site(mu) != TapeSymbol::Minus) {
        throw ConfigError("qcnot_minus_defect needs '-' at the target site");
    }
    auto lhs = make_product_state(phi, tape);
    auto rhs = lhs;
    apply_qcnot(lhs, mu, GateVariant::XFlip);
    apply_head_lambda_z(rhs);
    return max_amplitude_diff(lhs, rhs);
}

} // namespace qtm
