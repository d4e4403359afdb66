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
 * Primitive trajectories: product initial states whose tape is an eigenstate
 * string of lambda_x. Such a tape never entangles with the head, so the head
 * stays pure on the circle (0, sin phi, -cos phi) and its evolution reduces to
 * one angle:
 *
 *   rotation step     phi -> phi + alpha_mu
 *   gate on '+' site  phi -> phi
 *   gate on '-' site  phi -> -phi       (lambda_z up to a global phase)
 *
 * Any product tape decomposes into 2^M primitives; the head Bloch vector is
 * the |a_j|^2-weighted sum of primitive Bloch vectors.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "state_vector.hpp"

namespace qtm {

/**
 * @brief Sign string over {+,-} selecting the tape state |s_1>...|s_M>.
 *
 * Patterns are ranked lexicographically with '+' < '-': the first site is the
 * most significant bit of the rank.
 */
class TapePattern {
  public:
    static TapePattern parse(std::string_view text) {
        TapePattern p;
        for (char c : text) {
            if (c != '+' && c != '-') {
                throw ConfigError("invalid pattern symbol '" +
                                  std::string(1, c) + "' in \"" +
                                  std::string(text) + "\" (expected + or -)");
            }
            p.minus_.push_back(c == '-');
        }
        if (p.minus_.empty()) {
            throw ConfigError("empty tape pattern");
        }
        return p;
    }

    static TapePattern from_rank(std::size_t rank, std::size_t M) {
        if (M == 0 || M >= 64 || rank >= (std::size_t{1} << M)) {
            throw ConfigError("pattern rank out of range");
        }
        TapePattern p;
        p.minus_.resize(M);
        for (std::size_t mu = 1; mu <= M; ++mu) {
            p.minus_[mu - 1] = ((rank >> (M - mu)) & 1U) != 0;
        }
        return p;
    }

    [[nodiscard]] std::size_t size() const { return minus_.size(); }
    [[nodiscard]] bool is_minus(std::size_t mu) const {
        return minus_.at(mu - 1);
    }
    [[nodiscard]] std::size_t minus_count() const {
        return static_cast<std::size_t>(std::ranges::count(minus_, true));
    }
    [[nodiscard]] std::size_t rank() const {
        std::size_t r = 0;
        for (bool m : minus_) {
            r = (r << 1) | static_cast<std::size_t>(m);
        }
        return r;
    }
    /// Bit mu-1 set when site mu is '-' (tape-index convention).
    [[nodiscard]] std::size_t minus_mask() const {
        std::size_t mask = 0;
        for (std::size_t mu = 1; mu <= minus_.size(); ++mu) {
            if (minus_[mu - 1]) {
                mask |= std::size_t{1} << (mu - 1);
            }
        }
        return mask;
    }
    [[nodiscard]] TapePattern repeated(std::size_t k) const {
        TapePattern p;
        for (std::size_t i = 0; i < k; ++i) {
            p.minus_.insert(p.minus_.end(), minus_.begin(), minus_.end());
        }
        return p;
    }
    [[nodiscard]] std::string str() const {
        std::string s;
        for (bool m : minus_) {
            s.push_back(m ? '-' : '+');
        }
        return s;
    }
    [[nodiscard]] TapeSpec as_tape() const { return TapeSpec::parse(str()); }

    friend bool operator==(const TapePattern &, const TapePattern &) = default;

  private:
    std::vector<bool> minus_;
};

/// Pure head on the y-z circle, Bloch vector (0, sin phi, -cos phi).
struct PrimitiveHead {
    double phi{0.0};

    [[nodiscard]] BlochVector bloch() const { return bloch_from_angle(phi); }
};

/// Advances a primitive head by step n (1..2M) of the cycle.
inline PrimitiveHead primitive_step(PrimitiveHead head,
                                    const TapePattern &pattern, std::size_t n,
                                    RotationAngle alpha) {
    const auto gate = schedule(n, pattern.size());
    if (gate.kind == GateKind::HeadRotation) {
        return {head.phi + alpha.radians};
    }
    return pattern.is_minus(gate.mu) ? PrimitiveHead{-head.phi} : head;
}

/// Head angles phi_0..phi_steps with per-site rotation angles.
inline std::vector<double> primitive_angles(const TapePattern &pattern,
                                            double phi0,
                                            std::span<const double> alphas,
                                            std::size_t steps) {
    const std::size_t M = pattern.size();
    if (alphas.size() != M) {
        throw ConfigError("expected one rotation angle per tape site");
    }
    std::vector<double> phis(steps + 1);
    PrimitiveHead head{phi0};
    phis[0] = head.phi;
    for (std::size_t m = 1; m <= steps; ++m) {
        const std::size_t n = (m - 1) % (2 * M) + 1;
        const auto gate = schedule(n, M);
        head = primitive_step(head, pattern, n,
                              RotationAngle{alphas[gate.mu - 1]});
        phis[m] = head.phi;
    }
    return phis;
}

inline std::vector<double> primitive_angles(const TapePattern &pattern,
                                            double phi0, double alpha,
                                            std::size_t steps) {
    const std::vector<double> alphas(pattern.size(), alpha);
    return primitive_angles(pattern, phi0, alphas, steps);
}

inline Trajectory run_primitive(const TapePattern &pattern, double phi0,
                                std::span<const double> alphas,
                                std::size_t steps) {
    const auto phis = primitive_angles(pattern, phi0, alphas, steps);
    Trajectory traj;
    traj.tape_size = pattern.size();
    traj.points.reserve(phis.size());
    for (std::size_t m = 0; m < phis.size(); ++m) {
        traj.points.push_back({m, bloch_from_angle(phis[m])});
    }
    MachineConfig config;
    config.tape_size = pattern.size();
    config.alphas.assign(alphas.begin(), alphas.end());
    config.phi0 = HeadAngle{phi0};
    config.initial = pattern.as_tape();
    config.steps = steps;
    traj.config = std::move(config);
    return traj;
}

inline Trajectory run_primitive(const TapePattern &pattern, double phi0,
                                double alpha, std::size_t steps) {
    const std::vector<double> alphas(pattern.size(), alpha);
    return run_primitive(pattern, phi0, alphas, steps);
}

/// Affine action phi -> sign * phi + shift of one full cycle.
struct CycleMap {
    int sign{1};
    double shift{0.0};
};

/// Composes the 2M primitive steps of one cycle symbolically.
inline CycleMap cycle_map(const TapePattern &pattern,
                          std::span<const double> alphas) {
    CycleMap map;
    for (std::size_t mu = 1; mu <= pattern.size(); ++mu) {
        map.shift += alphas[mu - 1];
        if (pattern.is_minus(mu)) {
            map.sign = -map.sign;
            map.shift = -map.shift;
        }
    }
    return map;
}

enum class PeriodicityKind { Periodic, Aperiodic };

inline std::string_view to_string(PeriodicityKind k) {
    return k == PeriodicityKind::Periodic ? "periodic" : "aperiodic";
}

struct PeriodicityClass {
    PeriodicityKind kind{PeriodicityKind::Aperiodic};
    std::size_t q{0};             ///< number of '-' sites
    std::vector<std::size_t> gaps; ///< runs of '+' around the '-' sites, q + 1
};

/**
 * @brief Analytic periodicity classification.
 *
 * Writes the pattern as +^{n_0} - +^{n_1} - ... - +^{n_q}. The orbit is
 * periodic with an alpha-independent period iff q is odd, or q is even and
 * n_0 + n_2 + ... + n_q = (M - q) / 2.
 */
inline PeriodicityClass classify(const TapePattern &pattern) {
    PeriodicityClass out;
    out.gaps.push_back(0);
    for (std::size_t mu = 1; mu <= pattern.size(); ++mu) {
        if (pattern.is_minus(mu)) {
            ++out.q;
            out.gaps.push_back(0);
        } else {
            ++out.gaps.back();
        }
    }
    if (out.q % 2 == 1) {
        out.kind = PeriodicityKind::Periodic;
        return out;
    }
    std::size_t even_sum = 0;
    for (std::size_t i = 0; i < out.gaps.size(); i += 2) {
        even_sum += out.gaps[i];
    }
    out.kind = (2 * even_sum == pattern.size() - out.q)
                   ? PeriodicityKind::Periodic
                   : PeriodicityKind::Aperiodic;
    return out;
}

/// Angle equality modulo 2 pi.
inline bool same_angle(double a, double b, double tol = 1e-9) {
    return std::abs(std::remainder(a - b, 2 * std::numbers::pi)) <= tol;
}

/**
 * @brief Smallest step period of a primitive orbit, found by simulation.
 *
 * A candidate s <= 2M * max_cycles is accepted when phi_s matches phi_0 and
 * the following two cycles match as well (angles mod 2 pi, tolerance 1e-9).
 */
inline std::optional<std::size_t>
detect_period_numeric(const TapePattern &pattern, double phi0, double alpha,
                      std::size_t max_cycles) {
    if (max_cycles < 2) {
        throw ConfigError("detect_period_numeric needs max_cycles >= 2");
    }
    const std::size_t cycle = 2 * pattern.size();
    const std::size_t limit = cycle * max_cycles;
    const std::size_t window = 2 * cycle;
    const auto phis = primitive_angles(pattern, phi0, alpha, limit + window);
    for (std::size_t s = 1; s <= limit; ++s) {
        if (!same_angle(phis[s], phis[0])) {
            continue;
        }
        bool match = true;
        for (std::size_t k = 1; k <= window && match; ++k) {
            match = same_angle(phis[s + k], phis[k]);
        }
        if (match) {
            return s;
        }
    }
    return std::nullopt;
}

/// |a_j|^2 over the 2^M patterns, indexed by TapePattern::rank().
struct WeightVector {
    std::size_t tape_size{0};
    std::vector<double> weights;

    void validate(double tol = 1e-12) const {
        if (weights.size() != (std::size_t{1} << tape_size)) {
            throw ConfigError("weight vector must have 2^M entries");
        }
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) {
                throw ConfigError("weights must be non-negative");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > tol) {
            throw ConfigError("weights sum to " + std::to_string(total) +
                              ", expected 1");
        }
    }
};

/// Weights of a product tape: |<s|0>|^2 = |<s|1>|^2 = 1/2, |<s|s'>|^2 = delta.
inline WeightVector decompose(const TapeSpec &tape) {
    const std::size_t M = tape.size();
    WeightVector out{M, std::vector<double>(std::size_t{1} << M)};
    for (std::size_t rank = 0; rank < out.weights.size(); ++rank) {
        const auto pattern = TapePattern::from_rank(rank, M);
        double w = 1.0;
        for (std::size_t mu = 1; mu <= M && w != 0.0; ++mu) {
            const bool minus = pattern.is_minus(mu);
            switch (tape.site(mu)) {
            case TapeSymbol::Zero:
            case TapeSymbol::One:
                w *= 0.5;
                break;
            case TapeSymbol::Plus:
                w *= minus ? 0.0 : 1.0;
                break;
            case TapeSymbol::Minus:
                w *= minus ? 1.0 : 0.0;
                break;
            }
        }
        out.weights[rank] = w;
    }
    return out;
}

/**
 * @brief Projection weights |<P_j|tape>|^2 of an arbitrary tape state.
 *
 * `tape_amps` has 2^M entries with site mu at bit mu-1. The overlaps are a
 * Walsh-Hadamard transform of the amplitudes.
 */
inline WeightVector
decompose_amplitudes(std::size_t M,
                     std::span<const std::complex<double>> tape_amps) {
    const std::size_t dim = std::size_t{1} << M;
    if (tape_amps.size() != dim) {
        throw ConfigError("expected 2^M tape amplitudes");
    }
    std::vector<std::complex<double>> h(tape_amps.begin(), tape_amps.end());
    for (std::size_t len = 1; len < dim; len <<= 1) {
        for (std::size_t i = 0; i < dim; i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                const auto u = h[j];
                const auto v = h[j + len];
                h[j] = u + v;
                h[j + len] = u - v;
            }
        }
    }
    const double scale = std::ldexp(1.0, -static_cast<int>(M));
    WeightVector out{M, std::vector<double>(dim)};
    for (std::size_t rank = 0; rank < dim; ++rank) {
        const auto mask = TapePattern::from_rank(rank, M).minus_mask();
        out.weights[rank] = std::norm(h[mask]) * scale;
    }
    out.validate();
    return out;
}

/// Keeps only periodic (or aperiodic) patterns and renormalizes.
inline WeightVector restrict_weights(const WeightVector &weights,
                                     PeriodicityKind keep) {
    WeightVector out = weights;
    double total = 0.0;
    for (std::size_t rank = 0; rank < out.weights.size(); ++rank) {
        const auto kind =
            classify(TapePattern::from_rank(rank, out.tape_size)).kind;
        if (kind != keep) {
            out.weights[rank] = 0.0;
        }
        total += out.weights[rank];
    }
    if (total <= 0.0) {
        throw ConfigError("no weight left on " + std::string(to_string(keep)) +
                          " patterns");
    }
    for (double &w : out.weights) {
        w /= total;
    }
    return out;
}

/// sum_j w_j * primitive_j, pointwise in m.
inline Trajectory superpose(const WeightVector &weights, double phi0,
                            std::span<const double> alphas,
                            std::size_t steps) {
    weights.validate();
    const std::size_t M = weights.tape_size;
    Trajectory traj;
    traj.tape_size = M;
    traj.points.resize(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        traj.points[m].m = m;
    }
    for (std::size_t rank = 0; rank < weights.weights.size(); ++rank) {
        const double w = weights.weights[rank];
        if (w == 0.0) {
            continue;
        }
        const auto phis = primitive_angles(TapePattern::from_rank(rank, M),
                                           phi0, alphas, steps);
        for (std::size_t m = 0; m <= steps; ++m) {
            traj.points[m].bloch += w * bloch_from_angle(phis[m]);
        }
    }
    return traj;
}

inline Trajectory superpose(const WeightVector &weights, double phi0,
                            double alpha, std::size_t steps) {
    const std::vector<double> alphas(weights.tape_size, alpha);
    return superpose(weights, phi0, alphas, steps);
}

} // namespace qtm
