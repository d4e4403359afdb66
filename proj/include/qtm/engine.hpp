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
 * The iterated machine map. One cycle is 2M steps; step n of a cycle is a
 * head rotation by alpha_mu (n = 2mu - 1) or the controlled gate on tape
 * spin mu (n = 2mu). The head Bloch vector is recorded after every step.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "gates.hpp"
#include "state_vector.hpp"

namespace qtm {

/// Tolerance on |norm^2 - 1| checked once per cycle and on explicit input.
inline constexpr double kNormTolerance = 1e-12;

/// Global step m decomposed as m = n + 2M(p - 1), n in 1..2M, p >= 1.
/// m = 0 maps to the sentinel n = p = 0.
struct StepIndex {
    std::size_t m{0};
    std::size_t n{0};
    std::size_t p{0};

    static constexpr StepIndex from_step(std::size_t m, std::size_t M) {
        if (m == 0) {
            return {};
        }
        const std::size_t cycle = 2 * M;
        return {m, (m - 1) % cycle + 1, (m - 1) / cycle + 1};
    }
};

enum class GateKind { HeadRotation, QCNOT };

struct GateDescriptor {
    GateKind kind;
    std::size_t mu; ///< rotation angle index or QCNOT target, 1-based

    friend constexpr bool operator==(GateDescriptor, GateDescriptor) = default;
};

/// Gate applied at step n (1..2M) of a cycle.
inline GateDescriptor schedule(std::size_t n, std::size_t M) {
    if (n < 1 || n > 2 * M) {
        throw ConfigError("step-in-cycle n=" + std::to_string(n) +
                          " outside 1.." + std::to_string(2 * M));
    }
    if (n % 2 == 1) {
        return {GateKind::HeadRotation, (n + 1) / 2};
    }
    return {GateKind::QCNOT, n / 2};
}

/// Full network amplitudes (length 2^(M+1)) for non-product initial states.
using ExplicitAmplitudes = std::vector<std::complex<double>>;

struct MachineConfig {
    std::size_t tape_size{1};
    std::vector<double> alphas{0.0}; ///< one per tape site
    HeadAngle phi0{};
    GateVariant variant{GateVariant::XFlip};
    std::variant<TapeSpec, ExplicitAmplitudes> initial{TapeSpec::zeros(1)};
    std::size_t steps{0};

    /// Uniform-angle product-state configuration.
    static MachineConfig uniform(std::size_t M, double alpha, double phi0,
                                 TapeSpec tape, std::size_t steps,
                                 GateVariant variant = GateVariant::XFlip) {
        MachineConfig c;
        c.tape_size = M;
        c.alphas.assign(M, alpha);
        c.phi0 = HeadAngle{phi0};
        c.variant = variant;
        c.initial = std::move(tape);
        c.steps = steps;
        return c;
    }

    [[nodiscard]] bool has_uniform_alpha() const {
        return std::ranges::all_of(
            alphas, [&](double a) { return a == alphas.front(); });
    }

    void validate() const {
        if (tape_size == 0) {
            throw ConfigError("tape size must be at least 1");
        }
        if (alphas.size() != tape_size) {
            throw ConfigError("expected " + std::to_string(tape_size) +
                              " rotation angles, got " +
                              std::to_string(alphas.size()));
        }
        for (double a : alphas) {
            if (!std::isfinite(a)) {
                throw ConfigError("rotation angles must be finite");
            }
        }
        if (const auto *tape = std::get_if<TapeSpec>(&initial)) {
            if (tape->size() != tape_size) {
                throw ConfigError("initial tape \"" + tape->str() +
                                  "\" does not match M=" +
                                  std::to_string(tape_size));
            }
        }
    }
};

/// Initial network state |psi_0> of a configuration.
inline StateVector<double> initial_state(const MachineConfig &config) {
    config.validate();
    if (const auto *tape = std::get_if<TapeSpec>(&config.initial)) {
        return make_product_state(config.phi0, *tape);
    }
    StateVector<double> state{config.tape_size,
                              std::get<ExplicitAmplitudes>(config.initial)};
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance) {
        throw ConfigError("explicit initial amplitudes are not normalized");
    }
    return state;
}

struct TrajectoryPoint {
    std::size_t m{0};
    BlochVector bloch{};

    friend bool operator==(const TrajectoryPoint &,
                           const TrajectoryPoint &) = default;
};

/// Head Bloch vectors for m = 0, 1, ..., consecutive.
struct Trajectory {
    std::size_t tape_size{1};
    std::vector<TrajectoryPoint> points;
    std::optional<MachineConfig> config; ///< set when produced from a config

    [[nodiscard]] std::size_t size() const { return points.size(); }
    const BlochVector &operator[](std::size_t m) const {
        return points[m].bloch;
    }
};

/// Applies step n (1..2M) of the cycle to `state`.
template <std::floating_point Real>
void apply_step(StateVector<Real> &state, const MachineConfig &config,
                std::size_t n, std::size_t threads = 1) {
    const auto gate = schedule(n, config.tape_size);
    if (gate.kind == GateKind::HeadRotation) {
        apply_head_rotation(state, RotationAngle{config.alphas[gate.mu - 1]},
                            threads);
    } else {
        apply_qcnot(state, gate.mu, config.variant, threads);
    }
}

/// Applies one full cycle U_2M ... U_1.
template <std::floating_point Real>
void apply_cycle(StateVector<Real> &state, const MachineConfig &config,
                 std::size_t threads = 1) {
    for (std::size_t n = 1; n <= 2 * config.tape_size; ++n) {
        apply_step(state, config, n, threads);
    }
}

/**
 * @brief Runs the full state-vector simulation.
 *
 * Records head_bloch at m = 0..steps. The norm is checked (not re-imposed)
 * after every completed cycle and at the end.
 *
 * @throws NumericError if |norm^2 - 1| exceeds kNormTolerance.
 */
inline Trajectory run(const MachineConfig &config, std::size_t threads = 1) {
    auto state = initial_state(config);
    const std::size_t cycle = 2 * config.tape_size;

    Trajectory traj;
    traj.tape_size = config.tape_size;
    traj.config = config;
    traj.points.reserve(config.steps + 1);
    traj.points.push_back({0, head_bloch(state)});

    auto check_norm = [&](std::size_t m) {
        const double drift = std::abs(state.norm_squared() - 1.0);
        if (drift > kNormTolerance) {
            throw NumericError("norm drift " + std::to_string(drift) +
                               " at step " + std::to_string(m));
        }
    };
    for (std::size_t m = 1; m <= config.steps; ++m) {
        const std::size_t n = (m - 1) % cycle + 1;
        apply_step(state, config, n, threads);
        traj.points.push_back({m, head_bloch(state)});
        if (n == cycle) {
            check_norm(m);
        }
    }
    check_norm(config.steps);
    return traj;
}

/**
 * @brief Convex combination of trajectories, pointwise in m.
 *
 * Models a mixed initial state as a weighted mixture of pure runs. The
 * configurations may differ only in their initial state (phi0 and tape).
 */
inline Trajectory
run_mixed(const std::vector<std::pair<double, MachineConfig>> &components,
          std::size_t threads = 1) {
    if (components.empty()) {
        throw ConfigError("run_mixed needs at least one component");
    }
    double total = 0.0;
    for (const auto &[w, c] : components) {
        if (!(w >= 0.0)) {
            throw ConfigError("mixture weights must be non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("mixture weights sum to " + std::to_string(total) +
                          ", expected 1");
    }
    const auto &ref = components.front().second;
    for (const auto &[w, c] : components) {
        if (c.tape_size != ref.tape_size || c.alphas != ref.alphas ||
            c.variant != ref.variant || c.steps != ref.steps) {
            throw ConfigError(
                "mixture components may differ only in the initial state");
        }
    }

    Trajectory mixed;
    mixed.tape_size = ref.tape_size;
    mixed.points.resize(ref.steps + 1);
    for (std::size_t m = 0; m <= ref.steps; ++m) {
        mixed.points[m].m = m;
    }
    for (const auto &[w, c] : components) {
        const auto part = run(c, threads);
        for (std::size_t m = 0; m <= ref.steps; ++m) {
            mixed.points[m].bloch += w * part.points[m].bloch;
        }
    }
    return mixed;
}

} // namespace qtm
