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
 * Closed-form head evolution for |0>_S |0...0> with uniform alpha.
 *
 * With Y_m = Y_{m,M}, Z_m = Z_{m,M}, seeds Y_0 = 0, Y_1 = sin(alpha),
 * Z_0 = -1, Z_1 = -cos(alpha), base Z_{m,0} = -1, and for step
 * m = n + 2M(p-1), m' = m - 4p + 2:
 *
 *   n odd:            Y_m = -Y_1 Z_{m-1} - Z_1 Y_{m-1}
 *                     Z_m = -Z_1 Z_{m-1} + Y_1 Y_{m-1}
 *   n even, n != 2M:  Y_{m,M} = Y_{m-1,M} + Y_1 Z_{m',M-2}
 *   n = 2M, p odd:    Y_{m,M} = Y_{m-1,M} - Y_1 (-Z_1)^{M-1}
 *   n = 2M, p even:   Y_{m,M} = Y_{m-1,M}
 *   n even:           Z_m = -Z_1 Z_{m-2} + Y_1 Y_{m-2}
 *
 * The head Bloch vector is (0, Y_{m,M}, Z_{m,M}).
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "primitives.hpp"
#include "state_vector.hpp"

namespace qtm {

/**
 * @brief Memoized evaluator of Y_{m,M}, Z_{m,M}.
 *
 * Each tape size keeps its own table, extended on demand in increasing m.
 * The even-step rule reads level M-2 at m' < m, so filling level M up to m
 * touches levels M-2, M-4, ... and costs O(m M) in total.
 */
class HeadRecursion {
  public:
    struct Entry {
        double y;
        double z;
    };

    explicit HeadRecursion(RotationAngle alpha)
        : alpha_{alpha.radians}, y1_{std::sin(alpha.radians)},
          z1_{-std::cos(alpha.radians)} {}

    [[nodiscard]] double alpha() const { return alpha_; }

    Entry at(std::size_t m, std::size_t M) {
        if (M == 0) {
            throw ConfigError("recursion needs tape size M >= 1");
        }
        extend(M, m);
        return memo_[M][m];
    }

    BlochVector head_at(std::size_t m, std::size_t M) {
        const auto e = at(m, M);
        return {0.0, e.y, e.z};
    }

  private:
    double z_at(std::size_t m, std::size_t M) {
        if (M == 0) {
            return -1.0;
        }
        extend(M, m);
        return memo_[M][m].z;
    }

    // std::map keeps node references stable while other levels are filled.
    void extend(std::size_t M, std::size_t m) {
        auto &table = memo_[M];
        if (table.empty()) {
            table.push_back({0.0, -1.0});
            table.push_back({y1_, z1_});
        }
        while (table.size() <= m) {
            const std::size_t k = table.size();
            const auto step = StepIndex::from_step(k, M);
            Entry e{};
            if (step.n % 2 == 1) {
                const Entry prev = table[k - 1];
                e.y = -y1_ * prev.z - z1_ * prev.y;
                e.z = -z1_ * prev.z + y1_ * prev.y;
            } else {
                const Entry prev = table[k - 1];
                const Entry prev2 = table[k - 2];
                e.z = -z1_ * prev2.z + y1_ * prev2.y;
                if (step.n != 2 * M) {
                    if (k + 2 < 4 * step.p) {
                        throw NumericError("recursion index m' < 0 at m=" +
                                           std::to_string(k));
                    }
                    const std::size_t shifted = k + 2 - 4 * step.p;
                    const double z_inner = z_at(shifted, M - 2);
                    e.y = prev.y + y1_ * z_inner;
                } else if (step.p % 2 == 1) {
                    e.y = prev.y -
                          y1_ * std::pow(-z1_, static_cast<double>(M - 1));
                } else {
                    e.y = prev.y;
                }
            }
            if (e.y * e.y + e.z * e.z > 1.0 + 1e-9) {
                throw NumericError("recursion left the Bloch ball at m=" +
                                   std::to_string(k) +
                                   ", M=" + std::to_string(M));
            }
            table.push_back(e);
        }
    }

    double alpha_;
    double y1_;
    double z1_;
    std::map<std::size_t, std::vector<Entry>> memo_;
};

/**
 * @brief Trajectory of a configuration via the recursion.
 *
 * Supported: uniform alpha, XFlip gate, computational tape (every 0/1 tape
 * has the same primitive weights as |0...0>), and a head starting in |0>
 * (phi0 = 0) or |1> (phi0 = pi, which negates the trajectory).
 *
 * @throws UnsupportedError for any other configuration.
 */
inline Trajectory recursion_trajectory(const MachineConfig &config) {
    config.validate();
    if (!config.has_uniform_alpha()) {
        throw UnsupportedError("recursion requires uniform rotation angles");
    }
    if (config.variant != GateVariant::XFlip) {
        throw UnsupportedError("recursion is only valid for the x gate");
    }
    const auto *tape = std::get_if<TapeSpec>(&config.initial);
    if (tape == nullptr || !tape->is_computational()) {
        throw UnsupportedError(
            "recursion requires a computational (0/1) initial tape");
    }
    double sign = 0.0;
    if (same_angle(config.phi0.radians, 0.0, 1e-12)) {
        sign = 1.0;
    } else if (same_angle(config.phi0.radians, std::numbers::pi, 1e-12)) {
        sign = -1.0;
    } else {
        throw UnsupportedError("recursion requires the head in |0> or |1> "
                               "(phi0 = 0 or pi)");
    }

    HeadRecursion rec{RotationAngle{config.alphas.front()}};
    Trajectory traj;
    traj.tape_size = config.tape_size;
    traj.config = config;
    traj.points.reserve(config.steps + 1);
    for (std::size_t m = 0; m <= config.steps; ++m) {
        traj.points.push_back({m, sign * rec.head_at(m, config.tape_size)});
    }
    // sign * 0.0 may produce -0.0; keep x an exact zero.
    for (auto &pt : traj.points) {
        pt.bloch.x = 0.0;
    }
    return traj;
}

/// The two M = 1 primitives.
enum class SingleSiteColumn {
    Aperiodic, ///< tape |+>
    Periodic,  ///< tape |->
};

/**
 * @brief Closed-form M = 1 primitive head.
 *
 * Aperiodic: the angle is phi0 + k alpha with k = ceil(m/2).
 * Periodic: repeats phi0, phi0 + alpha, -(phi0 + alpha), -phi0 every 4 steps.
 */
inline BlochVector single_site_primitive(SingleSiteColumn column,
                                         std::size_t m, double phi0,
                                         double alpha) {
    if (column == SingleSiteColumn::Aperiodic) {
        const auto k = static_cast<double>((m + 1) / 2);
        return bloch_from_angle(phi0 + k * alpha);
    }
    switch (m % 4) {
    case 0:
        return bloch_from_angle(phi0);
    case 1:
        return bloch_from_angle(phi0 + alpha);
    case 2:
        return bloch_from_angle(-(phi0 + alpha));
    default:
        return bloch_from_angle(-phi0);
    }
}

} // namespace qtm
