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
 * Post-processing of head trajectories in the (lambda_y, lambda_z) plane:
 * circle invariants, visited point sets and the discrete Fourier spectrum.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "engine.hpp"
#include "error.hpp"
#include "state_vector.hpp"

namespace qtm {

struct Point2 {
    double y{0.0};
    double z{0.0};

    friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline Point2 project_yz(const BlochVector &b) { return {b.y, b.z}; }

inline double distance(const Point2 &a, const Point2 &b) {
    return std::hypot(a.y - b.y, a.z - b.z);
}

/// Largest componentwise difference over the common steps of two runs.
inline double max_trajectory_diff(const Trajectory &a, const Trajectory &b) {
    if (a.size() != b.size()) {
        throw ConfigError("trajectories differ in length");
    }
    double worst = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        worst = std::max(worst, max_abs_diff(a[m], b[m]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Circle invariants

struct Circle {
    Point2 center;
    double radius{0.0};
};

/// Circles sharing one radius; every trajectory point is assigned to one.
struct CircleSet {
    double radius{0.0};
    std::vector<Point2> centers;      ///< distinct centers
    std::size_t multiplicity{0};      ///< circles before merging coincident ones
    std::vector<std::size_t> assignment; ///< per trajectory point, into centers
    double max_residual{0.0};

    /// True when at least two of the initial circles coincided.
    [[nodiscard]] bool has_coincident() const {
        return multiplicity > centers.size();
    }
};

class CircleFitError : public NumericError {
  public:
    /// (step m, residual), worst first.
    using Offenders = std::vector<std::pair<std::size_t, double>>;

    CircleFitError(const std::string &what, Offenders worst)
        : NumericError(what), worst_{std::move(worst)} {}

    [[nodiscard]] const Offenders &worst() const { return worst_; }

  private:
    Offenders worst_;
};

namespace detail {

inline Point2 centroid(std::span<const Point2> pts) {
    Point2 c;
    for (const auto &p : pts) {
        c.y += p.y;
        c.z += p.z;
    }
    const auto n = static_cast<double>(pts.size());
    return {c.y / n, c.z / n};
}

/// Algebraic (Kasa) fit on centroid-shifted data; radius 0 for a point cloud
/// of extent <= tol.
inline Circle fit_circle(std::span<const Point2> pts, double tol) {
    const Point2 mean = centroid(pts);
    double extent = 0.0;
    for (const auto &p : pts) {
        extent = std::max(extent, distance(p, mean));
    }
    if (extent <= tol) {
        return {mean, 0.0};
    }
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = pts[i].y - mean.y;
        const double v = pts[i].z - mean.z;
        A(i, 0) = u;
        A(i, 1) = v;
        A(i, 2) = 1.0;
        b(i) = -(u * u + v * v);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < 3) {
        throw CircleFitError("points do not determine a circle", {});
    }
    const Eigen::Vector3d sol = qr.solve(b);
    const double cu = -sol(0) / 2;
    const double cv = -sol(1) / 2;
    const double r2 = cu * cu + cv * cv - sol(2);
    return {{mean.y + cu, mean.z + cv}, std::sqrt(std::max(r2, 0.0))};
}

/// Gauss-Newton refinement of the center for a prescribed radius.
inline Point2 refit_center(std::span<const Point2> pts, Point2 center,
                           double radius) {
    if (radius == 0.0) {
        return centroid(pts);
    }
    for (int iter = 0; iter < 50; ++iter) {
        Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
        Eigen::Vector2d Jtf = Eigen::Vector2d::Zero();
        for (const auto &p : pts) {
            const double d = distance(p, center);
            if (d == 0.0) {
                continue;
            }
            const Eigen::Vector2d J{-(p.y - center.y) / d,
                                    -(p.z - center.z) / d};
            JtJ += J * J.transpose();
            Jtf += J * (d - radius);
        }
        const Eigen::Vector2d step = JtJ.ldlt().solve(-Jtf);
        if (!step.allFinite()) {
            break;
        }
        center.y += step(0);
        center.z += step(1);
        if (step.norm() < 1e-15) {
            break;
        }
    }
    return center;
}

} // namespace detail

/**
 * @brief Fits the circle invariants of an M = 1, 2 head trajectory.
 *
 * Points are first grouped by step index modulo 4M and each group gets an
 * algebraic circle fit. Groups whose circles coincide within `tol` are
 * merged and refit until nothing merges. The shared radius is the mean of the
 * group radii; centers are then refit at that radius.
 *
 * @throws ConfigError if a point leaves the lambda_x = 0 plane (1e-9).
 * @throws CircleFitError carrying the worst offenders when some point lies
 * farther than `tol` from its circle or more than `max_circles` remain.
 */
inline CircleSet fit_invariant_circles(const Trajectory &traj,
                                       std::size_t max_circles,
                                       double tol = 1e-6) {
    if (traj.points.empty()) {
        throw ConfigError("empty trajectory");
    }
    std::vector<Point2> pts;
    pts.reserve(traj.size());
    for (const auto &pt : traj.points) {
        if (std::abs(pt.bloch.x) > 1e-9) {
            throw ConfigError("circle fit needs lambda_x = 0 (step " +
                              std::to_string(pt.m) + ")");
        }
        pts.push_back(project_yz(pt.bloch));
    }

    const std::size_t period = 4 * traj.tape_size;
    std::vector<std::vector<std::size_t>> groups(period);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        groups[traj.points[i].m % period].push_back(i);
    }
    std::erase_if(groups, [](const auto &g) { return g.empty(); });

    auto fit_group = [&](const std::vector<std::size_t> &idx) {
        std::vector<Point2> sub;
        sub.reserve(idx.size());
        for (auto i : idx) {
            sub.push_back(pts[i]);
        }
        return std::pair{detail::fit_circle(sub, tol), std::move(sub)};
    };

    std::vector<Circle> circles;
    for (const auto &g : groups) {
        circles.push_back(fit_group(g).first);
    }
    CircleSet out;
    out.multiplicity = circles.size();

    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t a = 0; a < circles.size() && !merged; ++a) {
            for (std::size_t b = a + 1; b < circles.size() && !merged; ++b) {
                if (distance(circles[a].center, circles[b].center) <= tol &&
                    std::abs(circles[a].radius - circles[b].radius) <= tol) {
                    groups[a].insert(groups[a].end(), groups[b].begin(),
                                     groups[b].end());
                    groups.erase(groups.begin() + static_cast<long>(b));
                    circles.erase(circles.begin() + static_cast<long>(b));
                    circles[a] = fit_group(groups[a]).first;
                    merged = true;
                }
            }
        }
    }

    double rsum = 0.0;
    for (const auto &c : circles) {
        rsum += c.radius;
    }
    out.radius = rsum / static_cast<double>(circles.size());
    out.assignment.assign(traj.size(), 0);
    CircleFitError::Offenders offenders;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto sub = fit_group(groups[g]).second;
        const Point2 c =
            detail::refit_center(sub, circles[g].center, out.radius);
        out.centers.push_back(c);
        for (auto i : groups[g]) {
            out.assignment[i] = g;
            const double res = std::abs(distance(pts[i], c) - out.radius);
            out.max_residual = std::max(out.max_residual, res);
            if (res > tol) {
                offenders.emplace_back(traj.points[i].m, res);
            }
        }
    }
    if (!offenders.empty()) {
        std::ranges::sort(offenders, [](const auto &a, const auto &b) {
            return a.second > b.second;
        });
        if (offenders.size() > 5) {
            offenders.resize(5);
        }
        std::string what =
            "circle fit residual " + std::to_string(offenders.front().second) +
            " exceeds tolerance at step " +
            std::to_string(offenders.front().first);
        throw CircleFitError(what, std::move(offenders));
    }
    if (out.centers.size() > max_circles) {
        throw CircleFitError(std::to_string(out.centers.size()) +
                                 " distinct circles exceed the limit of " +
                                 std::to_string(max_circles),
                             {});
    }
    return out;
}

/// min_j | |p - c_j| - r |.
inline double invariant_residual(const CircleSet &circles,
                                 const BlochVector &point) {
    if (std::abs(point.x) > 1e-9) {
        throw ConfigError("invariant residual needs lambda_x = 0");
    }
    const Point2 p = project_yz(point);
    double best = std::numeric_limits<double>::infinity();
    for (const auto &c : circles.centers) {
        best = std::min(best, std::abs(distance(p, c) - circles.radius));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Spectrum

/// Magnitude spectra of lambda_y and lambda_z at frequencies k/N (cycles per
/// step), k = 0..N-1.
struct Spectrum {
    std::vector<double> frequencies;
    std::vector<double> magnitude_y;
    std::vector<double> magnitude_z;
};

/// Plain DFT scaled by 1/sqrt(N), so sum |X_k|^2 = sum |x_n|^2.
inline std::vector<std::complex<double>> dft_unitary(
    std::span<const double> signal) {
    const std::size_t N = signal.size();
    std::vector<std::complex<double>> twiddle(N);
    for (std::size_t k = 0; k < N; ++k) {
        twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi *
                                         static_cast<double>(k) /
                                         static_cast<double>(N));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<std::complex<double>> out(N);
    for (std::size_t k = 0; k < N; ++k) {
        std::complex<double> acc{0.0};
        std::size_t idx = 0;
        for (std::size_t n = 0; n < N; ++n) {
            acc += signal[n] * twiddle[idx];
            idx += k;
            if (idx >= N) {
                idx -= N;
            }
        }
        out[k] = acc * scale;
    }
    return out;
}

inline Spectrum spectrum(const Trajectory &traj) {
    if (traj.size() < 2) {
        throw ConfigError("spectrum needs at least two points");
    }
    const std::size_t N = traj.size();
    std::vector<double> ys(N);
    std::vector<double> zs(N);
    for (std::size_t i = 0; i < N; ++i) {
        ys[i] = traj.points[i].bloch.y;
        zs[i] = traj.points[i].bloch.z;
    }
    Spectrum s;
    s.frequencies.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        s.frequencies[k] = static_cast<double>(k) / static_cast<double>(N);
    }
    for (const auto &c : dft_unitary(ys)) {
        s.magnitude_y.push_back(std::abs(c));
    }
    for (const auto &c : dft_unitary(zs)) {
        s.magnitude_z.push_back(std::abs(c));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Point sets

/// Distinct visited (lambda_y, lambda_z) points with visit counts.
struct PointSet {
    std::vector<Point2> points;
    std::vector<std::size_t> counts;

    [[nodiscard]] std::size_t size() const { return points.size(); }

    /// Index of a retained point within tol of p, or size().
    [[nodiscard]] std::size_t find(const Point2 &p, double tol) const {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (distance(points[i], p) <= tol) {
                return i;
            }
        }
        return points.size();
    }
};

/// Greedy dedup in visit order.
inline PointSet distinct_points(const Trajectory &traj, double tol = 1e-9) {
    if (!(tol > 0.0)) {
        throw ConfigError("dedup tolerance must be positive");
    }
    PointSet set;
    for (const auto &pt : traj.points) {
        const Point2 p = project_yz(pt.bloch);
        const std::size_t i = set.find(p, tol);
        if (i == set.size()) {
            set.points.push_back(p);
            set.counts.push_back(1);
        } else {
            ++set.counts[i];
        }
    }
    return set;
}

/// Every point of `inner` lies within tol of some point of `outer`.
inline bool is_subset(const PointSet &inner, const PointSet &outer,
                      double tol) {
    return std::ranges::all_of(inner.points, [&](const Point2 &p) {
        return outer.find(p, tol) != outer.size();
    });
}

} // namespace qtm
