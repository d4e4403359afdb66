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
 * Trajectory export formats.
 *
 * CSV:  header `m,n,p,lambda_x,lambda_y,lambda_z`, one row per step, floats in
 *       shortest round-trip form, m = 0 written with n = p = 0.
 * JSON: {"manifest": {...}, "points": [[m, x, y, z], ...]}.
 * SVG:  scatter of (lambda_y, lambda_z) over [-1.1, 1.1]^2.
 */
#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "engine.hpp"
#include "error.hpp"
#include "gates.hpp"

namespace qtm {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader =
    "m,n,p,lambda_x,lambda_y,lambda_z";

/// Shortest representation that parses back to the same double; negative
/// zero is written as 0.
inline std::string format_double(double v) {
    v += 0.0;
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("malformed number \"" + std::string(text) + "\"");
    }
    return v;
}

inline std::size_t parse_size(std::string_view text) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("malformed integer \"" + std::string(text) + "\"");
    }
    return v;
}

inline void write_csv(std::ostream &os, const Trajectory &traj) {
    os << kCsvHeader << '\n';
    for (const auto &pt : traj.points) {
        const auto idx = StepIndex::from_step(pt.m, traj.tape_size);
        os << pt.m << ',' << idx.n << ',' << idx.p << ','
           << format_double(pt.bloch.x) << ',' << format_double(pt.bloch.y)
           << ',' << format_double(pt.bloch.z) << '\n';
    }
}

/**
 * @brief Parses a trajectory CSV.
 *
 * The tape size is recovered from any row with p >= 2; otherwise it is the
 * smallest M compatible with the largest n seen (or `tape_size_hint` when
 * nonzero).
 */
inline Trajectory read_csv(std::istream &is, std::size_t tape_size_hint = 0) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw ConfigError("trajectory CSV must start with \"" +
                          std::string(kCsvHeader) + "\"");
    }
    Trajectory traj;
    std::size_t inferred = 0;
    std::size_t max_n = 0;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<std::string_view, 6> fields{};
        std::string_view rest{line};
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i + 1 == fields.size())) {
                throw ConfigError("trajectory CSV row needs 6 fields: " +
                                  line);
            }
            fields[i] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{}
                                                   : rest.substr(comma + 1);
        }
        TrajectoryPoint pt;
        pt.m = parse_size(fields[0]);
        const std::size_t n = parse_size(fields[1]);
        const std::size_t p = parse_size(fields[2]);
        pt.bloch = {parse_double(fields[3]), parse_double(fields[4]),
                    parse_double(fields[5])};
        if (pt.m != traj.points.size()) {
            throw ConfigError("trajectory CSV steps must be 0, 1, 2, ...");
        }
        if (p >= 2 && inferred == 0) {
            inferred = (pt.m - n) / (2 * (p - 1));
        }
        max_n = std::max(max_n, n);
        traj.points.push_back(pt);
    }
    if (tape_size_hint != 0) {
        traj.tape_size = tape_size_hint;
    } else if (inferred != 0) {
        traj.tape_size = inferred;
    } else {
        traj.tape_size = std::max<std::size_t>(1, (max_n + 1) / 2);
    }
    return traj;
}

/// Provenance record written next to every output file.
struct RunManifest {
    std::optional<MachineConfig> config;
    std::string command;
    std::vector<std::string> outputs;
    std::string tool_version{kToolVersion};
    nlohmann::json parameters = nlohmann::json::object();
};

inline nlohmann::json to_json(const MachineConfig &c) {
    nlohmann::json j;
    j["tape_size"] = c.tape_size;
    j["alphas"] = c.alphas;
    j["phi0"] = c.phi0.radians;
    j["variant"] = std::string(to_string(c.variant));
    if (const auto *tape = std::get_if<TapeSpec>(&c.initial)) {
        j["initial"] = tape->str();
    } else {
        auto amps = nlohmann::json::array();
        for (const auto &a : std::get<ExplicitAmplitudes>(c.initial)) {
            amps.push_back({a.real(), a.imag()});
        }
        j["initial"] = amps;
    }
    j["steps"] = c.steps;
    return j;
}

inline nlohmann::json to_json(const RunManifest &m) {
    nlohmann::json j;
    j["config"] = m.config ? to_json(*m.config) : nlohmann::json(nullptr);
    j["command"] = m.command;
    j["outputs"] = m.outputs;
    j["tool_version"] = m.tool_version;
    j["parameters"] = m.parameters;
    return j;
}

inline nlohmann::json trajectory_json(const Trajectory &traj,
                                      const RunManifest &manifest) {
    nlohmann::json j;
    j["manifest"] = to_json(manifest);
    auto pts = nlohmann::json::array();
    for (const auto &pt : traj.points) {
        pts.push_back({pt.m, pt.bloch.x + 0.0, pt.bloch.y + 0.0,
                       pt.bloch.z + 0.0});
    }
    j["points"] = std::move(pts);
    return j;
}

struct SvgOptions {
    int canvas{600};
    double point_radius{1.5};
    std::string title;
};

/// Deterministic scatter plot of the head pattern in the y-z plane.
inline void write_svg(std::ostream &os, const Trajectory &traj,
                      const SvgOptions &opt = {}) {
    constexpr double extent = 1.1;
    const double size = opt.canvas;
    auto px = [&](double v) { return (v + extent) / (2 * extent) * size; };
    auto fixed = [](double v) {
        std::array<char, 32> buf{};
        std::snprintf(buf.data(), buf.size(), "%.3f", v);
        return std::string(buf.data());
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.canvas
       << "\" height=\"" << opt.canvas << "\" viewBox=\"0 0 " << opt.canvas
       << ' ' << opt.canvas << "\">\n";
    if (!opt.title.empty()) {
        os << "<title>" << opt.title << "</title>\n";
    }
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<circle cx=\"" << fixed(px(0)) << "\" cy=\"" << fixed(px(0))
       << "\" r=\"" << fixed(size / (2 * extent))
       << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
    os << "<g fill=\"black\">\n";
    for (const auto &pt : traj.points) {
        // lambda_y to the right, lambda_z upwards
        os << "<circle cx=\"" << fixed(px(pt.bloch.y)) << "\" cy=\""
           << fixed(size - px(pt.bloch.z)) << "\" r=\""
           << fixed(opt.point_radius) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

} // namespace qtm
