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
 * Command-line front end. Kept in a header so tests can drive it in-process.
 *
 * Exit codes: 0 success, 2 usage or configuration error (including requests
 * a computation path cannot serve), 3 numeric validation failure, 1 other.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "analysis.hpp"
#include "angle_expr.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "primitives.hpp"
#include "recursion.hpp"
#include "trajectory_io.hpp"

namespace qtm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitNumeric = 3,
};

namespace detail {

inline std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) {
        parts.push_back(cur);
    }
    return parts;
}

/// Options shared by every command that builds a machine configuration.
struct MachineOptions {
    std::size_t tape_size{0};
    std::string alpha{"pi/sqrt(3)"};
    std::string phi0{"0"};
    std::size_t steps{3000};
    std::string initial{"zeros"};
    std::string variant{"x"};
    CLI::Option *phi0_opt{nullptr};

    void add(CLI::App &app) {
        app.add_option("--tape-size,-M", tape_size, "Number of tape spins M");
        app.add_option("--alpha", alpha,
                       "Rotation angle expression, or M comma-separated ones")
            ->capture_default_str();
        phi0_opt = app.add_option("--phi0", phi0, "Initial head angle")
                       ->capture_default_str();
        app.add_option("--steps", steps, "Total number of steps")
            ->capture_default_str();
        app.add_option("--initial", initial,
                       "zeros, ones, a tape string over {0,1,+,-} of length "
                       "M, or a head+tape bit string of length M+1")
            ->capture_default_str();
        app.add_option("--variant", variant, "Controlled gate: x or iy")
            ->capture_default_str();
    }

    [[nodiscard]] std::vector<double> alphas(std::size_t M) const {
        std::vector<double> out;
        for (const auto &part : split(alpha, ',')) {
            out.push_back(parse_angle(part));
        }
        if (out.size() == 1) {
            out.assign(M, out.front());
        }
        if (out.size() != M) {
            throw ConfigError("--alpha needs 1 or M=" + std::to_string(M) +
                              " values");
        }
        return out;
    }

    [[nodiscard]] MachineConfig build() const {
        if (tape_size == 0) {
            throw ConfigError("--tape-size is required and must be >= 1");
        }
        MachineConfig c;
        c.tape_size = tape_size;
        c.alphas = alphas(tape_size);
        c.phi0 = HeadAngle{parse_angle(phi0)};
        c.variant = parse_gate_variant(variant);
        c.steps = steps;
        if (initial == "zeros") {
            c.initial = TapeSpec::zeros(tape_size);
        } else if (initial == "ones") {
            c.initial = TapeSpec::ones(tape_size);
        } else if (initial.size() == tape_size + 1) {
            const char head = initial.front();
            if (head != '0' && head != '1') {
                throw ConfigError("head symbol of --initial must be 0 or 1");
            }
            if (phi0_opt != nullptr && phi0_opt->count() > 0) {
                throw ConfigError(
                    "--phi0 conflicts with a head bit in --initial");
            }
            c.phi0 = HeadAngle{head == '1' ? std::numbers::pi : 0.0};
            c.initial = TapeSpec::parse(initial.substr(1));
        } else {
            c.initial = TapeSpec::parse(initial);
        }
        c.validate();
        return c;
    }
};

struct OutputOptions {
    std::string out{"-"};
    std::string format;

    void add(CLI::App &app, std::string default_format,
             std::vector<std::string> formats) {
        format = std::move(default_format);
        app.add_option("--out,-o", out, "Output path, - for stdout")
            ->capture_default_str();
        app.add_option("--format", format, "Output format")
            ->check(CLI::IsMember(formats))
            ->capture_default_str();
    }

    [[nodiscard]] bool to_file() const { return out != "-"; }
};

struct Context {
    std::ostream &out;
    std::ostream &err;
    std::string command;
};

/// Writes via `body` to the requested path (or stdout) and, for non-JSON
/// files, a `<out>.manifest.json` sidecar.
inline void emit(Context &ctx, const OutputOptions &opt, RunManifest manifest,
                 const std::function<void(std::ostream &)> &body) {
    if (!opt.to_file()) {
        body(ctx.out);
        return;
    }
    if (std::ranges::find(manifest.outputs, opt.out) ==
        manifest.outputs.end()) {
        manifest.outputs.push_back(opt.out);
    }
    {
        std::ofstream os(opt.out, std::ios::binary);
        if (!os) {
            throw std::runtime_error("cannot open " + opt.out);
        }
        body(os);
    }
    if (opt.format != "json") {
        const std::string side = opt.out + ".manifest.json";
        manifest.outputs.push_back(side);
        std::ofstream ms(side, std::ios::binary);
        ms << to_json(manifest).dump(2) << '\n';
    }
}

inline RunManifest make_manifest(const Context &ctx,
                                 std::optional<MachineConfig> config) {
    RunManifest m;
    m.config = std::move(config);
    m.command = ctx.command;
    return m;
}

inline void write_trajectory(Context &ctx, const OutputOptions &opt,
                             const Trajectory &traj, RunManifest manifest) {
    if (opt.format == "json") {
        if (opt.to_file()) {
            manifest.outputs.push_back(opt.out);
        }
        const auto doc = trajectory_json(traj, manifest);
        emit(ctx, opt, manifest,
             [&](std::ostream &os) { os << doc.dump() << '\n'; });
    } else if (opt.format == "svg") {
        emit(ctx, opt, manifest, [&](std::ostream &os) {
            write_svg(os, traj, SvgOptions{.title = "M=" +
                                                    std::to_string(
                                                        traj.tape_size)});
        });
    } else {
        emit(ctx, opt, manifest,
             [&](std::ostream &os) { write_csv(os, traj); });
    }
}

/// Trajectory by the selected computation path.
inline Trajectory compute(const MachineConfig &config,
                          const std::string &engine, std::size_t threads) {
    if (engine == "statevector") {
        return run(config, threads);
    }
    if (engine == "recursion") {
        return recursion_trajectory(config);
    }
    // primitives
    if (config.variant != GateVariant::XFlip) {
        throw UnsupportedError(
            "the primitive decomposition is only valid for the x gate");
    }
    const auto &tape = std::get<TapeSpec>(config.initial);
    auto traj = superpose(decompose(tape), config.phi0.radians, config.alphas,
                          config.steps);
    traj.config = config;
    return traj;
}

/// --in FILE | --pattern P | machine options with --engine.
struct TrajectorySource {
    MachineOptions machine;
    std::string engine{"statevector"};
    std::string pattern;
    std::string input;

    void add(CLI::App &app) {
        machine.add(app);
        app.add_option("--engine", engine, "Computation path")
            ->check(CLI::IsMember({"statevector", "recursion", "primitives"}))
            ->capture_default_str();
        app.add_option("--pattern", pattern,
                       "Use the primitive with this +/- tape pattern");
        app.add_option("--in", input, "Read a trajectory CSV instead");
    }

    Trajectory resolve(std::size_t threads, std::optional<MachineConfig> &cfg) {
        if (!input.empty()) {
            std::ifstream is(input);
            if (!is) {
                throw ConfigError("cannot read " + input);
            }
            return read_csv(is, machine.tape_size);
        }
        if (!pattern.empty()) {
            const auto p = TapePattern::parse(pattern);
            if (machine.tape_size != 0 && machine.tape_size != p.size()) {
                throw ConfigError("--pattern length differs from --tape-size");
            }
            auto traj = run_primitive(p, parse_angle(machine.phi0),
                                      machine.alphas(p.size()), machine.steps);
            cfg = traj.config;
            return traj;
        }
        cfg = machine.build();
        return compute(*cfg, engine, threads);
    }
};

} // namespace detail

/**
 * @brief Parses arguments and runs one subcommand.
 *
 * Normal output goes to `out` when no --out path is given; diagnostics go to
 * `err`.
 */
inline int run_cli(int argc, const char *const *argv, std::ostream &out,
                   std::ostream &err) {
    using namespace detail;

    CLI::App app{"Turing-head pattern simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    std::size_t threads = default_thread_count();
    app.add_option("--threads", threads, "Worker threads (QTM_THREADS caps "
                                         "the default)");

    // simulate
    auto *sim = app.add_subcommand("simulate", "Run the machine");
    MachineOptions sim_machine;
    sim_machine.add(*sim);
    std::string sim_engine{"statevector"};
    sim->add_option("--engine", sim_engine, "Computation path")
        ->check(CLI::IsMember({"statevector", "recursion", "primitives"}))
        ->capture_default_str();
    OutputOptions sim_out;
    sim_out.add(*sim, "csv", {"csv", "json", "svg"});

    // primitives
    auto *prim = app.add_subcommand(
        "primitives", "Primitive trajectory, or a weighted superposition");
    std::string prim_pattern;
    std::string prim_subset{"all"};
    MachineOptions prim_machine;
    prim_machine.add(*prim);
    prim->add_option("--pattern", prim_pattern, "Tape pattern over {+,-}");
    prim->add_option("--subset", prim_subset,
                     "With --initial: superpose all, periodic or aperiodic "
                     "primitives (renormalized)")
        ->check(CLI::IsMember({"all", "periodic", "aperiodic"}))
        ->capture_default_str();
    OutputOptions prim_out;
    prim_out.add(*prim, "csv", {"csv", "json", "svg"});

    // classify
    auto *cls = app.add_subcommand("classify", "Periodicity of primitives");
    std::size_t cls_tape = 0;
    std::string cls_pattern;
    bool cls_all = false;
    std::string cls_alpha{"pi/sqrt(3)"};
    std::string cls_phi0{"0"};
    std::size_t cls_cycles = 1000;
    cls->add_option("--tape-size,-M", cls_tape, "Number of tape spins M");
    cls->add_option("--pattern", cls_pattern, "Tape pattern over {+,-}");
    cls->add_flag("--all", cls_all, "Sweep all 2^M patterns");
    cls->add_option("--alpha", cls_alpha, "Angle for numeric period search")
        ->capture_default_str();
    cls->add_option("--phi0", cls_phi0, "Initial head angle")
        ->capture_default_str();
    cls->add_option("--max-cycles", cls_cycles, "Cycles searched")
        ->capture_default_str();
    OutputOptions cls_out;
    cls_out.add(*cls, "csv", {"csv", "json"});

    // decompose
    auto *dec =
        app.add_subcommand("decompose", "Primitive weights of a tape state");
    std::size_t dec_tape = 0;
    std::string dec_initial{"zeros"};
    std::string dec_subset{"all"};
    dec->add_option("--tape-size,-M", dec_tape, "Number of tape spins M");
    dec->add_option("--initial", dec_initial, "zeros, ones or a tape string")
        ->capture_default_str();
    dec->add_option("--subset", dec_subset, "all, periodic or aperiodic")
        ->check(CLI::IsMember({"all", "periodic", "aperiodic"}))
        ->capture_default_str();
    OutputOptions dec_out;
    dec_out.add(*dec, "csv", {"csv", "json"});

    // spectrum
    auto *spec = app.add_subcommand("spectrum", "DFT magnitude spectrum");
    TrajectorySource spec_src;
    spec_src.add(*spec);
    OutputOptions spec_out;
    spec_out.add(*spec, "csv", {"csv", "json"});

    // invariants
    auto *inv = app.add_subcommand("invariants", "Fit circle invariants");
    TrajectorySource inv_src;
    inv_src.add(*inv);
    std::size_t inv_max = 0;
    double inv_tol = 1e-6;
    inv->add_option("--max-circles", inv_max, "Default 2^(M+1)");
    inv->add_option("--tolerance", inv_tol, "Residual tolerance")
        ->capture_default_str();
    OutputOptions inv_out;
    inv_out.add(*inv, "json", {"json", "csv"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string command;
    for (int i = 0; i < argc; ++i) {
        command += (i == 0 ? "" : " ");
        command += argv[i];
    }
    Context ctx{out, err, command};
    threads = std::max<std::size_t>(threads, 1);

    try {
        if (*sim) {
            const auto config = sim_machine.build();
            const auto traj = compute(config, sim_engine, threads);
            auto manifest = make_manifest(ctx, config);
            manifest.parameters["engine"] = sim_engine;
            write_trajectory(ctx, sim_out, traj, manifest);
        } else if (*prim) {
            Trajectory traj;
            RunManifest manifest;
            if (!prim_pattern.empty()) {
                const auto p = TapePattern::parse(prim_pattern);
                if (prim_machine.tape_size != 0 &&
                    prim_machine.tape_size != p.size()) {
                    throw ConfigError(
                        "--pattern length differs from --tape-size");
                }
                traj = run_primitive(p, parse_angle(prim_machine.phi0),
                                     prim_machine.alphas(p.size()),
                                     prim_machine.steps);
                manifest = make_manifest(ctx, traj.config);
                manifest.parameters["pattern"] = p.str();
                manifest.parameters["kind"] =
                    std::string(to_string(classify(p).kind));
            } else {
                const auto config = prim_machine.build();
                const auto *tape = std::get_if<TapeSpec>(&config.initial);
                auto weights = decompose(*tape);
                if (prim_subset != "all") {
                    weights = restrict_weights(
                        weights, prim_subset == "periodic"
                                     ? PeriodicityKind::Periodic
                                     : PeriodicityKind::Aperiodic);
                }
                traj = superpose(weights, config.phi0.radians, config.alphas,
                                 config.steps);
                manifest = make_manifest(ctx, config);
                manifest.parameters["subset"] = prim_subset;
            }
            write_trajectory(ctx, prim_out, traj, manifest);
        } else if (*cls) {
            std::vector<TapePattern> patterns;
            if (cls_all == !cls_pattern.empty()) {
                throw ConfigError("classify needs exactly one of --pattern "
                                  "or --all");
            }
            if (cls_all) {
                if (cls_tape == 0 || cls_tape > 24) {
                    throw ConfigError("--all needs --tape-size in 1..24");
                }
                for (std::size_t r = 0; r < (std::size_t{1} << cls_tape);
                     ++r) {
                    patterns.push_back(TapePattern::from_rank(r, cls_tape));
                }
            } else {
                patterns.push_back(TapePattern::parse(cls_pattern));
                if (cls_tape != 0 && cls_tape != patterns.front().size()) {
                    throw ConfigError(
                        "--pattern length differs from --tape-size");
                }
            }
            const double alpha = parse_angle(cls_alpha);
            const double phi0 = parse_angle(cls_phi0);
            struct Row {
                PeriodicityClass cls;
                std::optional<std::size_t> period;
            };
            std::vector<Row> rows(patterns.size());
            if (cls_cycles < 2) {
                throw ConfigError("--max-cycles must be >= 2");
            }
            parallel_for(patterns.size(), threads,
                         [&](std::size_t lo, std::size_t hi) {
                             for (std::size_t i = lo; i < hi; ++i) {
                                 rows[i] = {classify(patterns[i]),
                                            detect_period_numeric(
                                                patterns[i], phi0, alpha,
                                                cls_cycles)};
                             }
                         });
            auto manifest = make_manifest(ctx, std::nullopt);
            manifest.parameters = {{"alpha", alpha},
                                   {"phi0", phi0},
                                   {"max_cycles", cls_cycles}};
            auto gaps_str = [](const PeriodicityClass &c) {
                std::string s;
                for (std::size_t i = 0; i < c.gaps.size(); ++i) {
                    s += (i ? ";" : "") + std::to_string(c.gaps[i]);
                }
                return s;
            };
            if (cls_out.format == "json") {
                auto arr = nlohmann::json::array();
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    arr.push_back(
                        {{"pattern", patterns[i].str()},
                         {"kind", to_string(rows[i].cls.kind)},
                         {"q", rows[i].cls.q},
                         {"gaps", rows[i].cls.gaps},
                         {"period_steps",
                          rows[i].period ? nlohmann::json(*rows[i].period)
                                         : nlohmann::json(nullptr)}});
                }
                if (cls_out.to_file()) {
                    manifest.outputs.push_back(cls_out.out);
                }
                const nlohmann::json doc{{"manifest", to_json(manifest)},
                                         {"patterns", arr}};
                emit(ctx, cls_out, manifest,
                     [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
            } else {
                emit(ctx, cls_out, manifest, [&](std::ostream &os) {
                    os << "pattern,kind,q,gaps,period_steps\n";
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                        os << patterns[i].str() << ','
                           << to_string(rows[i].cls.kind) << ','
                           << rows[i].cls.q << ',' << gaps_str(rows[i].cls)
                           << ','
                           << (rows[i].period ? std::to_string(*rows[i].period)
                                              : std::string{})
                           << '\n';
                    }
                });
            }
        } else if (*dec) {
            if (dec_tape == 0) {
                throw ConfigError("--tape-size is required and must be >= 1");
            }
            TapeSpec tape = dec_initial == "zeros" ? TapeSpec::zeros(dec_tape)
                            : dec_initial == "ones"
                                ? TapeSpec::ones(dec_tape)
                                : TapeSpec::parse(dec_initial);
            if (tape.size() != dec_tape) {
                throw ConfigError("--initial length differs from --tape-size");
            }
            auto weights = decompose(tape);
            if (dec_subset != "all") {
                weights = restrict_weights(weights,
                                           dec_subset == "periodic"
                                               ? PeriodicityKind::Periodic
                                               : PeriodicityKind::Aperiodic);
            }
            auto manifest = make_manifest(ctx, std::nullopt);
            manifest.parameters = {{"initial", tape.str()},
                                   {"subset", dec_subset}};
            if (dec_out.format == "json") {
                auto arr = nlohmann::json::array();
                for (std::size_t r = 0; r < weights.weights.size(); ++r) {
                    const auto p = TapePattern::from_rank(r, dec_tape);
                    arr.push_back({{"rank", r},
                                   {"pattern", p.str()},
                                   {"kind", to_string(classify(p).kind)},
                                   {"weight", weights.weights[r]}});
                }
                if (dec_out.to_file()) {
                    manifest.outputs.push_back(dec_out.out);
                }
                const nlohmann::json doc{{"manifest", to_json(manifest)},
                                         {"weights", arr}};
                emit(ctx, dec_out, manifest,
                     [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
            } else {
                emit(ctx, dec_out, manifest, [&](std::ostream &os) {
                    os << "rank,pattern,kind,weight\n";
                    for (std::size_t r = 0; r < weights.weights.size(); ++r) {
                        const auto p = TapePattern::from_rank(r, dec_tape);
                        os << r << ',' << p.str() << ','
                           << to_string(classify(p).kind) << ','
                           << format_double(weights.weights[r]) << '\n';
                    }
                });
            }
        } else if (*spec) {
            std::optional<MachineConfig> config;
            const auto traj = spec_src.resolve(threads, config);
            const auto s = spectrum(traj);
            auto manifest = make_manifest(ctx, config);
            if (spec_out.format == "json") {
                if (spec_out.to_file()) {
                    manifest.outputs.push_back(spec_out.out);
                }
                const nlohmann::json doc{{"manifest", to_json(manifest)},
                                         {"frequencies", s.frequencies},
                                         {"magnitude_y", s.magnitude_y},
                                         {"magnitude_z", s.magnitude_z}};
                emit(ctx, spec_out, manifest,
                     [&](std::ostream &os) { os << doc.dump() << '\n'; });
            } else {
                emit(ctx, spec_out, manifest, [&](std::ostream &os) {
                    os << "k,frequency,magnitude_y,magnitude_z\n";
                    for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
                        os << k << ',' << format_double(s.frequencies[k])
                           << ',' << format_double(s.magnitude_y[k]) << ','
                           << format_double(s.magnitude_z[k]) << '\n';
                    }
                });
            }
        } else if (*inv) {
            std::optional<MachineConfig> config;
            const auto traj = inv_src.resolve(threads, config);
            const std::size_t max_circles =
                inv_max != 0 ? inv_max
                             : std::size_t{1} << std::min<std::size_t>(
                                   traj.tape_size + 1, 62);
            const auto circles =
                fit_invariant_circles(traj, max_circles, inv_tol);
            auto manifest = make_manifest(ctx, config);
            manifest.parameters = {{"max_circles", max_circles},
                                   {"tolerance", inv_tol}};
            if (inv_out.format == "json") {
                auto centers = nlohmann::json::array();
                for (const auto &c : circles.centers) {
                    centers.push_back({c.y, c.z});
                }
                if (inv_out.to_file()) {
                    manifest.outputs.push_back(inv_out.out);
                }
                const nlohmann::json doc{
                    {"manifest", to_json(manifest)},
                    {"radius", circles.radius},
                    {"centers", centers},
                    {"multiplicity", circles.multiplicity},
                    {"coincident", circles.has_coincident()},
                    {"max_residual", circles.max_residual}};
                emit(ctx, inv_out, manifest,
                     [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
            } else {
                emit(ctx, inv_out, manifest, [&](std::ostream &os) {
                    os << "circle,center_y,center_z,radius,points\n";
                    for (std::size_t c = 0; c < circles.centers.size(); ++c) {
                        const auto count = std::ranges::count(
                            circles.assignment, c);
                        os << c << ',' << format_double(circles.centers[c].y)
                           << ',' << format_double(circles.centers[c].z)
                           << ',' << format_double(circles.radius) << ','
                           << count << '\n';
                    }
                });
            }
        }
    } catch (const CircleFitError &e) {
        err << "error: " << e.what() << '\n';
        for (const auto &[m, res] : e.worst()) {
            err << "  step " << m << ": residual " << format_double(res)
                << '\n';
        }
        return kExitNumeric;
    } catch (const NumericError &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace qtm::cli
