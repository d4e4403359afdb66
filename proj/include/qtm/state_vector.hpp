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
 * Network state of a Turing head coupled to M tape spins, product-state
 * construction and reduced Bloch vector of the head.
 *
 * Bit convention: the head is bit 0 of the amplitude index, tape spin mu is
 * bit mu. For a tape configuration t (an M-bit integer with site mu at bit
 * mu-1) the head pair is (amps[2t], amps[2t+1]).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qtm {

/// Largest tape size accepted by StateVector; 2^(M+1) amplitudes are stored.
inline constexpr std::size_t kMaxStateVectorTape = 28;

/// Initial head angle phi0: head = cos(phi0/2)|0> - i sin(phi0/2)|1>.
struct HeadAngle {
    double radians{0.0};
};

/// Local rotation angle alpha of the head rotation gate.
struct RotationAngle {
    double radians{0.0};
};

/// Site of the network: the head or tape spin mu (1-based).
class QubitAddress {
  public:
    static constexpr QubitAddress head() { return QubitAddress{0}; }
    static QubitAddress tape(std::size_t mu) {
        if (mu == 0) {
            throw ConfigError("tape index is 1-based");
        }
        return QubitAddress{mu};
    }
    /// Inverse of bit_index().
    static QubitAddress from_bit(std::size_t bit) { return QubitAddress{bit}; }

    [[nodiscard]] constexpr bool is_head() const { return bit_ == 0; }
    /// Tape index mu; 0 for the head.
    [[nodiscard]] constexpr std::size_t tape_index() const { return bit_; }
    [[nodiscard]] constexpr std::size_t bit_index() const { return bit_; }
    [[nodiscard]] constexpr std::size_t mask() const {
        return std::size_t{1} << bit_;
    }

    friend constexpr bool operator==(QubitAddress, QubitAddress) = default;

  private:
    constexpr explicit QubitAddress(std::size_t bit) : bit_{bit} {}
    std::size_t bit_;
};

/// Expectation values of lambda_x, lambda_y, lambda_z for a single spin.
struct BlochVector {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    friend constexpr bool operator==(const BlochVector &,
                                     const BlochVector &) = default;
    constexpr BlochVector operator-() const { return {-x, -y, -z}; }
    constexpr BlochVector &operator+=(const BlochVector &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    friend constexpr BlochVector operator+(BlochVector a,
                                           const BlochVector &b) {
        return a += b;
    }
    friend constexpr BlochVector operator-(const BlochVector &a,
                                           const BlochVector &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr BlochVector operator*(double s, const BlochVector &b) {
        return {s * b.x, s * b.y, s * b.z};
    }
};

/// |b|^2; 1 for a pure head state, < 1 once the head is entangled.
constexpr double purity(const BlochVector &b) {
    return b.x * b.x + b.y * b.y + b.z * b.z;
}

/// Largest componentwise difference.
inline double max_abs_diff(const BlochVector &a, const BlochVector &b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y),
                     std::abs(a.z - b.z)});
}

/// Bloch vector (0, sin phi, -cos phi) of cos(phi/2)|0> - i sin(phi/2)|1>.
inline BlochVector bloch_from_angle(double phi) {
    return {0.0, std::sin(phi), -std::cos(phi)};
}

/// Per-site tape state.
enum class TapeSymbol : char { Zero = '0', One = '1', Plus = '+', Minus = '-' };

/**
 * @brief Product tape state, one symbol per site.
 *
 * Grammar: a string over {0,1,+,-}; character mu-1 describes tape spin mu.
 * Computational and +/- symbols may be mixed.
 */
class TapeSpec {
  public:
    TapeSpec() = default;

    static TapeSpec parse(std::string_view text) {
        TapeSpec spec;
        spec.symbols_.reserve(text.size());
        for (char c : text) {
            switch (c) {
            case '0':
            case '1':
            case '+':
            case '-':
                spec.symbols_.push_back(static_cast<TapeSymbol>(c));
                break;
            default:
                throw ConfigError("invalid tape symbol '" + std::string(1, c) +
                                  "' in \"" + std::string(text) +
                                  "\" (expected 0, 1, + or -)");
            }
        }
        if (spec.symbols_.empty()) {
            throw ConfigError("empty tape specification");
        }
        return spec;
    }

    static TapeSpec zeros(std::size_t M) { return uniform(M, TapeSymbol::Zero); }
    static TapeSpec ones(std::size_t M) { return uniform(M, TapeSymbol::One); }

    [[nodiscard]] std::size_t size() const { return symbols_.size(); }
    /// Symbol of tape spin mu (1-based).
    [[nodiscard]] TapeSymbol site(std::size_t mu) const {
        return symbols_.at(mu - 1);
    }
    [[nodiscard]] bool is_pattern() const {
        return std::ranges::all_of(symbols_, [](TapeSymbol s) {
            return s == TapeSymbol::Plus || s == TapeSymbol::Minus;
        });
    }
    [[nodiscard]] bool is_computational() const {
        return std::ranges::all_of(symbols_, [](TapeSymbol s) {
            return s == TapeSymbol::Zero || s == TapeSymbol::One;
        });
    }
    [[nodiscard]] std::string str() const {
        std::string out;
        for (auto s : symbols_) {
            out.push_back(static_cast<char>(s));
        }
        return out;
    }

    friend bool operator==(const TapeSpec &, const TapeSpec &) = default;

  private:
    static TapeSpec uniform(std::size_t M, TapeSymbol s) {
        if (M == 0) {
            throw ConfigError("tape size must be at least 1");
        }
        TapeSpec spec;
        spec.symbols_.assign(M, s);
        return spec;
    }

    std::vector<TapeSymbol> symbols_;
};

/**
 * @brief Dense state vector of the head plus M tape spins.
 *
 * Owns 2^(M+1) complex amplitudes. Value semantics; gates mutate it in place.
 *
 * @tparam Real Floating point precision of the amplitudes.
 */
template <std::floating_point Real = double> class StateVector {
  public:
    using complex_type = std::complex<Real>;

    /// |0>_S |0...0>.
    explicit StateVector(std::size_t num_tape_spins)
        : num_tape_spins_{checked_tape_size(num_tape_spins)},
          amps_(std::size_t{1} << (num_tape_spins + 1)) {
        amps_[0] = complex_type{1};
    }

    /// Takes ownership of explicit amplitudes; length must be 2^(M+1).
    StateVector(std::size_t num_tape_spins, std::vector<complex_type> amps)
        : num_tape_spins_{checked_tape_size(num_tape_spins)},
          amps_{std::move(amps)} {
        if (amps_.size() != (std::size_t{1} << (num_tape_spins_ + 1))) {
            throw ConfigError("expected " +
                              std::to_string(std::size_t{1}
                                             << (num_tape_spins_ + 1)) +
                              " amplitudes for M=" +
                              std::to_string(num_tape_spins_) + ", got " +
                              std::to_string(amps_.size()));
        }
    }

    [[nodiscard]] std::size_t num_tape_spins() const { return num_tape_spins_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<complex_type> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const complex_type> amplitudes() const {
        return amps_;
    }
    complex_type &operator[](std::size_t i) { return amps_[i]; }
    const complex_type &operator[](std::size_t i) const { return amps_[i]; }

    /// Sum of |amplitude|^2, accumulated blockwise to bound rounding drift.
    [[nodiscard]] Real norm_squared() const {
        constexpr std::size_t block = 4096;
        Real total{0};
        for (std::size_t lo = 0; lo < amps_.size(); lo += block) {
            const std::size_t hi = std::min(amps_.size(), lo + block);
            Real partial{0};
            for (std::size_t i = lo; i < hi; ++i) {
                partial += std::norm(amps_[i]);
            }
            total += partial;
        }
        return total;
    }

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    static std::size_t checked_tape_size(std::size_t M) {
        if (M == 0 || M > kMaxStateVectorTape) {
            throw ConfigError("tape size M=" + std::to_string(M) +
                              " outside 1.." +
                              std::to_string(kMaxStateVectorTape));
        }
        return M;
    }

    std::size_t num_tape_spins_;
    std::vector<complex_type> amps_;
};

/// Single-site amplitudes (<0|s>, <1|s>) of a tape symbol.
inline std::pair<std::complex<double>, std::complex<double>>
tape_site_amplitudes(TapeSymbol s) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (s) {
    case TapeSymbol::Zero:
        return {1.0, 0.0};
    case TapeSymbol::One:
        return {0.0, 1.0};
    case TapeSymbol::Plus:
        return {h, h};
    case TapeSymbol::Minus:
        return {h, -h};
    }
    return {0.0, 0.0};
}

/// Head amplitudes (cos(phi0/2), -i sin(phi0/2)).
inline std::pair<std::complex<double>, std::complex<double>>
head_amplitudes(HeadAngle phi0) {
    return {std::cos(phi0.radians / 2),
            std::complex<double>{0.0, -std::sin(phi0.radians / 2)}};
}

/// head(phi0) (x) tape, built by successive Kronecker products.
inline StateVector<double> make_product_state(HeadAngle phi0,
                                              const TapeSpec &tape) {
    const std::size_t M = tape.size();
    std::vector<std::complex<double>> amps(std::size_t{1} << (M + 1));
    const auto [h0, h1] = head_amplitudes(phi0);
    amps[0] = h0;
    amps[1] = h1;
    for (std::size_t mu = 1; mu <= M; ++mu) {
        const std::size_t half = std::size_t{1} << mu;
        const auto [t0, t1] = tape_site_amplitudes(tape.site(mu));
        for (std::size_t i = 0; i < half; ++i) {
            amps[i + half] = amps[i] * t1;
            amps[i] *= t0;
        }
    }
    return StateVector<double>{M, std::move(amps)};
}

/// Same as above, with the tape size validated against M.
inline StateVector<double> make_product_state(HeadAngle phi0,
                                              const TapeSpec &tape,
                                              std::size_t M) {
    if (tape.size() != M) {
        throw ConfigError("tape \"" + tape.str() + "\" has length " +
                          std::to_string(tape.size()) + ", expected M=" +
                          std::to_string(M));
    }
    return make_product_state(phi0, tape);
}

/**
 * @brief Reduced Bloch vector of the head.
 *
 * Partial trace over the tape: with a_t, b_t the head-0 / head-1 amplitudes of
 * tape configuration t, rho_01 = sum_t a_t conj(b_t), giving
 * x = 2 Re(sum conj(a) b), y = -2 Im(sum conj(a) b), z = sum |b|^2 - |a|^2.
 */
template <std::floating_point Real>
BlochVector head_bloch(const StateVector<Real> &state) {
    const auto amps = state.amplitudes();
    std::complex<Real> cross{0};
    Real p0{0};
    Real p1{0};
    for (std::size_t i = 0; i < amps.size(); i += 2) {
        const auto a = amps[i];
        const auto b = amps[i + 1];
        cross += std::conj(a) * b;
        p0 += std::norm(a);
        p1 += std::norm(b);
    }
    return {static_cast<double>(2 * cross.real()),
            static_cast<double>(Real{0} - 2 * cross.imag()),
            static_cast<double>(p1 - p0)};
}

/// <a|b>.
template <std::floating_point Real>
std::complex<Real> inner_product(const StateVector<Real> &a,
                                 const StateVector<Real> &b) {
    if (a.size() != b.size()) {
        throw ConfigError("inner product of states with different tape sizes");
    }
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    return std::transform_reduce(
        x.begin(), x.end(), y.begin(), std::complex<Real>{0}, std::plus<>{},
        [](const auto &u, const auto &v) { return std::conj(u) * v; });
}

} // namespace qtm
