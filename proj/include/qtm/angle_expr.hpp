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
 * Angle expressions for command-line values such as "pi/sqrt(3)".
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := ('+' | '-') unary | primary
 *   primary := number | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'
 */
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "error.hpp"

namespace qtm {

struct AngleExpr {
    std::string source;
    double value{0.0};

    static AngleExpr parse(std::string_view text);
};

namespace detail {

class AngleParser {
  public:
    explicit AngleParser(std::string_view text) : text_{text} {}

    double parse() {
        const double v = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        if (!std::isfinite(v)) {
            fail("value is not finite");
        }
        return v;
    }

  private:
    [[noreturn]] void fail(const std::string &msg) const {
        throw ConfigError("angle expression \"" + std::string(text_) +
                          "\": " + msg + " at position " +
                          std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    bool accept_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) {
            return false;
        }
        const std::size_t end = pos_ + word.size();
        if (end < text_.size() &&
            std::isalnum(static_cast<unsigned char>(text_[end]))) {
            return false;
        }
        pos_ = end;
        return true;
    }

    double expr() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                const double d = unary();
                if (d == 0.0) {
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    double unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return primary();
    }

    double primary() {
        skip_space();
        if (accept('(')) {
            const double v = expr();
            expect(')');
            return v;
        }
        if (accept_word("pi")) {
            return std::numbers::pi;
        }
        if (accept_word("sqrt")) {
            expect('(');
            const double v = expr();
            expect(')');
            if (v < 0.0) {
                fail("sqrt of a negative value");
            }
            return std::sqrt(v);
        }
        double v = 0.0;
        const char *first = text_.data() + pos_;
        const char *last = text_.data() + text_.size();
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{} || res.ptr == first) {
            fail(pos_ < text_.size() ? "expected a number, 'pi' or 'sqrt'"
                                     : "unexpected end of input");
        }
        pos_ += static_cast<std::size_t>(res.ptr - first);
        return v;
    }

    std::string_view text_;
    std::size_t pos_{0};
};

} // namespace detail

inline AngleExpr AngleExpr::parse(std::string_view text) {
    return {std::string(text), detail::AngleParser{text}.parse()};
}

/// Convenience: value of an angle expression in radians.
inline double parse_angle(std::string_view text) {
    return AngleExpr::parse(text).value;
}

} // namespace qtm
