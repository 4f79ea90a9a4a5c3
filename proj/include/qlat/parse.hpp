#pragma once

// Text format for field elements: sums of terms like "2*x^3", with '-',
// parentheses, '/' for rational functions, and implicit multiplication
// ("2x", "x(x+1)"). Integers reduce mod p, so "-1" is a valid coefficient.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qlat/poly.hpp"
#include "qlat/ratfunc.hpp"

namespace qlat {

namespace detail {

class ExprParser {
public:
    ExprParser(std::uint64_t p, std::string_view text) : p_(p), text_(text) {}

    RatFunc parse() {
        RatFunc v = expression();
        skip_ws();
        if (pos_ != text_.size())
            throw std::invalid_argument("unexpected character '" + std::string(1, text_[pos_]) +
                                        "' at line 1, column " + std::to_string(pos_ + 1) +
                                        " in '" + std::string(text_) + "'");
        return v;
    }

private:
    RatFunc expression() {
        RatFunc v = signed_term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v += term();
            } else if (peek() == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }

    RatFunc signed_term() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -signed_term();
        }
        if (peek() == '+') {
            ++pos_;
            return signed_term();
        }
        return term();
    }

    RatFunc term() {
        RatFunc v = power();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*') {
                ++pos_;
                v *= power();
            } else if (c == '/') {
                ++pos_;
                v /= power();
            } else if (c == 'x' || c == '(' || std::isdigit(static_cast<unsigned char>(c))) {
                v *= power();  // implicit multiplication
            } else {
                return v;
            }
        }
    }

    RatFunc power() {
        RatFunc base = atom();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            bool neg = false;
            if (peek() == '-') { neg = true; ++pos_; }
            std::uint64_t e = integer();
            RatFunc r = RatFunc::one(p_);
            for (std::uint64_t i = 0; i < e; ++i) r *= base;
            return neg ? r.inverse() : r;
        }
        return base;
    }

    RatFunc atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            RatFunc v = expression();
            skip_ws();
            if (peek() != ')')
                throw std::invalid_argument("missing ')' at line 1, column " +
                                            std::to_string(pos_ + 1) + " in '" +
                                            std::string(text_) + "'");
            ++pos_;
            return v;
        }
        if (c == 'x') {
            ++pos_;
            return RatFunc(Poly::x(p_));
        }
        if (c == '-') return signed_term();
        if (std::isdigit(static_cast<unsigned char>(c)))
            return RatFunc::constant(p_, static_cast<std::int64_t>(integer()));
        throw std::invalid_argument("cannot parse '" + std::string(text_) +
                                    "' as a field element (line 1, column " +
                                    std::to_string(pos_ + 1) + ")");
    }

    std::uint64_t integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw std::invalid_argument("expected an integer at line 1, column " +
                                        std::to_string(pos_ + 1) + " in '" +
                                        std::string(text_) + "'");
        std::uint64_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (v > (std::uint64_t{1} << 40)) throw std::invalid_argument("integer literal too large");
            ++pos_;
        }
        return v;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::uint64_t p_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline RatFunc parse_ratfunc(std::uint64_t p, std::string_view text) {
    return detail::ExprParser(p, text).parse();
}

inline Poly parse_poly(std::uint64_t p, std::string_view text) {
    RatFunc v = parse_ratfunc(p, text);
    if (!v.is_polynomial())
        throw std::invalid_argument("'" + std::string(text) + "' is not a polynomial");
    return v.num();
}

// Comma-separated entries, split at depth zero so parenthesized commas
// never arise (the grammar has none, but nested parens must not confuse
// the splitter).
inline std::vector<RatFunc> parse_diagonal(std::uint64_t p, std::string_view text) {
    std::vector<RatFunc> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] == '(') ++depth;
        if (i < text.size() && text[i] == ')') --depth;
        if (i == text.size() || (text[i] == ',' && depth == 0)) {
            out.push_back(parse_ratfunc(p, text.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (out.empty()) throw std::invalid_argument("empty diagonal");
    return out;
}

}  // namespace qlat
