#pragma once

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ncpopt/polynomial.hpp"

namespace ncpopt {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
    size_t offset;
};

namespace detail {

class PolyParser {
public:
    PolyParser(const std::string& text, int nvars) : text_(text), nvars_(nvars) {}

    NcPolynomial run() {
        NcPolynomial f = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    // expr := ['+'|'-'] term (('+'|'-') term)*
    NcPolynomial parse_expr() {
        NcPolynomial acc(nvars_);
        skip_ws();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1.0 : 1.0;
        acc += parse_term() * sign;
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                get();
                acc += parse_term() * (c == '-' ? -1.0 : 1.0);
            } else {
                return acc;
            }
        }
    }

    // term := factor ('*' factor | factor-right-after-'^m')*
    NcPolynomial parse_term() {
        bool after_caret = false;
        NcPolynomial acc = parse_factor(after_caret);
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                get();
                acc = acc * parse_factor(after_caret);
            } else if (after_caret && starts_factor(peek())) {
                // '*' may be omitted right after an exponent
                acc = acc * parse_factor(after_caret);
            } else {
                return acc;
            }
        }
    }

    // factor := (number | variable | '(' expr ')') ['^' uint]
    NcPolynomial parse_factor(bool& after_caret) {
        after_caret = false;
        skip_ws();
        NcPolynomial base(nvars_);
        char c = peek();
        if (c == '(') {
            get();
            base = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            get();
        } else if (c == 'x' || c == 'X') {
            base = parse_variable();
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            base = NcPolynomial::constant(nvars_, parse_number());
        } else {
            fail("expected a factor");
        }
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            size_t at = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
            long m = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) m = m * 10 + (get() - '0');
            if (m > 64) throw ParseError("exponent too large", at);
            base = pow(base, static_cast<int>(m));
            after_caret = true;
        }
        return base;
    }

    NcPolynomial parse_variable() {
        size_t at = pos_;
        get();  // 'x'
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
        long k = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) k = k * 10 + (get() - '0');
        if (k < 1 || k > nvars_)
            throw ParseError("variable index out of range: x" + std::to_string(k), at);
        return NcPolynomial::variable(nvars_, static_cast<int>(k));
    }

    double parse_number() {
        size_t at = pos_;
        size_t i = pos_;
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        if (i < text_.size() && text_[i] == '.') {
            ++i;
            while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        }
        if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
            size_t j = i + 1;
            if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
            if (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) {
                ++j;
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
                i = j;
            }
        }
        std::string num = text_.substr(pos_, i - pos_);
        char* end = nullptr;
        double v = std::strtod(num.c_str(), &end);
        if (end == num.c_str()) throw ParseError("malformed number", at);
        pos_ = at + (end - num.c_str());
        return v;
    }

    static bool starts_factor(char c) {
        return c == '(' || c == 'x' || c == 'X' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return text_[pos_++]; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    const std::string& text_;
    int nvars_;
    size_t pos_ = 0;
};

}  // namespace detail

/// Parses the ASCII polynomial grammar: variables x<k>, operators + - * ^,
/// parentheses, decimal/scientific literals. '*' is required between
/// factors except directly after an exponent. Throws ParseError with the
/// byte offset of the problem.
inline NcPolynomial parse_polynomial(const std::string& text, int nvars) {
    return detail::PolyParser(text, nvars).run();
}

}  // namespace ncpopt
