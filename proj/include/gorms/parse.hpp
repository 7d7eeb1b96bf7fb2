#pragma once

// Infix text syntax for coefficients and worms:
//   4/(1+u^2+v^2)^2      (x1 + 1/2)*d1(x1)*d2(x1) - d12(x1)
// Integer and fraction literals, named coordinates, generator tokens d<S>(<coord>),
// parameter names, + - * / ^ and parentheses. Division by anything but a
// pure coefficient is rejected.

#include "gorms/worm_algebra.hpp"

#include <cctype>

namespace gorms {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class ElemParser {
public:
    ElemParser(const Context& ctx, std::string_view text) : ctx_(ctx), s_(text) {}

    Elem parse() {
        Elem e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + what);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Elem expr() {
        Elem acc = term();
        for (;;) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }
    Elem term() {
        Elem acc = unary();
        for (;;) {
            if (eat('*')) acc = acc * unary();
            else if (eat('/')) {
                Elem rhs = unary();
                acc = acc.scaled(pure_coef(rhs, "division by a non-coefficient").inverse());
            } else
                return acc;
        }
    }
    Elem unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Elem power() {
        Elem base = atom();
        if (!eat('^')) return base;
        skip_ws();
        bool neg = eat('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        const unsigned k = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
        if (!neg) return base.pow(k);
        const Coef c = pure_coef(base, "negative power of a non-coefficient");
        return Elem::constant(ctx_, c.inverse().pow(k));
    }
    Elem atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Elem e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Elem::constant(ctx_, Rational(std::string(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            if (pos_ < s_.size() && s_[pos_] == '(' && is_generator_prefix(name)) return generator(name);
            return named(name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    static bool is_generator_prefix(const std::string& name) {
        return name.size() >= 2 && name[0] == 'd' &&
               std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    }
    Elem generator(const std::string& prefix) {
        ++pos_;  // '('
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string coord(s_.substr(start, pos_ - start));
        if (!eat(')')) fail("expected ')' after generator coordinate");
        const auto& names = ctx_.coord_names();
        auto it = std::find(names.begin(), names.end(), coord);
        if (it == names.end()) fail("unknown coordinate '" + coord + "'");
        unsigned subset = 0;
        int last = 0;
        for (char ch : prefix.substr(1)) {
            const int a = ch - '0';
            if (a < 1 || a > ctx_.n() || a <= last) fail("bad direction list in '" + prefix + "'");
            subset |= 1u << (a - 1);
            last = a;
        }
        return Elem::generator(ctx_, ctx_.find(static_cast<int>(it - names.begin()), subset));
    }
    Elem named(const std::string& name) {
        const auto& names = ctx_.coord_names();
        if (auto it = std::find(names.begin(), names.end(), name); it != names.end())
            return Elem::coordinate(ctx_, static_cast<std::size_t>(it - names.begin()));
        const auto& params = ctx_.param_names();
        if (auto it = std::find(params.begin(), params.end(), name); it != params.end())
            return Elem::generator(ctx_, ctx_.param(static_cast<std::size_t>(it - params.begin())));
        fail("unknown symbol '" + name + "'");
    }
    Coef pure_coef(const Elem& e, const std::string& why) const {
        if (e.is_zero()) throw std::domain_error("zero divisor");
        if (e.terms().size() != 1 || !e.terms().begin()->first.is_unit()) fail(why);
        return e.terms().begin()->second;
    }

    const Context& ctx_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Elem parse_elem(const Context& ctx, std::string_view text) { return detail::ElemParser(ctx, text).parse(); }

/// Parses a rational function in the named coordinates.
inline Coef parse_coef(std::string_view text, const std::vector<std::string>& coords) {
    const Context ctx = Context::make(1, static_cast<int>(coords.size()), coords);
    const Elem e = parse_elem(ctx, text);
    if (e.is_zero()) return Coef(coords.size());
    if (e.terms().size() != 1 || !e.terms().begin()->first.is_unit())
        throw ParseError("expression is not a coefficient: " + std::string(text));
    return e.terms().begin()->second;
}

}  // namespace gorms
