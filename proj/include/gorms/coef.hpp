#pragma once

// Rational functions of the even base coordinates.

#include "gorms/poly.hpp"

#include <cmath>
#include <memory>

namespace gorms {

/// Canonical form: gcd(num, den) = 1 and den monic in graded-lex order.
class Coef {
public:
    Coef() : den_(Poly::constant(0, 1)) {}
    explicit Coef(std::size_t nvars) : num_(nvars), den_(Poly::constant(nvars, 1)) {}
    Coef(std::size_t nvars, const Rational& c) : num_(Poly::constant(nvars, c)), den_(Poly::constant(nvars, 1)) {}
    explicit Coef(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.nvars(), 1)) {}
    Coef(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static Coef variable(std::size_t nvars, std::size_t i) { return Coef(Poly::variable(nvars, i)); }

    [[nodiscard]] std::size_t nvars() const { return num_.nvars(); }
    [[nodiscard]] const Poly& num() const { return num_; }
    [[nodiscard]] const Poly& den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_polynomial() const { return den_.is_one(); }
    [[nodiscard]] bool is_constant() const { return den_.is_one() && num_.is_constant(); }
    [[nodiscard]] bool is_one() const { return den_.is_one() && num_.is_one(); }
    [[nodiscard]] Rational constant_value() const {
        if (!is_constant()) throw std::logic_error("coefficient is not constant");
        return num_.constant_value();
    }

    bool operator==(const Coef& o) const { return num_ == o.num_ && den_ == o.den_; }

    Coef operator-() const {
        Coef r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Coef operator+(const Coef& a, const Coef& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_.is_one() && b.den_.is_one()) return Coef::trusted(a.num_ + b.num_, a.den_);
        // Henrici: with g = gcd of denominators only gcd(t, g) can cancel.
        const Poly g = a.den_ == b.den_ ? a.den_ : gcd(a.den_, b.den_);
        const Poly ad = detail::exact_quotient(a.den_, g), bd = detail::exact_quotient(b.den_, g);
        Poly t = a.num_ * bd + b.num_ * ad;
        if (t.is_zero()) return Coef(a.nvars());
        Poly d = ad * b.den_;
        if (!g.is_constant()) {
            const Poly h = gcd(t, g);
            if (!h.is_constant()) {
                t = detail::exact_quotient(t, h);
                d = detail::exact_quotient(d, h);
            }
        }
        return Coef::monic_den(std::move(t), std::move(d));
    }
    friend Coef operator-(const Coef& a, const Coef& b) { return a + (-b); }

    friend Coef operator*(const Coef& a, const Coef& b) {
        if (a.is_zero() || b.is_zero()) return Coef(a.nvars());
        if (a.is_constant()) return b.scaled(a.num_.constant_value());
        if (b.is_constant()) return a.scaled(b.num_.constant_value());
        if (a.den_.is_one() && b.den_.is_one()) return Coef::trusted(a.num_ * b.num_, a.den_);
        // Cross-cancel, then both halves are already coprime.
        const Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        Poly n = detail::exact_quotient(a.num_, g1) * detail::exact_quotient(b.num_, g2);
        Poly d = detail::exact_quotient(a.den_, g2) * detail::exact_quotient(b.den_, g1);
        return Coef::monic_den(std::move(n), std::move(d));
    }
    friend Coef operator/(const Coef& a, const Coef& b) { return a * b.inverse(); }

    Coef& operator+=(const Coef& o) { return *this = *this + o; }
    Coef& operator-=(const Coef& o) { return *this = *this - o; }
    Coef& operator*=(const Coef& o) { return *this = *this * o; }

    [[nodiscard]] Coef inverse() const {
        if (is_zero()) throw std::domain_error("zero divisor");
        return Coef::monic_den(den_, num_);
    }
    [[nodiscard]] Coef scaled(const Rational& s) const {
        if (s == 0) return Coef(nvars());
        Coef r = *this;
        r.num_ = r.num_.scaled(s);
        return r;
    }
    [[nodiscard]] Coef pow(unsigned k) const { return Coef::trusted(num_.pow(k), den_.pow(k)); }

    /// Exact partial derivative with respect to coordinate `var` (0-based).
    [[nodiscard]] Coef partial(std::size_t var) const {
        if (den_.is_one()) return Coef(num_.partial(var));
        // (n/d)' = (n' d - n d') / d^2; divide through by gcd(d, d') first.
        const Poly dd = den_.partial(var);
        const Poly g = gcd(den_, dd);
        const Poly d1 = detail::exact_quotient(den_, g), dd1 = detail::exact_quotient(dd, g);
        return Coef(num_.partial(var) * d1 - num_ * dd1, d1 * den_);
    }

    [[nodiscard]] double eval(std::span<const double> point) const {
        const double d = den_.eval(point);
        if (d == 0.0) throw std::domain_error("pole at evaluation point");
        return num_.eval(point) / d;
    }
    [[nodiscard]] Rational eval_exact(std::span<const Rational> point) const {
        const Rational d = den_.eval_exact(point);
        if (d == 0) throw std::domain_error("pole at evaluation point");
        return num_.eval_exact(point) / d;
    }

    [[nodiscard]] std::string to_string(std::span<const std::string> names) const {
        if (den_.is_one()) return num_.to_string(names);
        return "(" + num_.to_string(names) + ")/(" + den_.to_string(names) + ")";
    }

private:
    static Coef trusted(Poly n, Poly d) {
        Coef c;
        c.num_ = std::move(n);
        c.den_ = std::move(d);
        return c;
    }
    static Coef monic_den(Poly n, Poly d) {
        if (d.is_zero()) throw std::domain_error("zero divisor");
        if (n.is_zero()) return Coef(n.nvars());
        const Rational lc = d.leading().second;
        if (lc != 1) {
            n = n.scaled(1 / lc);
            d = d.scaled(1 / lc);
        }
        return trusted(std::move(n), std::move(d));
    }
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero divisor");
        if (num_.nvars() != den_.nvars()) throw std::invalid_argument("numerator/denominator coordinate mismatch");
        if (num_.is_zero()) {
            den_ = Poly::constant(num_.nvars(), 1);
            return;
        }
        if (!den_.is_constant()) {
            const Poly g = gcd(num_, den_);
            if (!g.is_one()) {
                num_ = detail::exact_quotient(num_, g);
                den_ = detail::exact_quotient(den_, g);
            }
        }
        *this = monic_den(std::move(num_), std::move(den_));
    }

    Poly num_;
    Poly den_;
};

/// Substitute coordinate values (themselves coefficients) into a polynomial.
inline Coef compose(const Poly& p, std::span<const Coef> values) {
    if (values.size() != p.nvars()) throw std::invalid_argument("compose: arity mismatch");
    const std::size_t target = values.empty() ? 0 : values[0].nvars();
    std::vector<std::vector<Coef>> powers(p.nvars());
    Coef sum(target);
    for (const auto& [ex, c] : p.terms()) {
        Coef t(target, c);
        for (std::size_t i = 0; i < p.nvars(); ++i) {
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(Coef(target, 1));
            while (pw.size() <= ex.e[i]) pw.push_back(pw.back() * values[i]);
            if (ex.e[i]) t *= pw[ex.e[i]];
        }
        sum += t;
    }
    return sum;
}

inline Coef compose(const Coef& c, std::span<const Coef> values) {
    return compose(c.num(), values) / compose(c.den(), values);
}

/// Flattened double-precision form of a polynomial for hot evaluation loops.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Poly& p) : nvars_(p.nvars()) {
        for (const auto& [ex, c] : p.terms()) {
            coeffs_.push_back(c.get_d());
            for (std::size_t i = 0; i < nvars_; ++i) exps_.push_back(ex.e[i]);
            max_deg_ = std::max(max_deg_, static_cast<unsigned>(*std::max_element(ex.e.begin(), ex.e.end())));
        }
    }
    [[nodiscard]] double operator()(std::span<const double> x) const {
        // powers[i*(max_deg+1)+k] = x_i^k
        thread_local std::vector<double> powers;
        const std::size_t stride = max_deg_ + 1;
        powers.assign(nvars_ * stride, 1.0);
        for (std::size_t i = 0; i < nvars_; ++i)
            for (std::size_t k = 1; k < stride; ++k) powers[i * stride + k] = powers[i * stride + k - 1] * x[i];
        double s = 0;
        for (std::size_t t = 0; t < coeffs_.size(); ++t) {
            double v = coeffs_[t];
            for (std::size_t i = 0; i < nvars_; ++i) v *= powers[i * stride + exps_[t * nvars_ + i]];
            s += v;
        }
        return s;
    }

private:
    std::size_t nvars_ = 0;
    unsigned max_deg_ = 0;
    std::vector<double> coeffs_;
    std::vector<std::uint16_t> exps_;
};

class CompiledCoef {
public:
    CompiledCoef() = default;
    explicit CompiledCoef(const Coef& c) : num_(c.num()), den_(c.den()) {}
    [[nodiscard]] double operator()(std::span<const double> x) const {
        const double d = den_(x);
        if (d == 0.0) throw std::domain_error("pole at evaluation point");
        return num_(x) / d;
    }

private:
    CompiledPoly num_, den_;
};

}  // namespace gorms
