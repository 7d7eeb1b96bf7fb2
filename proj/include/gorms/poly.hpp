#pragma once

// Sparse multivariate polynomials over Q with exact gcd.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gorms {

using Rational = mpq_class;

/// Upper bound on the number of base coordinates of a chart.
inline constexpr std::size_t kMaxVars = 8;

struct Exponents {
    std::array<std::uint16_t, kMaxVars> e{};

    [[nodiscard]] unsigned total() const {
        unsigned t = 0;
        for (auto v : e) t += v;
        return t;
    }
    bool operator==(const Exponents&) const = default;

    [[nodiscard]] bool divides(const Exponents& other) const {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (e[i] > other.e[i]) return false;
        return true;
    }
    Exponents operator+(const Exponents& o) const {
        Exponents r;
        for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] + o.e[i]);
        return r;
    }
    Exponents operator-(const Exponents& o) const {
        Exponents r;
        for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
        return r;
    }
};

/// Graded-lex order: total degree first, then lexicographic with x1 > x2 > ...
struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const unsigned ta = a.total(), tb = b.total();
        if (ta != tb) return ta < tb;
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        return false;
    }
};

class Poly {
public:
    using TermMap = std::map<Exponents, Rational, GrlexLess>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {
        if (nvars > kMaxVars) throw std::invalid_argument("too many base coordinates");
    }

    static Poly constant(std::size_t nvars, const Rational& c) {
        Poly p(nvars);
        if (c != 0) p.terms_.emplace(Exponents{}, c);
        return p;
    }
    static Poly variable(std::size_t nvars, std::size_t i) {
        if (i >= nvars) throw std::out_of_range("variable index out of range");
        Poly p(nvars);
        Exponents ex;
        ex.e[i] = 1;
        p.terms_.emplace(ex, Rational(1));
        return p;
    }
    static Poly monomial(std::size_t nvars, const Exponents& ex, const Rational& c) {
        Poly p(nvars);
        if (c != 0) p.terms_.emplace(ex, c);
        return p;
    }

    [[nodiscard]] std::size_t nvars() const { return nvars_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total() == 0);
    }
    [[nodiscard]] Rational constant_value() const {
        auto it = terms_.find(Exponents{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    [[nodiscard]] bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.total() == 0 && terms_.begin()->second == 1;
    }
    [[nodiscard]] const std::pair<const Exponents, Rational>& leading() const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        return *terms_.rbegin();
    }
    [[nodiscard]] unsigned total_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.total(); }
    [[nodiscard]] unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [ex, c] : terms_) d = std::max<unsigned>(d, ex.e[var]);
        return d;
    }
    /// Bit i set when variable i occurs.
    [[nodiscard]] unsigned variable_mask() const {
        unsigned mask = 0;
        for (const auto& [ex, c] : terms_)
            for (std::size_t i = 0; i < nvars_; ++i)
                if (ex.e[i]) mask |= 1u << i;
        return mask;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [ex, c] : r.terms_) c = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check_compatible(o);
        for (const auto& [ex, c] : o.terms_) add_term(ex, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_compatible(o);
        for (const auto& [ex, c] : o.terms_) add_term(ex, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_compatible(b);
        Poly r(a.nvars_);
        if (a.is_zero() || b.is_zero()) return r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    [[nodiscard]] Poly scaled(const Rational& s) const {
        if (s == 0) return Poly(nvars_);
        Poly r = *this;
        for (auto& [ex, c] : r.terms_) c *= s;
        return r;
    }
    [[nodiscard]] Poly pow(unsigned k) const {
        Poly r = constant(nvars_, 1), base = *this;
        while (k) {
            if (k & 1u) r *= base;
            k >>= 1u;
            if (k) base *= base;
        }
        return r;
    }

    [[nodiscard]] Poly partial(std::size_t var) const {
        if (var >= nvars_) throw std::out_of_range("partial: coordinate index out of range");
        Poly r(nvars_);
        for (const auto& [ex, c] : terms_) {
            if (ex.e[var] == 0) continue;
            Exponents d = ex;
            d.e[var] -= 1;
            r.add_term(d, c * ex.e[var]);
        }
        return r;
    }

    [[nodiscard]] double eval(std::span<const double> point) const {
        double s = 0;
        for (const auto& [ex, c] : terms_) {
            double t = c.get_d();
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < ex.e[i]; ++k) t *= point[i];
            s += t;
        }
        return s;
    }
    [[nodiscard]] Rational eval_exact(std::span<const Rational> point) const {
        Rational s = 0;
        for (const auto& [ex, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < ex.e[i]; ++k) t *= point[i];
            s += t;
        }
        return s;
    }

    /// Coefficients of this polynomial viewed as univariate in `var`.
    [[nodiscard]] std::vector<Poly> coefficients_in(std::size_t var) const {
        std::vector<Poly> out(degree_in(var) + 1, Poly(nvars_));
        for (const auto& [ex, c] : terms_) {
            Exponents rest = ex;
            rest.e[var] = 0;
            out[ex.e[var]].terms_.emplace(rest, c);
        }
        return out;
    }
    static Poly from_coefficients(std::size_t nvars, std::size_t var, const std::vector<Poly>& coeffs) {
        Poly r(nvars);
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            for (const auto& [ex, c] : coeffs[k].terms_) {
                Exponents e2 = ex;
                e2.e[var] = static_cast<std::uint16_t>(e2.e[var] + k);
                r.add_term(e2, c);
            }
        return r;
    }

    /// Leading coefficient scaled to one (zero stays zero).
    [[nodiscard]] Poly monic() const {
        if (is_zero()) return *this;
        return scaled(1 / leading().second);
    }

    [[nodiscard]] std::string to_string(std::span<const std::string> names) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [ex, c] = *it;
            Rational mag = abs(c);
            const bool neg = c < 0;
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            first = false;
            const bool is_unit_monomial = ex.total() == 0;
            if (is_unit_monomial || mag != 1) {
                os << mag.get_str();
                if (!is_unit_monomial) os << "*";
            }
            bool first_var = true;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (!ex.e[i]) continue;
                if (!first_var) os << "*";
                first_var = false;
                os << names[i];
                if (ex.e[i] > 1) os << "^" << ex.e[i];
            }
        }
        return os.str();
    }

private:
    void check_compatible(const Poly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("polynomials over different coordinate sets");
    }
    void add_term(const Exponents& ex, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(ex, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::size_t nvars_ = 0;
    TermMap terms_;

    friend std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
};

/// Quotient a/b when b divides a exactly, otherwise nullopt.
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("zero divisor");
    Poly q(a.nvars()), r = a;
    const auto& [lb_ex, lb_c] = b.leading();
    if (b.is_constant()) return a.scaled(1 / lb_c);
    while (!r.is_zero()) {
        const auto& [lr_ex, lr_c] = r.leading();
        if (!lb_ex.divides(lr_ex)) return std::nullopt;
        Poly t = Poly::monomial(a.nvars(), lr_ex - lb_ex, lr_c / lb_c);
        q += t;
        r -= t * b;
    }
    return q;
}

namespace detail {

inline Poly exact_quotient(const Poly& a, const Poly& b) {
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("internal: expected exact polynomial division");
    return *q;
}

// Pseudo-remainder of a by b as univariate polynomials in `var`.
inline std::vector<Poly> pseudo_remainder(std::vector<Poly> a, const std::vector<Poly>& b) {
    const std::size_t db = b.size() - 1;
    const Poly& lc = b.back();
    auto trim = [](std::vector<Poly>& v) {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    trim(a);
    while (!a.empty() && a.size() - 1 >= db) {
        const std::size_t shift = a.size() - 1 - db;
        Poly lead = a.back();
        for (auto& c : a) c = c * lc;
        for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= lead * b[k];
        trim(a);
    }
    return a;
}

}  // namespace detail

inline Poly gcd(const Poly& a, const Poly& b);

/// gcd of the coefficients of `p` viewed as univariate in `var`.
inline Poly content_in(const Poly& p, std::size_t var) {
    Poly g(p.nvars());
    for (const auto& c : p.coefficients_in(var)) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd(g, c);
        if (g.is_constant()) return Poly::constant(p.nvars(), 1);
    }
    return g;
}

namespace detail {

inline mpz_class integer_content(const Poly& p) {
    mpz_class g = 0;
    for (const auto& [ex, c] : p.terms()) g = ::gcd(g, mpz_class(c.get_num()));
    return g;
}

// Largest coefficient magnitude.
inline mpz_class integer_norm(const Poly& p) {
    mpz_class m = 0;
    for (const auto& [ex, c] : p.terms())
        if (abs(c.get_num()) > m) m = abs(c.get_num());
    return m;
}

inline Poly substitute(const Poly& p, std::size_t var, const mpz_class& x) {
    Poly r(p.nvars());
    const std::vector<Poly> cs = p.coefficients_in(var);
    mpz_class pw = 1;
    for (const auto& c : cs) {
        r += c.scaled(Rational(pw));
        pw *= x;
    }
    return r;
}

// Inverse of substitute for integer polynomials with small coefficients (symmetric x-adic digits).
inline Poly interpolate(Poly h, std::size_t var, const mpz_class& x) {
    const std::size_t n = h.nvars();
    std::vector<Poly> coeffs;
    const mpz_class half = x / 2;
    while (!h.is_zero()) {
        Poly digit(n);
        for (const auto& [ex, c] : h.terms()) {
            mpz_class d = c.get_num() % x;
            if (d < 0) d += x;
            if (d > half) d -= x;
            if (d != 0) digit += Poly::monomial(n, ex, Rational(d));
        }
        h = (h - digit).scaled(Rational(1) / Rational(x));
        coeffs.push_back(std::move(digit));
    }
    return Poly::from_coefficients(n, var, coeffs);
}

// Heuristic gcd over Z (Char, Geddes and Gonnet) for polynomials with integer coefficients.
// Returns the gcd including integer content, or nullopt when the heuristic gives up.
inline std::optional<Poly> heuristic_gcd(Poly f, Poly g) {
    const std::size_t n = f.nvars();
    const mpz_class cf = integer_content(f), cg = integer_content(g);
    const mpz_class gc = ::gcd(cf, cg);
    if (f.is_constant() || g.is_constant()) return Poly::constant(n, Rational(gc));
    f = f.scaled(Rational(1) / Rational(cf));
    g = g.scaled(Rational(1) / Rational(cg));

    const unsigned mask = f.variable_mask() | g.variable_mask();
    std::size_t var = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) var = i;

    const mpz_class fn = integer_norm(f), gn = integer_norm(g);
    const mpz_class bound = std::max(fn, gn);
    const mpz_class lf = abs(f.leading().second.get_num()), lg = abs(g.leading().second.get_num());
    mpz_class x = std::max<mpz_class>(std::min<mpz_class>(bound, 99 * sqrt(bound)), 2 * std::min<mpz_class>(fn / lf, gn / lg) + 4);
    for (int attempt = 0; attempt < 6; ++attempt) {
        const Poly ff = substitute(f, var, x), gg = substitute(g, var, x);
        if (!ff.is_zero() && !gg.is_zero()) {
            if (auto hh = heuristic_gcd(ff, gg)) {
                Poly h = interpolate(*hh, var, x);
                if (!h.is_zero()) {
                    h = h.scaled(Rational(1) / Rational(integer_content(h)));
                    if (h.leading().second < 0) h = -h;
                    if (divide_exact(f, h) && divide_exact(g, h)) return h.scaled(Rational(gc));
                }
            }
        }
        x = 73794 * x * sqrt(sqrt(x)) / 27011;
    }
    return std::nullopt;
}

// Scale to integer coefficients.
inline Poly clear_denominators(const Poly& p) {
    mpz_class l = 1;
    for (const auto& [ex, c] : p.terms()) l = lcm(l, mpz_class(c.get_den()));
    return p.scaled(Rational(l));
}

}  // namespace detail

/// Monic greatest common divisor (recursive primitive PRS).
inline Poly prs_gcd(const Poly& a, const Poly& b) {
    const std::size_t n = a.nvars();
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly::constant(n, 1);
    if (a == b) return a.monic();

    const unsigned ma = a.variable_mask(), mb = b.variable_mask();
    std::size_t var = 0;
    for (std::size_t i = 0; i < n; ++i)
        if ((ma | mb) & (1u << i)) var = i;
    if (!(ma & (1u << var))) return gcd(a, content_in(b, var));
    if (!(mb & (1u << var))) return gcd(content_in(a, var), b);

    // Cheap exact-divisibility shortcuts.
    if (b.total_degree() <= a.total_degree() && divide_exact(a, b)) return b.monic();
    if (a.total_degree() <= b.total_degree() && divide_exact(b, a)) return a.monic();

    const Poly ca = content_in(a, var), cb = content_in(b, var);
    const Poly c = gcd(ca, cb);
    std::vector<Poly> pa = detail::exact_quotient(a, ca).coefficients_in(var);
    std::vector<Poly> pb = detail::exact_quotient(b, cb).coefficients_in(var);
    if (pa.size() < pb.size()) std::swap(pa, pb);

    auto primitive = [&](const std::vector<Poly>& v) {
        Poly p = Poly::from_coefficients(n, var, v);
        return detail::exact_quotient(p, content_in(p, var)).coefficients_in(var);
    };
    while (true) {
        std::vector<Poly> r = detail::pseudo_remainder(pa, pb);
        if (r.empty()) break;
        if (r.size() == 1) return c;  // primitive parts are coprime
        pa = std::move(pb);
        pb = primitive(r);
    }
    Poly g = Poly::from_coefficients(n, var, pb);
    g = detail::exact_quotient(g, content_in(g, var));
    return (g * c).monic();
}

}  // namespace gorms

namespace gorms {

/// Monic greatest common divisor. Tries the heuristic integer gcd first.
inline Poly gcd(const Poly& a, const Poly& b) {
    const std::size_t n = a.nvars();
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly::constant(n, 1);
    if (a == b) return a.monic();
    if (auto h = detail::heuristic_gcd(detail::clear_denominators(a), detail::clear_denominators(b))) return h->monic();
    return prs_gcd(a, b);
}

}  // namespace gorms
