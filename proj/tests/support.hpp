#pragma once

// Seeded random generators for property tests.

#include "gorms/calculus.hpp"
#include "gorms/parse.hpp"

#include <catch_amalgamated.hpp>

#include <random>

namespace gorms::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return uniform(0, 1) == 1; }

    Rational rational(int span = 5) {
        int den = uniform(1, 3);
        Rational q(uniform(-span, span), den);
        q.canonicalize();
        return q;
    }
    Rational nonzero_rational(int span = 5) {
        Rational q;
        do q = rational(span);
        while (q == 0);
        return q;
    }

    Poly poly(std::size_t nvars, unsigned max_deg, int terms) {
        Poly p(nvars);
        for (int t = 0; t < terms; ++t) {
            Exponents ex;
            unsigned budget = static_cast<unsigned>(uniform(0, static_cast<int>(max_deg)));
            for (unsigned k = 0; k < budget; ++k) ex.e[static_cast<std::size_t>(uniform(0, static_cast<int>(nvars) - 1))] += 1;
            p += Poly::monomial(nvars, ex, rational());
        }
        return p;
    }
    Coef polynomial_coef(std::size_t nvars, unsigned max_deg = 2) { return Coef(poly(nvars, max_deg, uniform(1, 3))); }
    Coef coef(std::size_t nvars, unsigned max_deg = 2) {
        Poly den;
        do den = poly(nvars, 1, uniform(1, 2)) + Poly::constant(nvars, uniform(1, 3));
        while (den.is_zero());
        return Coef(poly(nvars, max_deg, uniform(1, 3)), den);
    }
    Coef nonzero_coef(std::size_t nvars) {
        Coef c;
        do c = coef(nvars);
        while (c.is_zero());
        return c;
    }

    /// Random monomial times random coefficient; homogeneous per term only.
    Elem elem(const Context& ctx, int terms, bool rational_coefs = true) {
        Elem e(ctx);
        for (int t = 0; t < terms; ++t) e += term(ctx, rational_coefs);
        return e;
    }
    Elem term(const Context& ctx, bool rational_coefs = true) {
        Elem e = Elem::constant(ctx, rational_coefs ? coef(ctx.nvars(), 1) : polynomial_coef(ctx.nvars()));
        const int factors = uniform(0, 3);
        for (int f = 0; f < factors; ++f)
            e *= Elem::generator(ctx, static_cast<std::size_t>(uniform(0, static_cast<int>(ctx.num_generators()) - 1)));
        return e;
    }
    /// Homogeneous element of a random multidegree built from generator products.
    Elem homogeneous(const Context& ctx, int terms) {
        Elem seed = term(ctx);
        while (seed.is_zero()) seed = term(ctx);
        const Monomial shape = seed.terms().begin()->first;
        Elem e(ctx);
        for (int t = 0; t < terms; ++t) e += Elem::term(ctx, shape, coef(ctx.nvars(), 1));
        return e;
    }

    VectorField polynomial_field(std::size_t m, unsigned max_deg) {
        VectorField v;
        for (std::size_t i = 0; i < m; ++i) v.push_back(Coef(poly(m, max_deg, uniform(1, 4))));
        return v;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline Coef C(const std::string& text, const std::vector<std::string>& names) { return parse_coef(text, names); }

}  // namespace gorms::testing

template <>
struct Catch::StringMaker<gorms::Coef> {
    static std::string convert(const gorms::Coef& c) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < c.nvars(); ++i) names.push_back("x" + std::to_string(i + 1));
        return c.to_string(names);
    }
};
template <>
struct Catch::StringMaker<gorms::Elem> {
    static std::string convert(const gorms::Elem& e) { return e.ctx().valid() ? e.to_string() : "0"; }
};
template <>
struct Catch::StringMaker<gorms::Deriv> {
    static std::string convert(const gorms::Deriv& d) { return d.ctx().valid() ? d.to_string() : "0"; }
};
