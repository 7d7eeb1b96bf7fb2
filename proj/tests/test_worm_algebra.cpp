#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace gorms;
using gorms::testing::Gen;

TEST_CASE("context: generator tables") {
    const Context c1 = make_context(1, 3);
    CHECK(c1.num_generators() == 3);
    CHECK(c1.num_odd() == 3);
    CHECK(c1.generator(0).name == "d1(x1)");

    const Context c2 = make_context(2, 1);
    REQUIRE(c2.num_generators() == 3);
    CHECK(c2.generator(0).name == "d1(x1)");
    CHECK(c2.generator(1).name == "d12(x1)");
    CHECK(c2.generator(2).name == "d2(x1)");
    CHECK_FALSE(c2.generator(1).odd);

    const Context c3 = make_context(3, 1);
    REQUIRE(c3.num_generators() == 7);
    // Subsets by |S|: {1},{2},{3} odd, pairs even, {1,2,3} odd.
    int odd = 0;
    for (std::size_t g = 0; g < 7; ++g) odd += c3.generator(g).odd;
    CHECK(odd == 4);
    CHECK(c3.generator(c3.find(0, 7u)).odd);
    CHECK_FALSE(c3.generator(c3.find(0, 5u)).odd);

    CHECK_THROWS(make_context(0, 1));
    CHECK_THROWS(make_context(1, 0));
}

TEST_CASE("context: odd order puts xi_1 before xi_2 per coordinate") {
    const Context ctx = make_context(2, 2);
    const auto x11 = ctx.generator(ctx.find(0, 1u)).slot, x21 = ctx.generator(ctx.find(0, 2u)).slot;
    const auto x12 = ctx.generator(ctx.find(1, 1u)).slot;
    CHECK(x11 < x21);
    CHECK(x21 < x12);
}

TEST_CASE("mul: Koszul signs and nilpotency") {
    const Context ctx = make_context(2, 1);
    const Elem x1 = parse_elem(ctx, "d1(x1)"), x2 = parse_elem(ctx, "d2(x1)"), y = parse_elem(ctx, "d12(x1)");
    const Elem x12 = x1 * x2;
    CHECK(x2 * x1 == -x12);
    CHECK((x1 * x1).is_zero());
    CHECK(y * y == parse_elem(ctx, "d12(x1)^2"));
    CHECK(y * x1 == x1 * y);

    const Context ctx2 = make_context(2, 2);
    const Elem a = parse_elem(ctx2, "x1*d1(x1)"), b = parse_elem(ctx2, "x2*d2(x1)");
    const Elem prod = a * b;
    REQUIRE(prod.terms().size() == 1);
    CHECK(prod.terms().begin()->second == Coef::variable(2, 0) * Coef::variable(2, 1));
    CHECK(prod == parse_elem(ctx2, "x1*x2*d1(x1)*d2(x1)"));
    CHECK_THROWS(a * parse_elem(ctx, "d1(x1)"));
}

TEST_CASE("multidegree") {
    const Context ctx = make_context(2, 1);
    CHECK(parse_elem(ctx, "d1(x1)").multidegree() == std::vector<int>{1, 0});
    CHECK(parse_elem(ctx, "d12(x1)").multidegree() == std::vector<int>{1, 1});
    CHECK_FALSE(parse_elem(ctx, "d1(x1) + d12(x1)").multidegree().has_value());
    CHECK(parse_elem(ctx, "x1^2 + 1").multidegree() == std::vector<int>{0, 0});
}

TEST_CASE("apply_deriv: Euler operator and differential for n = 1") {
    const Context ctx = make_context(1, 2);
    const Deriv e = euler_op(ctx, 1, 1);
    const Elem xi12 = parse_elem(ctx, "d1(x1)*d1(x2)");
    CHECK(e.apply(xi12) == xi12.scaled(Rational(2)));

    const Context c1 = make_context(1, 1);
    const Elem f = parse_elem(c1, "x1^3/(1+x1)");
    const Coef fp = Coef(parse_elem(c1, "x1^3/(1+x1)").terms().begin()->second).partial(0);
    CHECK(d_op(c1, 1).apply(f) == Elem::constant(c1, fp) * parse_elem(c1, "d1(x1)"));
}

TEST_CASE("apply_deriv: even derivation on the square of an odd element") {
    Gen gen(21);
    const Context ctx = make_context(2, 2);
    const Deriv e = euler_op(ctx, 1, 2);
    for (int t = 0; t < 10; ++t) {
        Elem u = gen.elem(ctx, 3).parity_part(1);
        CHECK((u * u).is_zero());
        CHECK(e.apply(u * u).is_zero());
        CHECK((u * e.apply(u) + e.apply(u) * u).is_zero());
    }
}

TEST_CASE("bracket: n = 1 relations") {
    const Context ctx = make_context(1, 2);
    const Deriv d = d_op(ctx, 1), e = euler_op(ctx, 1, 1);
    CHECK(bracket(e, d) == d);
    CHECK(bracket(d, d).is_zero());
}

TEST_CASE("bracket: [R1, d2] = -E_1^1") {
    for (int m = 1; m <= 3; ++m) {
        const Context ctx = make_context(2, m);
        CHECK(bracket(r_op(ctx, 1), d_op(ctx, 2)) == -euler_op(ctx, 1, 1));
    }
}

TEST_CASE("property: graded commutativity and associativity") {
    Gen gen(22);
    for (int n = 1; n <= 3; ++n) {
        const Context ctx = make_context(n, 2);
        for (int t = 0; t < 15; ++t) {
            const Elem a = gen.homogeneous(ctx, 2), b = gen.homogeneous(ctx, 2), c = gen.elem(ctx, 3);
            const int pa = *a.parity(), pb = *b.parity();
            const Elem ab = a * b, ba = b * a;
            CHECK(ab == ((pa & pb) ? -ba : ba));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
        }
    }
}

TEST_CASE("property: graded Leibniz rule") {
    Gen gen(23);
    for (int n = 1; n <= 2; ++n) {
        const Context ctx = make_context(n, 2);
        std::vector<Deriv> ops;
        for (int a = 1; a <= n; ++a) ops.push_back(d_op(ctx, a));
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) ops.push_back(euler_op(ctx, a, b));
        if (n == 2) {
            ops.push_back(r_op(ctx, 1));
            ops.push_back(r_op(ctx, 2));
        }
        ops.push_back(lie_op(ctx, gen.polynomial_field(2, 2)));
        for (const auto& d : ops)
            for (int t = 0; t < 4; ++t) {
                const Elem u = gen.homogeneous(ctx, 2), v = gen.elem(ctx, 2);
                const bool sign = (d.parity() & *u.parity()) == 1;
                const Elem rhs = d.apply(u) * v + (sign ? -(u * d.apply(v)) : u * d.apply(v));
                CHECK(d.apply(u * v) == rhs);
            }
    }
}

TEST_CASE("property: graded Jacobi identity on structure operators") {
    Gen gen(24);
    const Context ctx = make_context(2, 2);
    std::vector<Deriv> ops{d_op(ctx, 1), d_op(ctx, 2), euler_op(ctx, 1, 1), euler_op(ctx, 1, 2), euler_op(ctx, 2, 1),
                           euler_op(ctx, 2, 2), r_op(ctx, 1), r_op(ctx, 2), lie_op(ctx, gen.polynomial_field(2, 2)),
                           iota_op(ctx, gen.polynomial_field(2, 2))};
    auto sgn = [](int p) { return p % 2 ? Rational(-1) : Rational(1); };
    for (int t = 0; t < 40; ++t) {
        const Deriv& a = ops[static_cast<std::size_t>(gen.uniform(0, 9))];
        const Deriv& b = ops[static_cast<std::size_t>(gen.uniform(0, 9))];
        const Deriv& c = ops[static_cast<std::size_t>(gen.uniform(0, 9))];
        // (-1)^{ac}[a,[b,c]] + (-1)^{ba}[b,[c,a]] + (-1)^{cb}[c,[a,b]] = 0
        const Deriv s1 = bracket(a, bracket(b, c)).scaled(sgn(a.parity() * c.parity()));
        const Deriv s2 = bracket(b, bracket(c, a)).scaled(sgn(b.parity() * a.parity()));
        const Deriv s3 = bracket(c, bracket(a, b)).scaled(sgn(c.parity() * b.parity()));
        CHECK((s1 + s2 + s3).is_zero());
    }
}

TEST_CASE("elem: text round trip") {
    Gen gen(25);
    for (int n = 1; n <= 3; ++n) {
        const Context ctx = make_context(n, 2);
        for (int t = 0; t < 10; ++t) {
            const Elem e = gen.elem(ctx, 4);
            CHECK(parse_elem(ctx, e.to_string()) == e);
        }
    }
    const Context ctx = make_context(2, 1);
    CHECK_THROWS_AS(parse_elem(ctx, "d3(x1)"), ParseError);
    CHECK_THROWS_AS(parse_elem(ctx, "d21(x1)"), ParseError);
    CHECK_THROWS_AS(parse_elem(ctx, "x1/d1(x1)"), ParseError);
}
