#include "support.hpp"

#include "gorms/integrate.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace gorms;
using gorms::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Elem E(const Context& ctx, const std::string& s) { return parse_elem(ctx, s); }

MetricSpec metric_from(const std::vector<std::string>& coords, const std::vector<std::vector<std::string>>& rows, Domain d) {
    MetricSpec g;
    g.dim = static_cast<int>(coords.size());
    g.coords = coords;
    for (const auto& r : rows) {
        g.metric.emplace_back();
        for (const auto& c : r) g.metric.back().push_back(parse_coef(c, coords));
    }
    g.domain = std::move(d);
    return g;
}

MetricSpec sphere() {
    return metric_from({"u", "v"}, {{"4/(1+u^2+v^2)^2", "0"}, {"0", "4/(1+u^2+v^2)^2"}}, Domain::plane());
}

// Coefficients of an element at a rational point.
std::map<Monomial, Rational> at_point(const Elem& e, const std::vector<Rational>& p) {
    std::map<Monomial, Rational> out;
    for (const auto& [mono, c] : e.terms()) {
        Rational v = c.eval_exact(p);
        if (v != 0) out[mono] = v;
    }
    return out;
}

}  // namespace

TEST_CASE("d1d2_beta: one-dimensional metrics") {
    const Context ctx = make_context(2, 1);
    MetricSpec flat = metric_from({"x1"}, {{"1"}}, Domain::plane());
    CHECK(d1d2_beta(ctx, flat) == E(ctx, "-d12(x1)^2"));
    MetricSpec b = metric_from({"x1"}, {{"1 + x1^2"}}, Domain::plane());
    // b' = 2x
    CHECK(d1d2_beta(ctx, b) == E(ctx, "-(1+x1^2)*d12(x1)^2 - 2*x1*d12(x1)*d1(x1)*d2(x1)"));
    CHECK_THROWS(d1d2_beta(make_context(2, 2), b));
}

TEST_CASE("d1d2_beta: yy part equals -b for random metrics") {
    Gen gen(41);
    for (int t = 0; t < 6; ++t) {
        const int m = gen.uniform(1, 3);
        const Context ctx = Context::make(2, m);
        MetricSpec g;
        g.dim = m;
        g.coords = ctx.coord_names();
        g.metric.assign(static_cast<std::size_t>(m), std::vector<Coef>(static_cast<std::size_t>(m)));
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) g.metric[i][j] = g.metric[j][i] = gen.coef(static_cast<std::size_t>(m), 2);
        const Elem e = d1d2_beta(ctx, g);
        CHECK(e.multidegree() == std::vector<int>{2, 2});
        Elem yy(ctx);
        for (const auto& [mono, c] : e.terms())
            if (mono.odd == 0) yy.add_term(mono, c);
        CHECK(yy == gaussian_exponent(ctx, g.metric));
    }
}

TEST_CASE("curvature: flat, sphere, symmetries") {
    const MetricSpec flat = metric_from({"u", "v"}, {{"1", "0"}, {"0", "1"}}, Domain::plane());
    const Riemann rf = curvature(flat.metric);
    for (const auto& a : rf)
        for (const auto& b : a)
            for (const auto& c : b)
                for (const auto& d : c) CHECK(d.is_zero());

    const Riemann rs = curvature(sphere().metric);
    const std::vector<Rational> origin{0, 0};
    CHECK(rs[0][1][0][1].eval_exact(origin) == 16);
    // Constant curvature 1 everywhere: R_1212 = det b.
    CHECK(rs[0][1][0][1] == determinant(sphere().metric));

    const MetricSpec g = metric_from({"x", "y", "z"},
                                     {{"1 + x^2", "y/2", "0"}, {"y/2", "2 + z", "x*z"}, {"0", "x*z", "1/(1+y^2)"}},
                                     Domain::plane());
    const Riemann r = curvature(g.metric);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l) {
                    CHECK(r[i][j][k][l] == -r[j][i][k][l]);
                    CHECK(r[i][j][k][l] == -r[i][j][l][k]);
                    CHECK(r[i][j][k][l] == r[k][l][i][j]);
                    CHECK((r[i][j][k][l] + r[i][k][l][j] + r[i][l][j][k]).is_zero());
                }
    CHECK_THROWS(curvature({{Coef(1)}}));
}

TEST_CASE("normal-coordinate identity at a point where dg vanishes") {
    // With R^m_jkl = d_k G^m_lj - ..., d1 d2 beta = -b_ij y^i y^j + (1/2) R_ijkl xi1^i xi1^j xi2^k xi2^l
    // at such a point (the identity with -1/2 uses the opposite index convention R_ijlk).
    const std::vector<MetricSpec> metrics{
        sphere(), metric_from({"u", "v"}, {{"1 + u^2 + 3*v^2", "u*v"}, {"u*v", "2 - u^2"}}, Domain::plane()),
        metric_from({"a", "b", "c"}, {{"1 + b^2", "a*c", "0"}, {"a*c", "1", "b^2/2"}, {"0", "b^2/2", "3 + a*b"}},
                    Domain::plane())};
    for (const auto& g : metrics) {
        const Context ctx = Context::make(2, g.dim, g.coords);
        const std::vector<Rational> origin(static_cast<std::size_t>(g.dim), Rational(0));
        for (const auto& row : g.metric)
            for (const auto& c : row)
                for (std::size_t k = 0; k < origin.size(); ++k) REQUIRE(c.partial(k).eval_exact(origin) == 0);
        const Riemann r = curvature(g.metric);
        Elem expected = gaussian_exponent(ctx, g.metric);
        const std::size_t m = origin.size();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k)
                    for (std::size_t l = 0; l < m; ++l) {
                        const Elem mono = gen_elem(ctx, static_cast<int>(i), 1u) * gen_elem(ctx, static_cast<int>(j), 1u) *
                                          gen_elem(ctx, static_cast<int>(k), 2u) * gen_elem(ctx, static_cast<int>(l), 2u);
                        expected += mono.scaled(r[i][j][k][l].scaled(Rational(1, 2)));
                    }
        CHECK(at_point(d1d2_beta(ctx, g), origin) == at_point(expected, origin));
    }
}

TEST_CASE("exp_gorm") {
    const Context ctx = make_context(2, 1);
    const PseudoGorm a = exp_gorm(E(ctx, "-d12(x1)^2"));
    CHECK(a.b[0][0].is_one());
    CHECK(a.poly == E(ctx, "1"));
    const PseudoGorm b = exp_gorm(E(ctx, "-d12(x1)^2 + (x1+2)*d1(x1)*d2(x1)"));
    CHECK(b.poly == E(ctx, "1 + (x1+2)*d1(x1)*d2(x1)"));
    CHECK_THROWS_WITH(exp_gorm(E(ctx, "-d12(x1)^2 + x1")), "non-Gaussian even part");
    CHECK_THROWS_WITH(exp_gorm(E(ctx, "d12(x1)")), "non-Gaussian even part");

    const Context c2 = make_context(2, 2);
    const PseudoGorm s = exp_gorm(d1d2_beta(c2, sphere()));
    unsigned max_y = 0;
    for (const auto& [mono, c] : s.poly.terms()) max_y = std::max(max_y, mono.even_degree());
    CHECK(max_y <= 2);
    CHECK(s.b == sphere().metric);
    // Cross-check the series against direct powers: N^5 = 0 with four odd generators.
    Elem n(c2);
    const Elem full = d1d2_beta(c2, sphere());
    for (const auto& [mono, c] : full.terms())
        if (mono.odd) n.add_term(mono, c);
    CHECK(n.pow(3).is_zero());
    CHECK(s.poly == E(c2, "1") + n + (n * n).scaled(Rational(1, 2)));
}

TEST_CASE("berezin_top") {
    const Context ctx = make_context(2, 1);
    CHECK(berezin_top(E(ctx, "d1(x1)*d2(x1)")) == E(ctx, "1"));
    CHECK(berezin_top(E(ctx, "d2(x1)*d1(x1)")) == E(ctx, "-1"));
    CHECK(berezin_top(E(ctx, "d12(x1)")).is_zero());
    CHECK(berezin_top(E(ctx, "x1*d12(x1)^2*d1(x1)*d2(x1) + d1(x1)")) == E(ctx, "x1*d12(x1)^2"));
}

TEST_CASE("property: berezin_top after multiplying by an odd generator") {
    Gen gen(42);
    const Context ctx = make_context(2, 2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t slot = static_cast<std::size_t>(gen.uniform(0, static_cast<int>(ctx.num_odd()) - 1));
        const Elem g = Elem::generator(ctx, ctx.odd_id(slot));
        const Elem u = gen.elem(ctx, 4);
        // coefficient of top in g*u = sign * coefficient of (top without g) in u
        const std::uint64_t top = ctx.chart_top_mask(), rest = top & ~(std::uint64_t{1} << slot);
        Elem expected(ctx);
        for (const auto& [mono, c] : u.terms()) {
            if (mono.odd != rest) continue;
            Monomial even = mono;
            even.odd = 0;
            const int ahead = std::popcount(rest & ((std::uint64_t{1} << slot) - 1));
            expected.add_term(even, ahead % 2 ? -c : c);
        }
        CHECK(berezin_top(g * u) == expected);
    }
}

TEST_CASE("wick: moments") {
    const Context ctx = make_context(2, 1);
    const CoefMatrix one{{Coef(1, 1)}};
    const std::vector<double> x0{0.0};
    CHECK(wick(one, E(ctx, "1")).rat.is_one());
    CHECK(wick(one, E(ctx, "1")).value(x0) == Catch::Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK(wick(one, E(ctx, "d12(x1)^2")).rat == Coef(1, Rational(1, 2)));
    CHECK(wick(one, E(ctx, "d12(x1)^3")).rat.is_zero());
    CHECK_THROWS(wick({{Coef(1)}}, E(ctx, "1")));

    const Context c2 = make_context(2, 2);
    const CoefMatrix b{{Coef(2, 2), Coef(2, Rational(1, 2))}, {Coef(2, Rational(1, 2)), Coef(2, 1)}};
    const CoefMatrix binv = inverse(b);
    CHECK(wick(b, E(c2, "d12(x1)*d12(x2)")).rat == binv[0][1].scaled(Rational(1, 2)));
}

namespace {

// Direct tensor trapezoid integration of q(y) exp(-y^T B y) over a box.
double brute_gaussian(const std::vector<std::vector<double>>& b, const std::function<double(const std::vector<double>&)>& q) {
    const std::size_t k = b.size();
    const int n = k == 2 ? 400 : 90;
    const double lim = 9.0, h = 2 * lim / n;
    double total = 0;
    std::vector<int> idx(k, 0);
    std::vector<double> y(k);
    for (;;) {
        double quad = 0;
        for (std::size_t i = 0; i < k; ++i) y[i] = -lim + h * idx[i];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) quad += b[i][j] * y[i] * y[j];
        total += q(y) * std::exp(-quad);
        std::size_t a = 0;
        while (a < k && ++idx[a] > n) idx[a++] = 0;
        if (a == k) break;
    }
    return total * std::pow(h, static_cast<double>(k));
}

}  // namespace

TEST_CASE("property: Wick agrees with direct Gaussian integration") {
    Gen gen(43);
    for (int t = 0; t < 6; ++t) {
        const int k = t < 4 ? 2 : 3;
        const Context ctx = make_context(2, k);
        // B = A^T A + I with small rational A
        std::vector<std::vector<Rational>> a(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
        for (auto& row : a)
            for (auto& v : row) v = Rational(gen.uniform(-2, 2), 2);
        CoefMatrix b(static_cast<std::size_t>(k), std::vector<Coef>(static_cast<std::size_t>(k)));
        std::vector<std::vector<double>> bd(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                Rational s = i == j ? 1 : 0;
                for (int p = 0; p < k; ++p) s += a[p][i] * a[p][j];
                b[i][j] = Coef(static_cast<std::size_t>(k), s);
                bd[i][j] = s.get_d();
            }
        // random y-polynomial of degree <= 4
        Elem q(ctx);
        std::vector<std::pair<std::vector<int>, double>> terms;
        for (int r = 0; r < 4; ++r) {
            std::vector<int> ex(static_cast<std::size_t>(k), 0);
            const int deg = gen.uniform(0, 4);
            for (int d = 0; d < deg; ++d) ex[static_cast<std::size_t>(gen.uniform(0, k - 1))] += 1;
            const Rational c = gen.nonzero_rational();
            Elem mono = Elem::constant(ctx, c);
            for (int i = 0; i < k; ++i) mono *= even_slot_elem(ctx, static_cast<std::size_t>(i)).pow(static_cast<unsigned>(ex[i]));
            q += mono;
            terms.emplace_back(ex, c.get_d());
        }
        const auto poly = [&](const std::vector<double>& y) {
            double s = 0;
            for (const auto& [ex, c] : terms) {
                double v = c;
                for (std::size_t i = 0; i < ex.size(); ++i) v *= std::pow(y[i], ex[i]);
                s += v;
            }
            return s;
        };
        const std::vector<double> x0(static_cast<std::size_t>(k), 0.0);
        const double exact = wick(b, q).value(x0);
        const double direct = brute_gaussian(bd, poly);
        CHECK(std::abs(exact - direct) <= 1e-6 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("quadrature examples") {
    QuadSettings s;
    s.nodes = 60;
    const auto one = [](std::span<const double>) { return 1.0; };
    CHECK(std::abs(quadrature(one, Domain::gaussian(), 1, s).value - std::sqrt(kPi)) < 1e-9);
    const auto box = quadrature(one, Domain::rectangle({0, 0}, {1, 1}), 2, s);
    CHECK(std::abs(box.value - 1.0) < 1e-13);
    s.nodes = 400;
    const auto area = quadrature(
        [](std::span<const double> x) {
            const double d = 1 + x[0] * x[0] + x[1] * x[1];
            return 4 / (d * d);
        },
        Domain::plane(), 2, s);
    CHECK(std::abs(area.value - 4 * kPi) < 1e-6);
    CHECK(area.error_estimate < 1e-6);
    const auto line = quadrature([](std::span<const double> x) { return 1 / (1 + x[0] * x[0]); }, Domain::plane(), 1, s);
    CHECK(std::abs(line.value - kPi) < 1e-8);
    CHECK_THROWS_AS(quadrature([](std::span<const double>) { return std::nan(""); }, Domain::disk(1), 2, s), std::domain_error);

    // Worker count does not change the bits of the result.
    QuadSettings s1 = s, s4 = s;
    s1.workers = 1;
    s4.workers = 4;
    const auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * std::cos(x[1]); };
    CHECK(quadrature(f, Domain::disk(2), 2, s1).value == quadrature(f, Domain::disk(2), 2, s4).value);
}

TEST_CASE("integrate_gorm: Gaussian examples") {
    const Context ctx = make_context(2, 1);
    QuadSettings s;
    s.nodes = 80;
    PseudoGorm g = exp_gorm(E(ctx, "-d12(x1)^2"));
    g.poly = E(ctx, "d1(x1)*d2(x1)");
    g.gaussian_x = true;
    CHECK(std::abs(integrate_gorm(g, Domain::gaussian(), s).value - kPi) < 1e-9);

    PseudoGorm h = exp_gorm(E(ctx, "-2*d12(x1)^2"));
    h.poly = E(ctx, "d1(x1)*d2(x1)");
    h.gaussian_x = true;
    CHECK(std::abs(integrate_gorm(h, Domain::gaussian(), s).value - kPi / std::sqrt(2.0)) < 1e-9);

    PseudoGorm z = g;
    z.poly = E(ctx, "x1*d12(x1) + d1(x1)");
    const auto rz = integrate_gorm(z, Domain::gaussian(), s);
    CHECK(rz.symbolic_zero);
    CHECK(rz.value == 0.0);
    CHECK_THROWS(integrate_gorm(g, Domain::plane(), s));
}

TEST_CASE("Stokes property for Gaussian gorms") {
    const Context ctx = make_context(2, 1);
    QuadSettings s;
    s.nodes = 80;
    PseudoGorm g = exp_gorm(E(ctx, "-d12(x1)^2"));
    g.gaussian_x = true;
    g.poly = E(ctx, "x1*d2(x1)");
    CHECK(std::abs(stokes_check(d_op(ctx, 1), g, Domain::gaussian(), s)) < 1e-9);
    // The applied operator really produces top-degree content.
    CHECK_FALSE(berezin_top(apply_deriv(d_op(ctx, 1), g).poly).is_zero());
    g.poly = E(ctx, "d12(x1)*d2(x1)");
    CHECK(std::abs(stokes_check(r_op(ctx, 1), g, Domain::gaussian(), s)) < 1e-9);

    const Context c2 = make_context(2, 2);
    PseudoGorm h = exp_gorm(E(c2, "-d12(x1)^2 - d12(x1)*d12(x2) - 2*d12(x2)^2"));
    h.gaussian_x = true;
    h.poly = E(c2, "(1 + x1*x2)*d2(x1)*d1(x2)*d2(x2) + x2^2*d12(x1)*d1(x1)*d2(x2)");
    for (const Deriv& d : {d_op(c2, 1), d_op(c2, 2), r_op(c2, 1), r_op(c2, 2)}) {
        CHECK(std::abs(stokes_check(d, h, Domain::gaussian(), s)) < 1e-9);
    }
    for (const Deriv& d : {euler_op(c2, 1, 1), euler_op(c2, 2, 1), euler_op(c2, 1, 2)}) {
        PseudoGorm t = h;
        t.poly = E(c2, "d1(x1)*d1(x2)*d2(x2) + x1*d12(x1)*d2(x1)*d1(x2)*d2(x2)");
        CHECK(std::abs(stokes_check(d, t, Domain::gaussian(), s)) < 1e-9);
    }
}

TEST_CASE("euler_integral: flat chart vanishes symbolically") {
    MetricSpec torus = metric_from({"u", "v"}, {{"1", "0"}, {"0", "1"}}, Domain::rectangle({0, 0}, {1, 1}));
    torus.euler_char = 0;
    const EulerReport r = euler_integral(torus);
    CHECK(r.symbolic_zero);
    CHECK(r.value == 0.0);
    CHECK(r.predicted == 0.0);
}

TEST_CASE("euler_integral: sphere value is chart and metric independent") {
    QuadSettings s;
    s.nodes = 200;
    MetricSpec g = sphere();
    g.euler_char = 2;
    const EulerReport base = euler_integral(g, s);
    REQUIRE(base.predicted.has_value());
    CHECK(*base.predicted == Catch::Approx(-4 * kPi * kPi));
    CHECK(base.value < 0);
    CHECK(base.error_estimate < 1e-6 * std::abs(base.value));

    // (a) the chart u = 2p, v = 2q: pulled-back metric 4 b(2p, 2q)
    MetricSpec scaled = metric_from({"p", "q"}, {{"16/(1+4*p^2+4*q^2)^2", "0"}, {"0", "16/(1+4*p^2+4*q^2)^2"}}, Domain::plane());
    CHECK(euler_integral(scaled, s).value == Catch::Approx(base.value).epsilon(1e-3));
    // (b) conformal perturbation
    MetricSpec pert = metric_from(
        {"u", "v"},
        {{"4/(1+u^2+v^2)^2*(1 + u^2/(10*(1+u^2+v^2)))", "0"}, {"0", "4/(1+u^2+v^2)^2*(1 + u^2/(10*(1+u^2+v^2)))"}},
        Domain::plane());
    CHECK(euler_integral(pert, s).value == Catch::Approx(base.value).epsilon(1e-3));
}

TEST_CASE("metric validation") {
    MetricSpec bad = metric_from({"u", "v"}, {{"1", "u"}, {"0", "1"}}, Domain::plane());
    CHECK_THROWS_WITH(validate_metric(bad), "metric: matrix is not symmetric");
    MetricSpec sing = metric_from({"u", "v"}, {{"1", "1"}, {"1", "1"}}, Domain::plane());
    CHECK_THROWS_WITH(validate_metric(sing), "metric: determinant vanishes identically");
    MetricSpec indefinite = metric_from({"u", "v"}, {{"1", "0"}, {"0", "-1 - u^2"}}, Domain::rectangle({-1, -1}, {1, 1}));
    // curvature nonzero, so the pipeline reaches quadrature and hits the positivity check
    QuadSettings s;
    s.nodes = 10;
    CHECK_THROWS_AS(euler_integral(indefinite, s), std::domain_error);
}
