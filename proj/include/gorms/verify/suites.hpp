#pragma once

// Invariant suites shared by `gorms check` and the acceptance binary. Each
// check compares two independently computed quantities; random inputs come
// from fixed seeds so every run is identical.

#include "gorms/cohomology.hpp"
#include "gorms/integrate.hpp"
#include "gorms/parse.hpp"
#include "gorms/rep_theory.hpp"
#include "gorms/verify/theta_fields.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gorms::verify {

struct CheckLine {
    std::string label;
    bool ok = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckLine> checks;

    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.ok; });
    }
    [[nodiscard]] std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckLine& c) { return !c.ok; }));
    }
    void add(std::string label, bool ok, std::string detail = {}) { checks.push_back({std::move(label), ok, std::move(detail)}); }
};

namespace detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    Rational rational(int span = 5) {
        Rational q(uniform(-span, span), uniform(1, 3));
        q.canonicalize();
        return q;
    }
    Poly poly(std::size_t nvars, unsigned max_deg, int terms) {
        Poly p(nvars);
        for (int t = 0; t < terms; ++t) {
            Exponents ex;
            const int budget = uniform(0, static_cast<int>(max_deg));
            for (int k = 0; k < budget; ++k) ex.e[static_cast<std::size_t>(uniform(0, static_cast<int>(nvars) - 1))] += 1;
            p += Poly::monomial(nvars, ex, rational());
        }
        return p;
    }
    Coef coef(std::size_t nvars) {
        Poly den;
        do den = poly(nvars, 1, uniform(1, 2)) + Poly::constant(nvars, uniform(1, 3));
        while (den.is_zero());
        return Coef(poly(nvars, 2, uniform(1, 3)), den);
    }
    VectorField polynomial_field(std::size_t m, unsigned max_deg) {
        VectorField v;
        for (std::size_t i = 0; i < m; ++i) v.push_back(Coef(poly(m, max_deg, uniform(1, 4))));
        return v;
    }
    Elem elem(const Context& ctx, int terms) {
        Elem e(ctx);
        for (int t = 0; t < terms; ++t) {
            Elem term = Elem::constant(ctx, Coef(poly(ctx.nvars(), 2, uniform(1, 3))));
            const int factors = uniform(0, 3);
            for (int f = 0; f < factors; ++f)
                term *= Elem::generator(ctx, static_cast<std::size_t>(uniform(0, static_cast<int>(ctx.num_generators()) - 1)));
            e += term;
        }
        return e;
    }
    CoordChange coord_change(int m) {
        CoordChange c;
        do {
            c.clear();
            for (int i = 0; i < m; ++i)
                c.push_back(Coef::variable(static_cast<std::size_t>(m), static_cast<std::size_t>(i)) +
                            Coef(poly(static_cast<std::size_t>(m), 2, uniform(1, 3))));
        } while (jacobian_determinant(c).is_zero());
        return c;
    }

private:
    std::mt19937_64 eng_;
};

// Sum of coordinate fields with random coefficients, homogeneous of degree deg (n = 1).
inline Deriv random_derivation(Rng& rng, const Context& ctx, int deg) {
    Deriv d(ctx, (deg + 2) & 1, {deg});
    for (const Deriv& b : coordinate_fields(ctx)) {
        const int need = deg - b.shift()[0];
        if (need < 0 || rng.uniform(0, 2) == 0) continue;
        Elem coef = Elem::constant(ctx, rng.coef(ctx.nvars()));
        for (int k = 0; k < need; ++k) coef *= Elem::generator(ctx, ctx.find(rng.uniform(0, ctx.m() - 1), 1u));
        if (coef.is_zero()) continue;
        d = d + b.left_multiplied(coef);
    }
    return d;
}

}  // namespace detail

/// All graded brackets among d_a, E_a^b, R_a against the Grassmann vector-field oracle.
inline SuiteResult brackets_suite(int m = 3) {
    SuiteResult r{"brackets", {}};
    const Context ctx = make_context(2, m);
    for (const auto& c : bracket_table(ctx)) r.add(c.lhs + " = " + c.rhs + " (m=" + std::to_string(m) + ")", c.ok);
    const Deriv lhs = bracket(r_op(ctx, 1), d_op(ctx, 2));
    r.add("[R1,d2] = -E1^1 explicit (m=" + std::to_string(m) + ")", lhs == -euler_op(ctx, 1, 1));
    return r;
}

/// [d, theta.L_v] = L_v for n = 1 and [d_1, [d_2, i_v]] = L_v for n = 2.
inline SuiteResult cartan_suite(int trials = 20, std::uint64_t seed = 101) {
    SuiteResult r{"cartan", {}};
    detail::Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int m = 1 + t % 3;
        const Context c1 = make_context(1, m), c2 = make_context(2, m);
        const VectorField v = rng.polynomial_field(static_cast<std::size_t>(m), 3);
        const Deriv lv1 = lie_op(c1, v);
        r.add("n=1 Cartan, field " + std::to_string(t) + " (m=" + std::to_string(m) + ")",
              bracket(theta_flat(c1, 1), theta_contract(c1, 1u, lv1)) == lv1 &&
                  bracket(d_op(c1, 1), iota_op(c1, v)) == lv1);
        r.add("n=2 [d1,[d2,i_v]] = L_v, field " + std::to_string(t) + " (m=" + std::to_string(m) + ")",
              bracket(d_op(c2, 1), bracket(d_op(c2, 2), iota_op(c2, v))) == lie_op(c2, v));
    }
    return r;
}

/// Functoriality, multiplicativity and d_a-commutation of pullbacks; the y-image
/// against the explicit second-derivative transition formula.
inline SuiteResult pullback_suite(int trials = 10, std::uint64_t seed = 202) {
    SuiteResult r{"pullback", {}};
    detail::Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int m = 1 + t % 2, n = 1 + t % 3;
        const Context ctx = make_context(n, m);
        const CoordChange phi = rng.coord_change(m), psi = rng.coord_change(m);
        CoordChange phi_psi;
        for (const auto& c : phi) phi_psi.push_back(compose(c, std::span<const Coef>(psi)));
        const Morphism fp = pullback(ctx, phi), fq = pullback(ctx, psi);
        const std::string tag = " change " + std::to_string(t) + " (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
        r.add("functoriality" + tag, pullback(ctx, phi_psi) == fq.after(fp));
        const Elem u = rng.elem(ctx, 2), v = rng.elem(ctx, 2);
        r.add("multiplicative" + tag, fp.apply(u * v) == fp.apply(u) * fp.apply(v));
        bool commutes = true;
        for (int a = 1; a <= n; ++a) commutes = commutes && fp.apply(d_op(ctx, a).apply(u)) == d_op(ctx, a).apply(fp.apply(u));
        r.add("commutes with d_a" + tag, commutes);

        // y~^i = d_j phi^i y^j + d_j d_k phi^i xi_1^j xi_2^k
        const Context c2 = make_context(2, m);
        const Morphism f2 = pullback(c2, phi);
        bool transition = true;
        for (int i = 0; i < m; ++i) {
            Elem expected(c2);
            for (int j = 0; j < m; ++j) {
                const Coef dj = phi[static_cast<std::size_t>(i)].partial(static_cast<std::size_t>(j));
                expected += Elem::constant(c2, dj) * gen_elem(c2, j, 3u);
                for (int k = 0; k < m; ++k)
                    expected += Elem::constant(c2, dj.partial(static_cast<std::size_t>(k))) * gen_elem(c2, j, 1u) * gen_elem(c2, k, 2u);
            }
            transition = transition && f2.gen(c2.find(i, 3u)) == expected;
        }
        r.add("second-derivative transition term" + tag, transition);
    }
    return r;
}

/// n = 2 anticommutators of theta-contractions and flat fields on the coordinate
/// derivation basis; n = 1 splitting w = w1 + w2 and its uniqueness.
inline SuiteResult clifford_suite(std::uint64_t seed = 303) {
    SuiteResult r{"clifford", {}};
    detail::Rng rng(seed);
    for (int m = 1; m <= 2; ++m) {
        const Context ctx = make_context(2, m);
        bool contraction = true, mixed = true, flat = true;
        for (const Deriv& w : coordinate_fields(ctx))
            for (int a = 1; a <= 2; ++a) {
                const Deriv fa = theta_flat(ctx, a);
                const unsigned ta = subset_bit(a);
                for (int b = 1; b <= 2; ++b) {
                    const unsigned tb = subset_bit(b);
                    const Deriv fb = theta_flat(ctx, b);
                    const Deriv anti = bracket(fa, theta_contract(ctx, tb, w)) + theta_contract(ctx, tb, bracket(fa, w));
                    mixed = mixed && anti == (a == b ? w : Deriv(ctx, w.parity(), w.shift()));
                    contraction = contraction && (theta_contract(ctx, ta, theta_contract(ctx, tb, w)) +
                                                  theta_contract(ctx, tb, theta_contract(ctx, ta, w)))
                                                     .is_zero();
                    flat = flat && (bracket(fa, bracket(fb, w)) + bracket(fb, bracket(fa, w))).is_zero();
                }
            }
        const std::string tag = " (m=" + std::to_string(m) + ")";
        r.add("{theta_a, theta_b} = 0 on the basis" + tag, contraction);
        r.add("{D_a, theta_b} = delta_ab on the basis" + tag, mixed);
        r.add("{D_a, D_b} = 0 on the basis" + tag, flat);
    }
    for (int m = 1; m <= 3; ++m) {
        const Context ctx = make_context(1, m);
        const Deriv dt = theta_flat(ctx, 1);
        for (int t = 0; t < 6; ++t) {
            const Deriv w = detail::random_derivation(rng, ctx, rng.uniform(-1, 2));
            const Split s = split_derivation_n1(w);
            const bool ok = s.w1 + s.w2 == w && bracket(dt, s.w1).is_zero() && theta_contract(ctx, 1u, s.w2).is_zero();
            // uniqueness: a second decomposition differs by u with [D, u] = 0 and theta.u = 0,
            // and such u vanish: u = [D, theta.u] + theta.[D, u]
            const Deriv u = s.w1 - bracket(dt, theta_contract(ctx, 1u, s.w1));
            r.add("split w = w1 + w2, derivation " + std::to_string(t) + " (m=" + std::to_string(m) + ")", ok && u.is_zero());
        }
    }
    return r;
}

/// tilde_dim against highest-weight kernels, Mat(2) support, report remainders.
inline SuiteResult rep_suite() {
    SuiteResult r{"rep", {}};
    for (int m = 1; m <= 4; ++m)
        for (int c2 = 1; c2 <= 3; ++c2) {
            bool ok = true;
            std::string bad;
            for (int c1 = c2; c1 <= c2 + m + 1; ++c1) {
                const YoungTable t = YoungTable::from_columns(c1, c2);
                const auto [p, q] = kernel_bidegree(t, RaisingConvention::E12);
                const std::size_t k = hw_kernel_dim(m, p, q);
                if (tilde_dim(t, m) != static_cast<unsigned long>(k)) {
                    ok = false;
                    bad += " " + t.to_string();
                }
            }
            r.add("tilde_dim = hw kernel, c2=" + std::to_string(c2) + " (m=" + std::to_string(m) + ")", ok, bad);
        }
    const YoungTable box = YoungTable::from_columns(2, 2);
    const auto pieces = tetris_sequence(box);
    r.add("(2,2) at m=2: tilde_dim = 1 + 4 = 5",
          tilde_dim(box, 2) == 5 && pieces.size() == 2 && schur_dim(pieces[0], 2) == 1 && schur_dim(pieces[1], 2) == 4 &&
              hw_kernel_dim(2, 2, 2) == 5);
    for (int m = 1; m <= 3; ++m) {
        bool ok = true;
        for (int total = 0; total <= 5; ++total)
            for (int p = 0; p <= total; ++p) {
                const int q = total - p;
                const int hi = std::max(p, q), lo = std::min(p, q);
                const RaisingConvention c = p >= q ? RaisingConvention::E12 : RaisingConvention::E21;
                const std::size_t k = c == RaisingConvention::E12 ? mat2_hw_dim(m, hi, lo, c) : mat2_hw_dim(m, lo, hi, c);
                ok = ok && mat2_support(p, q, m) == (k > 0);
            }
        r.add("mat2_support = nonvanishing Mat(2) kernel, p+q <= 5 (m=" + std::to_string(m) + ")", ok);
    }
    for (int m = 1; m <= 3; ++m) {
        const DecomposeReport rep = decompose_report(m, 5);
        r.add("decompose remainders nonnegative to degree 5 (m=" + std::to_string(m) + ")", rep.consistent());
    }
    return r;
}

inline SuiteResult cohomology_suite() {
    SuiteResult r{"cohomology", {}};
    const Context c2 = make_context(2, 1);
    const BettiReport rb = betti(r_op(c2, 1), {3, true}, "r1");
    r.add("R1 on m=1 fibers: stable Betti {(0,0):1, (0,1):1}",
          rb.all_stable() && rb.stable_betti() == std::map<std::vector<int>, std::size_t>{{{0, 0}, 1}, {{0, 1}, 1}});
    const BettiReport pl = betti(d_op(make_context(1, 1), 1), {4, false}, "d");
    const auto deg = pl.by_total_degree();
    r.add("polynomial Poincare lemma on R: H0 = 1, H1 = 0",
          pl.all_stable() && deg.size() == 1 && deg.count(0) && deg.at(0) == 1);
    for (int m = 1; m <= 2; ++m)
        for (bool constant : {true, false}) {
            const InducedCheck e = induced_map_zero(r_op(make_context(2, m), 1), euler_op(make_context(2, m), 1, 1), {3, constant});
            r.add(std::string("E1^1 induces zero on R1-cohomology (m=") + std::to_string(m) + ", " +
                      (constant ? "constant" : "polynomial") + " coefficients)",
                  e.commutes && e.zero_on_cohomology && e.classes_checked > 0);
        }
    return r;
}

/// Test gorms e^{-|x|^2 - y^T B y} P used by the Stokes suite.
struct StokesCase {
    int m;
    std::string exponent;  // -y^T B y
    std::string poly;
};

inline std::vector<StokesCase> stokes_cases() {
    return {
        {1, "-d12(x1)^2", "x1*d2(x1) + x1^2*d1(x1) + d12(x1)*d2(x1) + d12(x1)*d1(x1)"},
        {1, "-2*d12(x1)^2", "(1+x1)*d2(x1) + x1*d1(x1) + x1*d12(x1)*d2(x1) + (x1^2 - 1)*d12(x1)*d1(x1)"},
        {1, "-d12(x1)^2", "(1 + x1^3)*d12(x1)^2*d1(x1) + d2(x1) + x1*d12(x1)^2*d2(x1) + d1(x1)"},
        {2, "-d12(x1)^2 - d12(x1)*d12(x2) - 2*d12(x2)^2",
         "(1 + x1*x2)*d2(x1)*d1(x2)*d2(x2) + x2^2*d12(x1)*d1(x1)*d2(x2) + x1*d1(x1)*d2(x1)*d1(x2) + d12(x2)*d1(x1)*d1(x2)*d2(x1)"},
        {2, "-3/2*d12(x1)^2 - d12(x2)^2",
         "x1*d12(x2)*d1(x1)*d2(x1)*d1(x2) + d2(x1)*d1(x2)*d2(x2) + x2*d1(x1)*d2(x1)*d2(x2) + x1*x2*d1(x1)*d1(x2)*d2(x2)"},
    };
}

inline SuiteResult stokes_suite(unsigned workers = 0, double tol = 1e-9) {
    SuiteResult r{"stokes", {}};
    QuadSettings s;
    s.nodes = 60;
    s.workers = workers;
    int idx = 0;
    for (const auto& c : stokes_cases()) {
        const Context ctx = make_context(2, c.m);
        PseudoGorm g = exp_gorm(parse_elem(ctx, c.exponent));
        g.gaussian_x = true;
        g.poly = parse_elem(ctx, c.poly);
        const std::pair<const char*, Deriv> ops[] = {{"d1", d_op(ctx, 1)}, {"d2", d_op(ctx, 2)}, {"R1", r_op(ctx, 1)}, {"R2", r_op(ctx, 2)}};
        for (const auto& [name, d] : ops) {
            // a vanishing top coefficient would make the check vacuous
            const bool top = !berezin_top(apply_deriv(d, g).poly).is_zero();
            const double v = stokes_check(d, g, Domain::gaussian(), s);
            std::ostringstream os;
            os << "value " << v << (top ? "" : ", no top-degree content");
            r.add(std::string("integral of ") + name + "(gorm " + std::to_string(idx) + ") = 0", top && std::abs(v) < tol, os.str());
        }
        ++idx;
    }
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"brackets", "cartan", "pullback", "clifford", "rep", "cohomology", "stokes"};
    return names;
}

inline SuiteResult run_suite(const std::string& name, unsigned workers = 0) {
    if (name == "brackets") return brackets_suite();
    if (name == "cartan") return cartan_suite();
    if (name == "pullback") return pullback_suite();
    if (name == "clifford") return clifford_suite();
    if (name == "rep") return rep_suite();
    if (name == "cohomology") return cohomology_suite();
    if (name == "stokes") return stokes_suite(workers);
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace gorms::verify
