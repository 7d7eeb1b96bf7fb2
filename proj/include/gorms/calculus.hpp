#pragma once

// Operators of Diff(R^{0|n}) and Diff(M) acting on worms: the differentials
// d_a, the Euler operators E_a^b, R_a, Lie derivatives and contractions,
// theta-contraction of derivations, and algebra morphisms (pullbacks and the
// Mat(2) / full semigroup actions).
//
// Sign convention: d_a, E_a^b, R_a are the operators generating the right
// action, i.e. minus the flat lifts of d/dtheta^a, theta^b d/dtheta^a and
// theta^2 theta^1 d/dtheta^a.

#include "gorms/coef_matrix.hpp"
#include "gorms/worm_algebra.hpp"

#include <array>
#include <functional>

namespace gorms {

using VectorField = std::vector<Coef>;
using CoordChange = std::vector<Coef>;
using Mat2 = std::array<std::array<Rational, 2>, 2>;

inline unsigned subset_bit(int a) { return 1u << (a - 1); }

inline std::vector<int> unit_shift(const Context& ctx, int a, int sign = 1) {
    std::vector<int> s(static_cast<std::size_t>(ctx.n()), 0);
    s[static_cast<std::size_t>(a - 1)] = sign;
    return s;
}

inline Elem gen_elem(const Context& ctx, int coord, unsigned subset) {
    return Elem::generator(ctx, ctx.find(coord, subset));
}

inline void require_small_level(const Context& ctx) {
    if (ctx.n() > 2) throw std::invalid_argument("operator suite limited to n <= 2");
}

/// d_a: odd derivation raising the a-th degree.
inline Deriv d_op(const Context& ctx, int a) {
    if (a < 1 || a > ctx.n()) throw std::out_of_range("direction index out of range");
    Deriv d(ctx, 1, unit_shift(ctx, a));
    const unsigned bit = subset_bit(a);
    for (int i = 0; i < ctx.m(); ++i) {
        d.set_base(static_cast<std::size_t>(i), gen_elem(ctx, i, bit));
        for (unsigned s : ctx.subsets()) {
            if (s & bit) continue;
            const int below = std::popcount(s & (bit - 1));
            Elem img = gen_elem(ctx, i, s | bit);
            d.set_gen(ctx.find(i, s), below % 2 ? -img : img);
        }
    }
    return d;
}

/// E_a^b = xi_a d/dxi_b + delta_ab y d/dy (n = 1 gives E = xi d/dxi).
inline Deriv euler_op(const Context& ctx, int a, int b) {
    require_small_level(ctx);
    if (a < 1 || a > ctx.n() || b < 1 || b > ctx.n()) throw std::out_of_range("direction index out of range");
    std::vector<int> shift(static_cast<std::size_t>(ctx.n()), 0);
    shift[static_cast<std::size_t>(a - 1)] += 1;
    shift[static_cast<std::size_t>(b - 1)] -= 1;
    Deriv e(ctx, 0, shift);
    for (int i = 0; i < ctx.m(); ++i) {
        e.set_gen(ctx.find(i, subset_bit(b)), gen_elem(ctx, i, subset_bit(a)));
        if (a == b && ctx.n() == 2) e.set_gen(ctx.find(i, 3u), gen_elem(ctx, i, 3u));
    }
    return e;
}

/// R_a = xi_a d/dy (n = 2).
inline Deriv r_op(const Context& ctx, int a) {
    if (ctx.n() != 2) throw std::invalid_argument("R_a requires n = 2");
    if (a < 1 || a > 2) throw std::out_of_range("direction index out of range");
    Deriv r(ctx, 1, unit_shift(ctx, 3 - a, -1));
    for (int i = 0; i < ctx.m(); ++i) r.set_gen(ctx.find(i, 3u), gen_elem(ctx, i, subset_bit(a)));
    return r;
}

inline void require_field(const Context& ctx, const VectorField& v) {
    if (v.size() != ctx.nvars()) throw std::invalid_argument("vector field has wrong number of components");
}

/// Lie derivative along a vector field on M, lifted to worms (n <= 2).
inline Deriv lie_op(const Context& ctx, const VectorField& v) {
    require_small_level(ctx);
    require_field(ctx, v);
    const std::size_t m = ctx.nvars();
    Deriv l(ctx, 0, {});
    for (std::size_t i = 0; i < m; ++i) {
        l.set_base(i, Elem::constant(ctx, v[i]));
        std::vector<Coef> dv(m);
        for (std::size_t j = 0; j < m; ++j) dv[j] = v[i].partial(j);
        for (int a = 1; a <= ctx.n(); ++a) {
            Elem img(ctx);
            for (std::size_t j = 0; j < m; ++j) img += gen_elem(ctx, static_cast<int>(j), subset_bit(a)).scaled(dv[j]);
            l.set_gen(ctx.find(static_cast<int>(i), subset_bit(a)), std::move(img));
        }
        if (ctx.n() == 2) {
            Elem img(ctx);
            for (std::size_t j = 0; j < m; ++j) {
                img += gen_elem(ctx, static_cast<int>(j), 3u).scaled(dv[j]);
                for (std::size_t k = 0; k < m; ++k) {
                    Coef h = dv[j].partial(k);
                    if (h.is_zero()) continue;
                    img += (gen_elem(ctx, static_cast<int>(j), 1u) * gen_elem(ctx, static_cast<int>(k), 2u)).scaled(h);
                }
            }
            l.set_gen(ctx.find(static_cast<int>(i), 3u), std::move(img));
        }
    }
    return l;
}

/// Contraction i_v: n = 2 gives v^i d/dy^i (even), n = 1 gives v^i d/dxi^i (odd).
inline Deriv iota_op(const Context& ctx, const VectorField& v) {
    require_small_level(ctx);
    require_field(ctx, v);
    const unsigned top = ctx.n() == 2 ? 3u : 1u;
    std::vector<int> shift(static_cast<std::size_t>(ctx.n()), -1);
    Deriv d(ctx, ctx.n() == 2 ? 0 : 1, shift);
    for (std::size_t i = 0; i < ctx.nvars(); ++i) d.set_gen(ctx.find(static_cast<int>(i), top), Elem::constant(ctx, v[i]));
    return d;
}

/// (d/dtheta^a)^flat, which is -d_a.
inline Deriv theta_flat(const Context& ctx, int a) { return -d_op(ctx, a); }

namespace detail {

// A coordinate vector field: d/dx^i (gen = npos) or d/d(generator).
struct BasisField {
    bool is_base = true;
    std::size_t index = 0;
};

// theta^S . (basis field) as a signed basis field, or nothing when zero.
inline std::optional<std::pair<BasisField, int>> contract_basis(const Context& ctx, unsigned s, BasisField f) {
    if (s == 0) return std::make_pair(f, 1);
    const int n = ctx.n();
    if (f.is_base) {
        const int i = static_cast<int>(f.index);
        if (n == 1) return std::make_pair(BasisField{false, ctx.find(i, 1u)}, -1);
        if (s == 3u) return std::make_pair(BasisField{false, ctx.find(i, 3u)}, 1);
        return std::make_pair(BasisField{false, ctx.find(i, s)}, -1);
    }
    const auto& g = ctx.generator(f.index);
    if (n == 1 || s == 3u || g.coord < 0 || g.subset == 3u || g.subset == s) return std::nullopt;
    // theta^1 . d/dxi_2 = d/dy, theta^2 . d/dxi_1 = -d/dy
    return std::make_pair(BasisField{false, ctx.find(g.coord, 3u)}, s == 1u ? 1 : -1);
}

inline Elem koszul_twist(const Elem& f, unsigned s) {
    if (std::popcount(s) % 2 == 0) return f;
    Elem r(f.ctx());
    for (const auto& [mono, c] : f.terms()) r.add_term(mono, mono.odd_count() % 2 ? -c : c);
    return r;
}

}  // namespace detail

/// Module action of theta^S on derivations (S = {1,2} means theta^2 theta^1).
inline Deriv theta_contract(const Context& ctx, unsigned s, const Deriv& d) {
    require_small_level(ctx);
    if (s >= (1u << ctx.n())) throw std::out_of_range("theta subset out of range");
    std::vector<int> shift = d.shift();
    for (int a = 0; a < ctx.n(); ++a)
        if (s & (1u << a)) shift[static_cast<std::size_t>(a)] -= 1;
    Deriv r(ctx, d.parity() + std::popcount(s), shift);
    auto place = [&](detail::BasisField src, const Elem& coef) {
        if (coef.is_zero()) return;
        auto t = detail::contract_basis(ctx, s, src);
        if (!t) return;
        Elem img = detail::koszul_twist(coef, s);
        if (t->second < 0) img = -img;
        if (t->first.is_base) r.set_base(t->first.index, r.base(t->first.index) + img);
        else r.set_gen(t->first.index, r.gen(t->first.index) + img);
    };
    for (std::size_t i = 0; i < ctx.nvars(); ++i) place({true, i}, d.base(i));
    for (std::size_t g = 0; g < ctx.num_generators(); ++g) place({false, g}, d.gen(g));
    return r;
}

/// The coordinate derivations d/dx^i and d/d(generator), with unit coefficients.
inline std::vector<Deriv> coordinate_fields(const Context& ctx) {
    std::vector<Deriv> out;
    for (std::size_t i = 0; i < ctx.nvars(); ++i) {
        Deriv d(ctx, 0, {});
        d.set_base(i, Elem::constant(ctx, Rational(1)));
        out.push_back(std::move(d));
    }
    for (std::size_t g = 0; g < ctx.num_generators(); ++g) {
        const auto& info = ctx.generator(g);
        std::vector<int> shift = ctx.multidegree(g);
        for (auto& x : shift) x = -x;
        Deriv d(ctx, info.odd ? 1 : 0, shift);
        d.set_gen(g, Elem::constant(ctx, Rational(1)));
        out.push_back(std::move(d));
    }
    return out;
}

struct Split {
    Deriv w1;  // commutes with the differential
    Deriv w2;  // annihilated by theta
};

/// Decomposition D = [D_theta, theta.D] + theta.[D_theta, D] for n = 1.
inline Split split_derivation_n1(const Deriv& d) {
    const Context& ctx = d.ctx();
    if (ctx.n() != 1) throw std::invalid_argument("split requires n = 1");
    const Deriv dt = theta_flat(ctx, 1);
    return {bracket(dt, theta_contract(ctx, 1u, d)), theta_contract(ctx, 1u, bracket(dt, d))};
}

/// Froelicher-Nijenhuis bracket of vector-valued forms given as derivations
/// annihilated by theta (sum A^k_I xi^I d/dxi^k), n = 1.
inline Deriv fn_bracket(const Deriv& k1, const Deriv& k2) {
    const Context& ctx = k1.ctx();
    if (ctx.n() != 1) throw std::invalid_argument("FN bracket requires n = 1");
    if (!theta_contract(ctx, 1u, k1).is_zero() || !theta_contract(ctx, 1u, k2).is_zero())
        throw std::invalid_argument("input not in the ker theta normal form");
    const Deriv dt = theta_flat(ctx, 1);
    return -theta_contract(ctx, 1u, bracket(bracket(dt, k1), bracket(dt, k2)));
}

/// Vector-valued p-form sum_k form_k (x) d/dx^k as its ker-theta derivation.
inline Deriv vector_valued_form(const Context& ctx, const std::vector<Elem>& components) {
    if (ctx.n() != 1) throw std::invalid_argument("vector-valued forms require n = 1");
    if (components.size() != ctx.nvars()) throw std::invalid_argument("wrong number of components");
    std::optional<int> deg;
    for (const auto& c : components) {
        if (c.is_zero()) continue;
        auto md = c.multidegree();
        if (!md || (deg && *deg != (*md)[0])) throw std::invalid_argument("components must share one form degree");
        deg = (*md)[0];
    }
    const int p = deg.value_or(0);
    Deriv d(ctx, p + 1, {p - 1});
    for (std::size_t k = 0; k < ctx.nvars(); ++k) d.set_gen(ctx.find(static_cast<int>(k), 1u), components[k]);
    return d;
}

/// Substitutes body + nilpotent values into a coefficient by finite Taylor expansion:
/// c(a + N) = sum_alpha (d^alpha c)(a) N^alpha / alpha!.
template <class T, class FromCoef>
T taylor_substitute(const Coef& c, std::span<const Coef> body, const std::vector<T>& nil, FromCoef from_coef) {
    T result = from_coef(compose(c, body));
    const std::size_t m = body.size();
    std::function<void(std::size_t, const Coef&, const T&, const Rational&, unsigned)> dfs =
        [&](std::size_t start, const Coef& cur, const T& prod, const Rational& weight, unsigned run) {
            for (std::size_t j = start; j < m; ++j) {
                if (nil[j].is_zero()) continue;
                const Coef dc = cur.partial(j);
                if (dc.is_zero()) continue;
                const T p = prod * nil[j];
                if (p.is_zero()) continue;
                const unsigned r = (j == start && run > 0) ? run + 1 : 1;
                const Rational w = weight / r;
                result += (from_coef(compose(dc, body)) * p).scaled(w);
                dfs(j, dc, p, w, r);
            }
        };
    bool any = false;
    for (const auto& x : nil) any = any || !x.is_zero();
    if (any) {
        T one = from_coef(Coef(c.nvars(), 1));
        dfs(0, c, one, Rational(1), 0);
    }
    return result;
}

/// Algebra morphism between worm algebras, given on coordinates and generators.
class Morphism {
public:
    Morphism() = default;
    Morphism(Context src, Context tgt) : src_(std::move(src)), tgt_(std::move(tgt)) {
        base_.assign(src_.nvars(), Elem(tgt_));
        for (std::size_t i = 0; i < src_.nvars(); ++i) base_[i] = Elem::coordinate(tgt_, i);
        gens_.assign(src_.num_generators(), Elem(tgt_));
        refresh();
    }
    static Morphism identity(const Context& ctx) {
        Morphism f(ctx, ctx);
        for (std::size_t g = 0; g < ctx.num_generators(); ++g) f.gens_[g] = Elem::generator(ctx, g);
        return f;
    }

    [[nodiscard]] const Context& source() const { return src_; }
    [[nodiscard]] const Context& target() const { return tgt_; }
    [[nodiscard]] const Elem& base(std::size_t i) const { return base_.at(i); }
    [[nodiscard]] const Elem& gen(std::size_t g) const { return gens_.at(g); }
    void set_base(std::size_t i, Elem e) {
        base_.at(i) = std::move(e);
        refresh();
    }
    void set_gen(std::size_t g, Elem e) { gens_.at(g) = std::move(e); }

    bool operator==(const Morphism& o) const {
        return src_ == o.src_ && tgt_ == o.tgt_ && base_ == o.base_ && gens_ == o.gens_;
    }

    [[nodiscard]] Elem apply_coef(const Coef& c) const {
        return taylor_substitute(c, std::span<const Coef>(body_), nil_,
                                 [&](const Coef& v) { return Elem::constant(tgt_, v); });
    }

    [[nodiscard]] Elem apply(const Elem& e) const {
        if (!(e.ctx() == src_)) throw std::invalid_argument("mismatched contexts");
        Elem out(tgt_);
        for (const auto& [mono, c] : e.terms()) {
            Elem img = apply_coef(c);
            for (std::size_t slot = 0; slot < mono.even.size() && !img.is_zero(); ++slot)
                if (mono.even[slot]) img *= gens_[src_.even_id(slot)].pow(mono.even[slot]);
            for (std::size_t slot = 0; slot < src_.num_odd() && !img.is_zero(); ++slot)
                if (mono.odd & (std::uint64_t{1} << slot)) img *= gens_[src_.odd_id(slot)];
            out += img;
        }
        return out;
    }

    /// (this o g)(u) = this(g(u)).
    [[nodiscard]] Morphism after(const Morphism& g) const {
        if (!(g.tgt_ == src_)) throw std::invalid_argument("morphisms not composable");
        Morphism r(g.src_, tgt_);
        for (std::size_t i = 0; i < g.base_.size(); ++i) r.base_[i] = apply(g.base_[i]);
        for (std::size_t k = 0; k < g.gens_.size(); ++k) r.gens_[k] = apply(g.gens_[k]);
        r.refresh();
        return r;
    }

private:
    void refresh() {
        body_.assign(base_.size(), Coef(tgt_.nvars()));
        nil_.assign(base_.size(), Elem(tgt_));
        for (std::size_t i = 0; i < base_.size(); ++i) {
            for (const auto& [mono, c] : base_[i].terms()) {
                if (mono.is_unit()) body_[i] = c;
                else if (mono.odd == 0) throw std::invalid_argument("coordinate image has non-nilpotent even part");
                else if (mono.odd_count() % 2) throw std::invalid_argument("coordinate image is not even");
                else nil_[i].add_term(mono, c);
            }
        }
    }

    Context src_, tgt_;
    std::vector<Elem> base_;
    std::vector<Elem> gens_;
    std::vector<Coef> body_;
    std::vector<Elem> nil_;
};

inline Coef jacobian_determinant(const CoordChange& phi) {
    CoefMatrix jac(phi.size(), std::vector<Coef>(phi.size()));
    for (std::size_t i = 0; i < phi.size(); ++i)
        for (std::size_t j = 0; j < phi.size(); ++j) jac[i][j] = phi[i].partial(j);
    return determinant(jac);
}

/// Pullback along x~ = phi(x): commutes with every d_a, so d_S x~^i maps to
/// d_{s1}(...d_{sk}(phi^i)) with s1 < ... < sk.
inline Morphism pullback(const Context& ctx, const CoordChange& phi) {
    if (phi.size() != ctx.nvars()) throw std::invalid_argument("coordinate change has wrong number of components");
    if (jacobian_determinant(phi).is_zero()) throw std::invalid_argument("singular change");
    std::vector<Deriv> ds;
    for (int a = 1; a <= ctx.n(); ++a) ds.push_back(d_op(ctx, a));
    Morphism f(ctx, ctx);
    for (std::size_t i = 0; i < ctx.nvars(); ++i) {
        const Elem xi = Elem::constant(ctx, phi[i]);
        f.set_base(i, xi);
        for (unsigned s : ctx.subsets()) {
            Elem img = xi;
            const auto members = detail::subset_members(s);
            for (auto it = members.rbegin(); it != members.rend(); ++it) img = ds[static_cast<std::size_t>(*it - 1)].apply(img);
            f.set_gen(ctx.find(static_cast<int>(i), s), std::move(img));
        }
    }
    return f;
}

inline Rational det2(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

/// x' = x, xi'_a = a_a^b xi_b, y' = det(A) y, with A[a][b] = a_a^b.
inline Morphism mat2_act(const Context& ctx, const Mat2& a) {
    if (ctx.n() != 2) throw std::invalid_argument("Mat(2) action requires n = 2");
    Morphism f(ctx, ctx);
    for (int i = 0; i < ctx.m(); ++i) {
        for (int r = 0; r < 2; ++r) {
            Elem img(ctx);
            for (int c = 0; c < 2; ++c) img += gen_elem(ctx, i, subset_bit(c + 1)).scaled(a[r][c]);
            f.set_gen(ctx.find(i, subset_bit(r + 1)), std::move(img));
        }
        f.set_gen(ctx.find(i, 3u), gen_elem(ctx, i, 3u).scaled(det2(a)));
    }
    return f;
}

inline const std::vector<std::string>& semigroup_param_names() {
    static const std::vector<std::string> names{"b1", "b2", "g1", "g2"};
    return names;
}

/// Full semigroup action with odd parameters beta^1, beta^2, gamma^1, gamma^2:
///   x'    = x + beta^a xi_a + beta^2 beta^1 y
///   xi'_a = a_a^b xi_b + eps_bc beta^b a_a^c y
///   y'    = (det A + eps_bc beta^b gamma^c) y + gamma^a xi_a
inline Morphism full_act(const Context& ctx, const Mat2& a) {
    if (ctx.n() != 2) throw std::invalid_argument("full semigroup action requires n = 2");
    const Context tgt = ctx.with_params(semigroup_param_names());
    auto p = [&](std::size_t k) { return Elem::generator(tgt, tgt.param(k)); };
    const Elem b1 = p(0), b2 = p(1), g1 = p(2), g2 = p(3);
    Morphism f(ctx, tgt);
    for (int i = 0; i < ctx.m(); ++i) {
        const Elem x1 = gen_elem(tgt, i, 1u), x2 = gen_elem(tgt, i, 2u), y = gen_elem(tgt, i, 3u);
        f.set_base(static_cast<std::size_t>(i), Elem::coordinate(tgt, static_cast<std::size_t>(i)) + b1 * x1 + b2 * x2 + b2 * b1 * y);
        for (int r = 0; r < 2; ++r) {
            Elem img = x1.scaled(a[r][0]) + x2.scaled(a[r][1]) + (b1.scaled(a[r][1]) - b2.scaled(a[r][0])) * y;
            f.set_gen(ctx.find(i, subset_bit(r + 1)), std::move(img));
        }
        const Elem scal = Elem::constant(tgt, det2(a)) + b1 * g2 - b2 * g1;
        f.set_gen(ctx.find(i, 3u), scal * y + g1 * x1 + g2 * x2);
    }
    return f;
}

/// Sets every parameter of a parameter-extended context to zero.
inline Morphism drop_params(const Context& extended) {
    const Context plain = extended.without_params();
    Morphism f(extended, plain);
    for (std::size_t g = 0; g < plain.num_generators(); ++g) f.set_gen(g, Elem::generator(plain, g));
    return f;
}

// ---------------------------------------------------------------------------
// Forms on R^{0|2}: sums theta^T dtheta^E c with c a worm.

/// Sign of theta^T theta^U written in the basis theta^{21} = theta^2 theta^1.
inline int theta_product_sign(unsigned t, unsigned u) {
    if (t & u) return 0;
    int inversions = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if ((t & (1u << a)) && (u & (1u << b)) && a < b) ++inversions;
    return inversions % 2 ? -1 : 1;
}

struct FormKey {
    unsigned theta = 0;             // subset of {1,2}; {1,2} denotes theta^2 theta^1
    std::array<unsigned, 2> dtheta{0, 0};
    auto operator<=>(const FormKey&) const = default;
    bool operator==(const FormKey&) const = default;
};

class ThetaForm {
public:
    ThetaForm() = default;
    explicit ThetaForm(Context ctx) : ctx_(std::move(ctx)) {}
    static ThetaForm scalar(const Elem& e) {
        ThetaForm f(e.ctx());
        f.add({}, e);
        return f;
    }

    [[nodiscard]] const std::map<FormKey, Elem>& components() const { return comp_; }
    [[nodiscard]] bool is_zero() const { return comp_.empty(); }
    [[nodiscard]] Elem component(const FormKey& k) const {
        auto it = comp_.find(k);
        return it == comp_.end() ? Elem(ctx_) : it->second;
    }
    void add(const FormKey& k, const Elem& e) {
        if (e.is_zero()) return;
        auto [it, inserted] = comp_.try_emplace(k, e);
        if (!inserted) {
            it->second += e;
            if (it->second.is_zero()) comp_.erase(it);
        }
    }
    ThetaForm& operator+=(const ThetaForm& o) {
        for (const auto& [k, e] : o.comp_) add(k, e);
        return *this;
    }
    friend ThetaForm operator+(ThetaForm a, const ThetaForm& b) { return a += b; }
    bool operator==(const ThetaForm& o) const { return comp_ == o.comp_; }
    [[nodiscard]] ThetaForm scaled(const Rational& q) const {
        ThetaForm r(ctx_);
        for (const auto& [k, e] : comp_) r.add(k, e.scaled(q));
        return r;
    }

    // (theta^T c)(theta^U d) = (-1)^{|c||U|} theta^T theta^U c d; dtheta's are even and central.
    friend ThetaForm operator*(const ThetaForm& a, const ThetaForm& b) {
        ThetaForm r(a.ctx_);
        for (const auto& [ka, ea] : a.comp_)
            for (const auto& [kb, eb] : b.comp_) {
                const int s = theta_product_sign(ka.theta, kb.theta);
                if (s == 0) continue;
                FormKey k{ka.theta | kb.theta, {ka.dtheta[0] + kb.dtheta[0], ka.dtheta[1] + kb.dtheta[1]}};
                Elem lhs = std::popcount(kb.theta) % 2 ? detail::koszul_twist(ea, 1u) : ea;
                Elem prod = lhs * eb;
                r.add(k, s < 0 ? -prod : prod);
            }
        return r;
    }

private:
    Context ctx_;
    std::map<FormKey, Elem> comp_;
};

/// Differential form on M: sum over increasing index lists I of f_I dx^I.
using DifferentialForm = std::map<std::vector<int>, Coef>;

/// Components of phi^* alpha on R^{0|2}, where x^i(theta) = x + theta^a xi_a + theta^2 theta^1 y
/// and dx^i = dtheta^a d/dtheta^a (x^i(theta)).
inline std::map<FormKey, Elem> form_components(const Context& ctx, const DifferentialForm& alpha) {
    if (ctx.n() != 2) throw std::invalid_argument("form components require n = 2");
    const std::size_t m = ctx.nvars();
    std::vector<Coef> body(m);
    std::vector<ThetaForm> nil(m, ThetaForm(ctx));
    std::vector<ThetaForm> dx(m, ThetaForm(ctx));
    for (std::size_t i = 0; i < m; ++i) {
        const int c = static_cast<int>(i);
        body[i] = Coef::variable(m, i);
        nil[i].add({1u, {0, 0}}, gen_elem(ctx, c, 1u));
        nil[i].add({2u, {0, 0}}, gen_elem(ctx, c, 2u));
        nil[i].add({3u, {0, 0}}, gen_elem(ctx, c, 3u));
        // d/dtheta^1 (theta^2 theta^1) = -theta^2, d/dtheta^2 (theta^2 theta^1) = theta^1
        dx[i].add({0u, {1, 0}}, gen_elem(ctx, c, 1u));
        dx[i].add({2u, {1, 0}}, -gen_elem(ctx, c, 3u));
        dx[i].add({0u, {0, 1}}, gen_elem(ctx, c, 2u));
        dx[i].add({1u, {0, 1}}, gen_elem(ctx, c, 3u));
    }
    ThetaForm total(ctx);
    for (const auto& [idx, f] : alpha) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] < 0 || static_cast<std::size_t>(idx[k]) >= m) throw std::invalid_argument("form index out of range");
            if (k > 0 && idx[k] <= idx[k - 1]) throw std::invalid_argument("form indices must be strictly increasing");
        }
        if (!(f.nvars() == m)) throw std::invalid_argument("form coefficient has wrong arity");
        ThetaForm term = taylor_substitute(f, std::span<const Coef>(body), nil,
                                           [&](const Coef& v) { return ThetaForm::scalar(Elem::constant(ctx, v)); });
        for (int i : idx) term = term * dx[static_cast<std::size_t>(i)];
        total += term;
    }
    return total.components();
}

}  // namespace gorms
