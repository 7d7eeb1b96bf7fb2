#pragma once

// The free graded-commutative algebra of differential worms on a chart.
//
// Generators are d_S x^i for nonempty S in {1..n}; |S| odd generators are
// Grassmann-odd. Base coordinates x^i live in the coefficient field. A context
// may also carry extra odd parameters of multidegree zero (used by the full
// semigroup action); they sort after every chart generator.

#include "gorms/coef.hpp"

#include <bit>
#include <compare>
#include <memory>

namespace gorms {

struct GeneratorInfo {
    int coord = -1;         // 0-based chart coordinate, -1 for parameters
    unsigned subset = 0;    // bit a-1 set for d_a; 0 for parameters
    bool odd = false;
    std::size_t slot = 0;   // bit in the odd mask, or index into the even exponents
    std::string name;
};

namespace detail {

struct ContextData {
    int n = 0;
    int m = 0;
    std::vector<std::string> coord_names;
    std::vector<std::string> param_names;
    std::vector<unsigned> subsets;  // nonempty subsets in lexicographic order of sorted lists
    std::vector<GeneratorInfo> gens;
    std::vector<std::size_t> odd_ids;   // slot -> generator id
    std::vector<std::size_t> even_ids;  // slot -> generator id
};

inline std::vector<int> subset_members(unsigned s) {
    std::vector<int> out;
    for (int a = 0; a < 32; ++a)
        if (s & (1u << a)) out.push_back(a + 1);
    return out;
}

}  // namespace detail

/// Shared, immutable description of Omega_[n] on an m-dimensional chart.
class Context {
public:
    Context() = default;

    static Context make(int n, int m, std::vector<std::string> coord_names = {},
                        std::vector<std::string> params = {}) {
        if (n < 1) throw std::invalid_argument("level n must be at least 1");
        if (m < 1) throw std::invalid_argument("chart dimension m must be at least 1");
        if (static_cast<std::size_t>(m) > kMaxVars) throw std::invalid_argument("chart dimension exceeds supported maximum");
        if (n > 8) throw std::invalid_argument("level n exceeds supported maximum");
        auto d = std::make_shared<detail::ContextData>();
        d->n = n;
        d->m = m;
        if (coord_names.empty())
            for (int i = 0; i < m; ++i) coord_names.push_back("x" + std::to_string(i + 1));
        if (static_cast<int>(coord_names.size()) != m) throw std::invalid_argument("coordinate name count differs from m");
        d->coord_names = std::move(coord_names);
        d->param_names = std::move(params);

        std::vector<std::vector<int>> lists;
        for (unsigned s = 1; s < (1u << n); ++s) lists.push_back(detail::subset_members(s));
        std::sort(lists.begin(), lists.end());
        for (const auto& l : lists) {
            unsigned s = 0;
            for (int a : l) s |= 1u << (a - 1);
            d->subsets.push_back(s);
        }
        for (int i = 0; i < m; ++i)
            for (unsigned s : d->subsets) {
                GeneratorInfo g;
                g.coord = i;
                g.subset = s;
                g.odd = std::popcount(s) % 2 == 1;
                std::string label = "d";
                for (int a : detail::subset_members(s)) label += std::to_string(a);
                g.name = label + "(" + d->coord_names[i] + ")";
                d->gens.push_back(std::move(g));
            }
        for (const auto& p : d->param_names) {
            GeneratorInfo g;
            g.odd = true;
            g.name = p;
            d->gens.push_back(std::move(g));
        }
        for (std::size_t id = 0; id < d->gens.size(); ++id) {
            auto& g = d->gens[id];
            if (g.odd) {
                g.slot = d->odd_ids.size();
                d->odd_ids.push_back(id);
            } else {
                g.slot = d->even_ids.size();
                d->even_ids.push_back(id);
            }
        }
        if (d->odd_ids.size() > 64) throw std::invalid_argument("too many odd generators (limit 64)");
        Context c;
        c.d_ = std::move(d);
        return c;
    }

    /// Same chart and level, with extra odd parameters appended.
    [[nodiscard]] Context with_params(std::vector<std::string> params) const {
        return make(n(), m(), d_->coord_names, std::move(params));
    }
    [[nodiscard]] Context without_params() const { return make(n(), m(), d_->coord_names); }

    [[nodiscard]] bool valid() const { return d_ != nullptr; }
    [[nodiscard]] int n() const { return d_->n; }
    [[nodiscard]] int m() const { return d_->m; }
    [[nodiscard]] std::size_t nvars() const { return static_cast<std::size_t>(d_->m); }
    [[nodiscard]] const std::vector<std::string>& coord_names() const { return d_->coord_names; }
    [[nodiscard]] const std::vector<std::string>& param_names() const { return d_->param_names; }
    [[nodiscard]] const std::vector<unsigned>& subsets() const { return d_->subsets; }
    [[nodiscard]] std::size_t num_generators() const { return d_->gens.size(); }
    [[nodiscard]] std::size_t num_odd() const { return d_->odd_ids.size(); }
    [[nodiscard]] std::size_t num_even() const { return d_->even_ids.size(); }
    [[nodiscard]] const GeneratorInfo& generator(std::size_t id) const { return d_->gens.at(id); }
    [[nodiscard]] std::size_t odd_id(std::size_t slot) const { return d_->odd_ids.at(slot); }
    [[nodiscard]] std::size_t even_id(std::size_t slot) const { return d_->even_ids.at(slot); }

    /// Generator id of d_S x^i (subset as bitmask, i 0-based).
    [[nodiscard]] std::size_t find(int coord, unsigned subset) const {
        const auto& subs = d_->subsets;
        auto it = std::find(subs.begin(), subs.end(), subset);
        if (it == subs.end() || coord < 0 || coord >= m()) throw std::out_of_range("no such generator");
        return static_cast<std::size_t>(coord) * subs.size() + static_cast<std::size_t>(it - subs.begin());
    }
    [[nodiscard]] std::size_t param(std::size_t k) const {
        if (k >= d_->param_names.size()) throw std::out_of_range("no such parameter");
        return static_cast<std::size_t>(m()) * d_->subsets.size() + k;
    }
    [[nodiscard]] std::vector<int> multidegree(std::size_t id) const {
        std::vector<int> deg(static_cast<std::size_t>(n()), 0);
        const unsigned s = generator(id).subset;
        for (int a = 0; a < n(); ++a)
            if (s & (1u << a)) deg[static_cast<std::size_t>(a)] = 1;
        return deg;
    }
    /// Odd mask of the product of all chart odd generators (parameters excluded).
    [[nodiscard]] std::uint64_t chart_top_mask() const {
        std::uint64_t mask = 0;
        for (std::size_t slot = 0; slot < num_odd(); ++slot)
            if (generator(odd_id(slot)).coord >= 0) mask |= std::uint64_t{1} << slot;
        return mask;
    }

    bool operator==(const Context& o) const {
        if (d_ == o.d_) return true;
        if (!d_ || !o.d_) return false;
        return d_->n == o.d_->n && d_->m == o.d_->m && d_->coord_names == o.d_->coord_names &&
               d_->param_names == o.d_->param_names;
    }

private:
    std::shared_ptr<const detail::ContextData> d_;
};

inline Context make_context(int n, int m) { return Context::make(n, m); }

struct Monomial {
    std::uint64_t odd = 0;
    std::vector<std::uint16_t> even;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

    [[nodiscard]] bool is_unit() const {
        return odd == 0 && std::all_of(even.begin(), even.end(), [](auto e) { return e == 0; });
    }
    [[nodiscard]] unsigned odd_count() const { return static_cast<unsigned>(std::popcount(odd)); }
    [[nodiscard]] unsigned even_degree() const {
        unsigned d = 0;
        for (auto e : even) d += e;
        return d;
    }
};

/// Signed product of monomials; sign 0 when an odd generator repeats.
inline int multiply_monomials(const Monomial& a, const Monomial& b, Monomial& out) {
    if (a.odd & b.odd) return 0;
    unsigned swaps = 0;
    for (std::uint64_t rest = b.odd; rest; rest &= rest - 1) {
        const int y = std::countr_zero(rest);
        swaps += static_cast<unsigned>(std::popcount(y == 63 ? std::uint64_t{0} : (a.odd >> (y + 1))));
    }
    out.odd = a.odd | b.odd;
    out.even = a.even;
    for (std::size_t i = 0; i < b.even.size(); ++i) out.even[i] = static_cast<std::uint16_t>(out.even[i] + b.even[i]);
    return (swaps % 2) ? -1 : 1;
}

/// Element of Omega_[n]: a finite sum of Coef times monomials.
class Elem {
public:
    using TermMap = std::map<Monomial, Coef>;

    Elem() = default;
    explicit Elem(Context ctx) : ctx_(std::move(ctx)) {}

    static Elem constant(const Context& ctx, const Coef& c) {
        Elem e(ctx);
        e.add_term(e.unit_monomial(), c);
        return e;
    }
    static Elem constant(const Context& ctx, const Rational& q) { return constant(ctx, Coef(ctx.nvars(), q)); }
    static Elem coordinate(const Context& ctx, std::size_t i) { return constant(ctx, Coef::variable(ctx.nvars(), i)); }
    static Elem generator(const Context& ctx, std::size_t id) {
        Elem e(ctx);
        Monomial mono = e.unit_monomial();
        const auto& g = ctx.generator(id);
        if (g.odd) mono.odd = std::uint64_t{1} << g.slot;
        else mono.even[g.slot] = 1;
        e.add_term(mono, Coef(ctx.nvars(), 1));
        return e;
    }
    static Elem term(const Context& ctx, Monomial mono, const Coef& c) {
        Elem e(ctx);
        e.add_term(std::move(mono), c);
        return e;
    }

    [[nodiscard]] const Context& ctx() const { return ctx_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] Monomial unit_monomial() const { return Monomial{0, std::vector<std::uint16_t>(ctx_.num_even(), 0)}; }

    /// Coefficient of a given monomial (zero when absent).
    [[nodiscard]] Coef coefficient(const Monomial& mono) const {
        auto it = terms_.find(mono);
        return it == terms_.end() ? Coef(ctx_.nvars()) : it->second;
    }

    bool operator==(const Elem& o) const { return terms_ == o.terms_ && (terms_.empty() || ctx_ == o.ctx_); }

    Elem operator-() const {
        Elem r = *this;
        for (auto& [mono, c] : r.terms_) c = -c;
        return r;
    }
    Elem& operator+=(const Elem& o) {
        adopt(o);
        for (const auto& [mono, c] : o.terms_) add_term(mono, c);
        return *this;
    }
    Elem& operator-=(const Elem& o) {
        adopt(o);
        for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
        return *this;
    }
    friend Elem operator+(Elem a, const Elem& b) { return a += b; }
    friend Elem operator-(Elem a, const Elem& b) { return a -= b; }

    friend Elem operator*(const Elem& a, const Elem& b) {
        if (!a.ctx_.valid() || !b.ctx_.valid() || !(a.ctx_ == b.ctx_)) throw std::invalid_argument("mismatched contexts");
        Elem r(a.ctx_);
        Monomial prod;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                const int s = multiply_monomials(ma, mb, prod);
                if (s == 0) continue;
                r.add_term(prod, s > 0 ? ca * cb : -(ca * cb));
            }
        return r;
    }
    Elem& operator*=(const Elem& o) { return *this = *this * o; }

    [[nodiscard]] Elem scaled(const Coef& c) const {
        Elem r(ctx_);
        if (c.is_zero()) return r;
        for (const auto& [mono, v] : terms_) r.add_term(mono, v * c);
        return r;
    }
    [[nodiscard]] Elem scaled(const Rational& q) const { return scaled(Coef(ctx_.nvars(), q)); }
    [[nodiscard]] Elem pow(unsigned k) const {
        Elem r = constant(ctx_, Rational(1));
        for (unsigned i = 0; i < k; ++i) r *= *this;
        return r;
    }

    /// Partial derivative of the coefficients only.
    [[nodiscard]] Elem coefficient_partial(std::size_t var) const {
        Elem r(ctx_);
        for (const auto& [mono, c] : terms_) r.add_term(mono, c.partial(var));
        return r;
    }

    /// Parity if every term has the same parity (zero counts as even).
    [[nodiscard]] std::optional<int> parity() const {
        std::optional<int> p;
        for (const auto& [mono, c] : terms_) {
            const int q = static_cast<int>(mono.odd_count() % 2);
            if (p && *p != q) return std::nullopt;
            p = q;
        }
        return p.value_or(0);
    }
    [[nodiscard]] Elem parity_part(int parity) const {
        Elem r(ctx_);
        for (const auto& [mono, c] : terms_)
            if (static_cast<int>(mono.odd_count() % 2) == parity) r.terms_.emplace(mono, c);
        return r;
    }

    [[nodiscard]] std::vector<int> monomial_multidegree(const Monomial& mono) const {
        std::vector<int> deg(static_cast<std::size_t>(ctx_.n()), 0);
        auto add = [&](std::size_t id, int k) {
            const unsigned s = ctx_.generator(id).subset;
            for (int a = 0; a < ctx_.n(); ++a)
                if (s & (1u << a)) deg[static_cast<std::size_t>(a)] += k;
        };
        for (std::uint64_t rest = mono.odd; rest; rest &= rest - 1)
            add(ctx_.odd_id(static_cast<std::size_t>(std::countr_zero(rest))), 1);
        for (std::size_t s = 0; s < mono.even.size(); ++s)
            if (mono.even[s]) add(ctx_.even_id(s), mono.even[s]);
        return deg;
    }
    /// Common multidegree of all terms; nullopt when inhomogeneous. Zero reports all-zeros.
    [[nodiscard]] std::optional<std::vector<int>> multidegree() const {
        std::optional<std::vector<int>> d;
        for (const auto& [mono, c] : terms_) {
            auto md = monomial_multidegree(mono);
            if (d && *d != md) return std::nullopt;
            d = std::move(md);
        }
        return d.value_or(std::vector<int>(static_cast<std::size_t>(ctx_.n()), 0));
    }

    [[nodiscard]] std::string monomial_string(const Monomial& mono) const {
        std::string s;
        auto append = [&](const std::string& tok) {
            if (!s.empty()) s += "*";
            s += tok;
        };
        for (std::size_t slot = 0; slot < mono.even.size(); ++slot) {
            if (!mono.even[slot]) continue;
            std::string tok = ctx_.generator(ctx_.even_id(slot)).name;
            if (mono.even[slot] > 1) tok += "^" + std::to_string(mono.even[slot]);
            append(tok);
        }
        for (std::size_t slot = 0; slot < ctx_.num_odd(); ++slot)
            if (mono.odd & (std::uint64_t{1} << slot)) append(ctx_.generator(ctx_.odd_id(slot)).name);
        return s;
    }

    [[nodiscard]] std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [mono, c] : terms_) {
            if (!out.empty()) out += " + ";
            const std::string cs = c.to_string(ctx_.coord_names());
            const std::string ms = monomial_string(mono);
            if (ms.empty()) out += "(" + cs + ")";
            else if (c.is_one()) out += ms;
            else out += "(" + cs + ")*" + ms;
        }
        return out;
    }

    void add_term(const Monomial& mono, const Coef& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(mono, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

private:
    void adopt(const Elem& o) {
        if (!ctx_.valid()) ctx_ = o.ctx_;
        else if (o.ctx_.valid() && !(ctx_ == o.ctx_)) throw std::invalid_argument("mismatched contexts");
    }

    Context ctx_;
    TermMap terms_;
};

/// A graded derivation, stored as its values on every generator and on each
/// base coordinate (the latter fixes the action on coefficients by the chain rule).
class Deriv {
public:
    Deriv() = default;
    Deriv(Context ctx, int parity, std::vector<int> shift)
        : ctx_(std::move(ctx)), parity_(parity & 1), shift_(std::move(shift)) {
        if (shift_.empty()) shift_.assign(static_cast<std::size_t>(ctx_.n()), 0);
        base_.assign(ctx_.nvars(), Elem(ctx_));
        gens_.assign(ctx_.num_generators(), Elem(ctx_));
    }

    [[nodiscard]] const Context& ctx() const { return ctx_; }
    [[nodiscard]] int parity() const { return parity_; }
    [[nodiscard]] const std::vector<int>& shift() const { return shift_; }
    [[nodiscard]] const Elem& base(std::size_t i) const { return base_.at(i); }
    [[nodiscard]] const Elem& gen(std::size_t id) const { return gens_.at(id); }
    void set_base(std::size_t i, Elem e) { base_.at(i) = std::move(e); }
    void set_gen(std::size_t id, Elem e) { gens_.at(id) = std::move(e); }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(base_.begin(), base_.end(), [](const Elem& e) { return e.is_zero(); }) &&
               std::all_of(gens_.begin(), gens_.end(), [](const Elem& e) { return e.is_zero(); });
    }
    /// True when the derivation does not differentiate coefficients.
    [[nodiscard]] bool is_fiberwise() const {
        return std::all_of(base_.begin(), base_.end(), [](const Elem& e) { return e.is_zero(); });
    }

    bool operator==(const Deriv& o) const { return ctx_ == o.ctx_ && base_ == o.base_ && gens_ == o.gens_; }

    Deriv operator-() const { return scaled(Rational(-1)); }
    friend Deriv operator+(const Deriv& a, const Deriv& b) { return combine(a, b, Rational(1)); }
    friend Deriv operator-(const Deriv& a, const Deriv& b) { return combine(a, b, Rational(-1)); }
    [[nodiscard]] Deriv scaled(const Rational& q) const {
        Deriv r = *this;
        for (auto& e : r.base_) e = e.scaled(q);
        for (auto& e : r.gens_) e = e.scaled(q);
        return r;
    }
    /// Left multiplication by an element f: (f D)(u) = f * D(u).
    [[nodiscard]] Deriv left_multiplied(const Elem& f) const {
        auto pf = f.parity();
        if (!pf) throw std::invalid_argument("left multiplier must have definite parity");
        Deriv r(ctx_, parity_ + *pf, shift_);
        auto md = f.multidegree();
        if (md)
            for (std::size_t a = 0; a < r.shift_.size(); ++a) r.shift_[a] += (*md)[a];
        for (std::size_t i = 0; i < base_.size(); ++i) r.base_[i] = f * base_[i];
        for (std::size_t g = 0; g < gens_.size(); ++g) r.gens_[g] = f * gens_[g];
        return r;
    }

    /// Graded Leibniz extension: D(uv) = D(u) v + (-1)^{|D||u|} u D(v).
    [[nodiscard]] Elem apply(const Elem& e) const {
        if (e.is_zero()) return Elem(ctx_);
        if (!(e.ctx() == ctx_)) throw std::invalid_argument("mismatched contexts");
        Elem out(ctx_);
        Monomial prod;
        // Image term times a monomial (image on the left).
        auto accumulate = [&](const Elem& image, const Monomial& right, const Coef& factor) {
            for (const auto& [mi, ci] : image.terms()) {
                const int s = multiply_monomials(mi, right, prod);
                if (s == 0) continue;
                Coef c = ci * factor;
                out.add_term(prod, s > 0 ? c : -c);
            }
        };
        for (const auto& [mono, c] : e.terms()) {
            for (std::size_t i = 0; i < base_.size(); ++i) {
                if (base_[i].is_zero()) continue;
                Coef dc = c.partial(i);
                if (!dc.is_zero()) accumulate(base_[i], mono, dc);
            }
            // D(o_1...o_k) = sum_j (-1)^{|D| j} o_1..o_{j-1} D(o_j) o_{j+1}..o_k
            unsigned j = 0;
            for (std::uint64_t rest = mono.odd; rest; rest &= rest - 1, ++j) {
                const auto slot = static_cast<std::size_t>(std::countr_zero(rest));
                const Elem& img = gens_[ctx_.odd_id(slot)];
                if (img.is_zero()) continue;
                const std::uint64_t bit = std::uint64_t{1} << slot;
                Monomial left{mono.odd & (bit - 1), mono.even};
                Monomial right{mono.odd & ~((bit << 1) - 1), std::vector<std::uint16_t>(mono.even.size(), 0)};
                if (slot == 63) right.odd = 0;
                const bool flip = (parity_ & 1) && (j & 1);
                Monomial mid;
                for (const auto& [mi, ci] : img.terms()) {
                    int s1 = multiply_monomials(left, mi, mid);
                    if (s1 == 0) continue;
                    const int s2 = multiply_monomials(mid, right, prod);
                    if (s2 == 0) continue;
                    Coef cc = ci * c;
                    out.add_term(prod, ((s1 * s2 < 0) != flip) ? -cc : cc);
                }
            }
            for (std::size_t slot = 0; slot < mono.even.size(); ++slot) {
                if (!mono.even[slot]) continue;
                const Elem& img = gens_[ctx_.even_id(slot)];
                if (img.is_zero()) continue;
                Monomial reduced = mono;
                reduced.even[slot] -= 1;
                accumulate(img, reduced, c.scaled(Rational(mono.even[slot])));
            }
        }
        return out;
    }

    /// Checks that every image has the parity and multidegree the derivation claims.
    [[nodiscard]] bool is_homogeneous() const {
        auto check = [&](const Elem& img, int gen_parity, std::vector<int> deg) {
            if (img.is_zero()) return true;
            auto p = img.parity();
            auto md = img.multidegree();
            if (!p || *p != ((gen_parity + parity_) & 1) || !md) return false;
            for (std::size_t a = 0; a < deg.size(); ++a) deg[a] += shift_[a];
            return *md == deg;
        };
        const std::vector<int> zero(static_cast<std::size_t>(ctx_.n()), 0);
        for (const auto& b : base_)
            if (!check(b, 0, zero)) return false;
        for (std::size_t g = 0; g < gens_.size(); ++g)
            if (!check(gens_[g], ctx_.generator(g).odd ? 1 : 0, ctx_.multidegree(g))) return false;
        return true;
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        auto emit = [&](const Elem& img, const std::string& name) {
            if (img.is_zero()) return;
            if (!out.empty()) out += " + ";
            out += "(" + img.to_string() + ")*del[" + name + "]";
        };
        for (std::size_t i = 0; i < base_.size(); ++i) emit(base_[i], ctx_.coord_names()[i]);
        for (std::size_t g = 0; g < gens_.size(); ++g) emit(gens_[g], ctx_.generator(g).name);
        return out.empty() ? "0" : out;
    }

private:
    static Deriv combine(const Deriv& a, const Deriv& b, const Rational& sb) {
        if (!(a.ctx_ == b.ctx_)) throw std::invalid_argument("mismatched contexts");
        if (a.is_zero()) return b.scaled(sb);
        if (b.is_zero()) return a;
        if (a.parity_ != b.parity_ || a.shift_ != b.shift_)
            throw std::invalid_argument("sum of derivations with different parity or degree shift");
        Deriv r = a;
        for (std::size_t i = 0; i < r.base_.size(); ++i) r.base_[i] += b.base_[i].scaled(sb);
        for (std::size_t g = 0; g < r.gens_.size(); ++g) r.gens_[g] += b.gens_[g].scaled(sb);
        return r;
    }

    Context ctx_;
    int parity_ = 0;
    std::vector<int> shift_;
    std::vector<Elem> base_;
    std::vector<Elem> gens_;
};

inline Elem apply_deriv(const Deriv& d, const Elem& e) { return d.apply(e); }

/// Graded commutator D1 D2 - (-1)^{p1 p2} D2 D1.
inline Deriv bracket(const Deriv& d1, const Deriv& d2) {
    if (!(d1.ctx() == d2.ctx())) throw std::invalid_argument("mismatched contexts");
    std::vector<int> shift = d1.shift();
    for (std::size_t a = 0; a < shift.size(); ++a) shift[a] += d2.shift()[a];
    Deriv r(d1.ctx(), d1.parity() + d2.parity(), shift);
    const bool anti = (d1.parity() & d2.parity()) == 1;
    auto combine = [&](const Elem& img1, const Elem& img2) {
        Elem a = d1.apply(img2), b = d2.apply(img1);
        return anti ? a + b : a - b;
    };
    for (std::size_t i = 0; i < d1.ctx().nvars(); ++i) r.set_base(i, combine(d1.base(i), d2.base(i)));
    for (std::size_t g = 0; g < d1.ctx().num_generators(); ++g) r.set_gen(g, combine(d1.gen(g), d2.gen(g)));
    return r;
}

}  // namespace gorms
