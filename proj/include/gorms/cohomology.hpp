#pragma once

// Finite truncations of worm complexes as exact matrices over Q.
//
// Every operator used here (d_a, R_a, E_a^b) preserves the weight
//   w(x^alpha * generators) = |alpha| + (number of generator factors),
// so the complex splits into finite-dimensional weight pieces and truncating
// at weight <= K introduces no boundary terms. Stability is still reported by
// comparing K with K + 1.

#include "gorms/calculus.hpp"
#include "gorms/linalg.hpp"

#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gorms {

struct TruncationSpec {
    int max_weight = 4;                  // bounds polynomial degree and y-degree alike
    bool constant_coefficients = false;  // restrict to fibers over a point
};

/// A coefficient monomial x^alpha times a worm monomial.
struct BasisKey {
    std::vector<std::uint16_t> x;
    Monomial w;
    auto operator<=>(const BasisKey&) const = default;
    bool operator==(const BasisKey&) const = default;
};

inline int key_weight(const BasisKey& k) {
    int s = static_cast<int>(k.w.odd_count() + k.w.even_degree());
    for (auto e : k.x) s += e;
    return s;
}

/// Finite-dimensional space spanned by basis keys, extendable on demand.
class WormSpace {
public:
    WormSpace() = default;
    explicit WormSpace(Context ctx) : ctx_(std::move(ctx)) {}

    [[nodiscard]] const Context& ctx() const { return ctx_; }
    [[nodiscard]] std::size_t dim() const { return keys_.size(); }
    [[nodiscard]] const BasisKey& key(std::size_t j) const { return keys_.at(j); }
    [[nodiscard]] std::optional<std::size_t> find(const BasisKey& k) const {
        auto it = index_.find(k);
        return it == index_.end() ? std::nullopt : std::optional(it->second);
    }
    std::size_t add(const BasisKey& k) {
        auto [it, inserted] = index_.try_emplace(k, keys_.size());
        if (inserted) keys_.push_back(k);
        return it->second;
    }

    [[nodiscard]] Elem element(std::size_t j) const {
        const BasisKey& k = keys_.at(j);
        Exponents ex;
        for (std::size_t i = 0; i < k.x.size(); ++i) ex.e[i] = k.x[i];
        return Elem::term(ctx_, k.w, Coef(Poly::monomial(ctx_.nvars(), ex, Rational(1))));
    }
    [[nodiscard]] Elem element(const SparseVec& v) const {
        Elem e(ctx_);
        for (const auto& [j, c] : v) e += element(j).scaled(c);
        return e;
    }
    /// Coordinates of e; with extend, unseen keys are appended.
    SparseVec coordinates(const Elem& e, bool extend) {
        SparseVec v;
        for (const auto& [k, c] : expand(e)) {
            std::optional<std::size_t> j = find(k);
            if (!j) {
                if (!extend) throw std::invalid_argument("element leaves the truncated space");
                j = add(k);
            }
            v[*j] = c;
        }
        return v;
    }
    [[nodiscard]] SparseVec coordinates(const Elem& e) const {
        SparseVec v;
        for (const auto& [k, c] : expand(e)) {
            const auto j = find(k);
            if (!j) throw std::invalid_argument("element leaves the truncated space");
            v[*j] = c;
        }
        return v;
    }

private:
    [[nodiscard]] std::map<BasisKey, Rational> expand(const Elem& e) const {
        std::map<BasisKey, Rational> out;
        for (const auto& [mono, c] : e.terms()) {
            if (!c.is_polynomial()) throw std::invalid_argument("image leaves polynomial coefficients");
            for (const auto& [ex, q] : c.num().terms()) {
                BasisKey k{std::vector<std::uint16_t>(ex.e.begin(), ex.e.begin() + static_cast<long>(ctx_.nvars())), mono};
                out[k] += q;
            }
        }
        return out;
    }

    Context ctx_;
    std::vector<BasisKey> keys_;
    std::map<BasisKey, std::size_t> index_;
};

namespace detail {

inline void for_each_exponent(std::size_t slots, int budget, std::vector<std::uint16_t>& cur, std::size_t from,
                              const std::function<void(const std::vector<std::uint16_t>&, int)>& f, int used = 0) {
    f(cur, used);
    if (used == budget) return;
    for (std::size_t i = from; i < slots; ++i) {
        ++cur[i];
        for_each_exponent(slots, budget, cur, i, f, used + 1);
        --cur[i];
    }
}

}  // namespace detail

/// All basis keys of weight <= max_weight (chart generators only).
inline WormSpace truncated_space(const Context& ctx, const TruncationSpec& t) {
    if (t.max_weight < 0) throw std::invalid_argument("max weight must be nonnegative");
    if (!ctx.param_names().empty()) throw std::invalid_argument("parameters are not supported in truncations");
    std::vector<BasisKey> keys;
    const std::size_t nodd = ctx.num_odd();
    std::vector<std::uint16_t> ev(ctx.num_even(), 0), xs(ctx.nvars(), 0);
    for (std::uint64_t odd = 0; odd < (std::uint64_t{1} << nodd); ++odd) {
        const int w0 = std::popcount(odd);
        if (w0 > t.max_weight) continue;
        detail::for_each_exponent(ctx.num_even(), t.max_weight - w0, ev, 0, [&](const std::vector<std::uint16_t>& e, int we) {
            const int rest = t.max_weight - w0 - we;
            if (t.constant_coefficients) {
                keys.push_back(BasisKey{xs, Monomial{odd, e}});
                return;
            }
            detail::for_each_exponent(ctx.nvars(), rest, xs, 0, [&](const std::vector<std::uint16_t>& x, int) {
                keys.push_back(BasisKey{x, Monomial{odd, e}});
            });
        });
    }
    std::sort(keys.begin(), keys.end(), [](const BasisKey& a, const BasisKey& b) {
        const int wa = key_weight(a), wb = key_weight(b);
        return wa != wb ? wa < wb : a < b;
    });
    WormSpace s(ctx);
    for (const auto& k : keys) s.add(k);
    return s;
}

/// Matrix of D on the truncated space; the codomain starts as a copy of the
/// domain and is extended by any new basis keys.
struct OpMatrix {
    WormSpace domain;
    WormSpace codomain;
    SparseMatrix matrix;
};

inline OpMatrix op_matrix(const Deriv& d, const TruncationSpec& t) {
    OpMatrix out{truncated_space(d.ctx(), t), WormSpace(), SparseMatrix()};
    out.codomain = out.domain;
    std::vector<SparseVec> cols;
    for (std::size_t j = 0; j < out.domain.dim(); ++j) cols.push_back(out.codomain.coordinates(d.apply(out.domain.element(j)), true));
    out.matrix = SparseMatrix(out.codomain.dim(), out.domain.dim());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, v] : cols[j]) out.matrix.set(i, j, v);
    return out;
}

namespace detail {

using BlockKey = std::pair<int, std::vector<int>>;  // (weight, multidegree)

inline BlockKey block_of(const Context& ctx, const BasisKey& k) {
    const Elem probe = Elem::term(ctx, k.w, Coef(ctx.nvars(), 1));
    return {key_weight(k), probe.monomial_multidegree(k.w)};
}

inline std::vector<int> shifted(std::vector<int> v, const std::vector<int>& s, int sign) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * s[i];
    return v;
}

// The complex cut into (weight, multidegree) blocks. Holds D's columns on the domain.
struct Blocks {
    OpMatrix op;
    std::map<BlockKey, std::vector<std::size_t>> members;  // domain indices per block
    std::vector<int> shift;
    std::vector<SparseVec> cols;  // D applied to each domain basis element

    // D restricted to block b, as column vectors in codomain coordinates.
    [[nodiscard]] std::vector<SparseVec> columns(const BlockKey& b) const {
        std::vector<SparseVec> out;
        auto it = members.find(b);
        if (it == members.end()) return out;
        for (std::size_t j : it->second) out.push_back(cols[j]);
        return out;
    }
    [[nodiscard]] EchelonBasis image_into(const BlockKey& b) const {
        EchelonBasis e;
        for (const auto& c : columns({b.first, shifted(b.second, shift, -1)})) e.insert(c);
        return e;
    }
    [[nodiscard]] std::vector<SparseVec> kernel(const BlockKey& b) const {
        auto it = members.find(b);
        if (it == members.end()) return {};
        const auto cols = columns(b);
        SparseMatrix a(op.codomain.dim(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (const auto& [i, v] : cols[j]) a.set(i, j, v);
        std::vector<SparseVec> out;
        for (const auto& z : nullspace(a)) {
            SparseVec full;
            for (const auto& [j, v] : z) full[it->second[j]] = v;
            out.push_back(std::move(full));
        }
        return out;
    }
};

inline Blocks make_blocks(const Deriv& d, const TruncationSpec& t) {
    Blocks b{op_matrix(d, t), {}, d.shift(), {}};
    const Context& ctx = d.ctx();
    for (std::size_t j = 0; j < b.op.domain.dim(); ++j) b.members[block_of(ctx, b.op.domain.key(j))].push_back(j);
    b.cols = b.op.matrix.transpose().data;
    for (std::size_t j = 0; j < b.op.domain.dim(); ++j)
        for (const auto& [i, v] : b.cols[j])
            if (key_weight(b.op.codomain.key(i)) != key_weight(b.op.domain.key(j)))
                throw std::invalid_argument("operator does not preserve the weight grading");
    return b;
}

inline void require_differential(const Deriv& d, const WormSpace& space) {
    for (std::size_t j = 0; j < space.dim(); ++j)
        if (!d.apply(d.apply(space.element(j))).is_zero()) throw std::invalid_argument("not a differential");
}

}  // namespace detail

struct BettiEntry {
    std::vector<int> multidegree;
    std::size_t betti = 0;       // at max_weight K
    std::size_t betti_next = 0;  // at K + 1
    bool stable = false;
};

struct BettiReport {
    std::string differential;
    TruncationSpec trunc;
    std::vector<BettiEntry> entries;  // multidegrees with nonzero Betti at K or K + 1

    [[nodiscard]] bool all_stable() const {
        return std::all_of(entries.begin(), entries.end(), [](const BettiEntry& e) { return e.stable; });
    }
    /// Stable nonzero Betti numbers by multidegree.
    [[nodiscard]] std::map<std::vector<int>, std::size_t> stable_betti() const {
        std::map<std::vector<int>, std::size_t> out;
        for (const auto& e : entries)
            if (e.stable && e.betti) out[e.multidegree] = e.betti;
        return out;
    }
    /// Stable Betti summed by total degree.
    [[nodiscard]] std::map<int, std::size_t> by_total_degree() const {
        std::map<int, std::size_t> out;
        for (const auto& [deg, b] : stable_betti()) out[std::accumulate(deg.begin(), deg.end(), 0)] += b;
        return out;
    }
};

/// Betti numbers per multidegree: dim ker(D on C_v) - rank(D into C_v), summed over weights.
inline std::map<std::vector<int>, std::size_t> betti_numbers(const detail::Blocks& b) {
    std::map<std::vector<int>, std::size_t> out;
    for (const auto& [key, idx] : b.members) {
        const std::size_t ker = b.kernel(key).size();
        const std::size_t im = b.image_into(key).rank();
        out[key.second] += ker - im;
    }
    return out;
}

inline BettiReport betti(const Deriv& d, const TruncationSpec& t, std::string name = "D") {
    if (d.parity() != 1) throw std::invalid_argument("not a differential");
    TruncationSpec next = t;
    next.max_weight = t.max_weight + 1;
    detail::require_differential(d, truncated_space(d.ctx(), next));
    const detail::Blocks bk = detail::make_blocks(d, t);
    const detail::Blocks bn = detail::make_blocks(d, next);
    const auto at_k = betti_numbers(bk), at_next = betti_numbers(bn);
    BettiReport r{std::move(name), t, {}};
    std::map<std::vector<int>, BettiEntry> merged;
    for (const auto& [deg, v] : at_k) {
        merged[deg].multidegree = deg;
        merged[deg].betti = v;
    }
    for (const auto& [deg, v] : at_next) {
        merged[deg].multidegree = deg;
        merged[deg].betti_next = v;
    }
    for (auto& [deg, e] : merged) {
        if (!e.betti && !e.betti_next) continue;
        e.stable = e.betti == e.betti_next;
        r.entries.push_back(e);
    }
    return r;
}

/// Checks that a derivation commuting with D induces the zero map on H(D):
/// for every cocycle z, E z is exact.
struct InducedCheck {
    bool commutes = true;
    bool zero_on_cohomology = true;
    std::size_t classes_checked = 0;
};

inline InducedCheck induced_map_zero(const Deriv& d, const Deriv& e, const TruncationSpec& t) {
    detail::Blocks b = detail::make_blocks(d, t);
    InducedCheck out;
    for (const auto& [key, idx] : b.members) {
        for (const auto& z : b.kernel(key)) {
            const Elem ez = e.apply(b.op.domain.element(z));
            if (!d.apply(ez).is_zero()) out.commutes = false;
            const detail::BlockKey target{key.first, detail::shifted(key.second, e.shift(), 1)};
            const EchelonBasis image = b.image_into(target);
            SparseVec v = b.op.codomain.coordinates(ez, true);
            ++out.classes_checked;
            if (!image.contains(v)) out.zero_on_cohomology = false;
        }
    }
    return out;
}

/// A morphism f with f D = c D f acts on H(D); checks it maps cocycles to
/// cocycles, coboundaries to coboundaries, and is injective on cohomology.
struct MorphismOnCohomology {
    bool chain_map_up_to_scale = true;
    bool injective = true;
    std::size_t betti_total = 0;
};

inline MorphismOnCohomology morphism_on_cohomology(const Deriv& d, const Morphism& f, const TruncationSpec& t) {
    detail::Blocks b = detail::make_blocks(d, t);
    MorphismOnCohomology out;
    for (const auto& [key, idx] : b.members) {
        const EchelonBasis image = b.image_into(key);
        EchelonBasis classes = image;
        for (const auto& z : b.kernel(key)) {
            const Elem fz = f.apply(b.op.domain.element(z));
            if (!d.apply(fz).is_zero()) out.chain_map_up_to_scale = false;
            classes.insert(b.op.codomain.coordinates(fz, true));
        }
        for (const auto& [row, vec] : image.rows()) {
            const Elem fb = f.apply(b.op.codomain.element(vec));
            if (!image.contains(b.op.codomain.coordinates(fb, true))) out.chain_map_up_to_scale = false;
        }
        const std::size_t h = b.kernel(key).size() - image.rank();
        out.betti_total += h;
        if (classes.rank() - image.rank() != h) out.injective = false;
    }
    return out;
}

/// Projection Omega_[2](M) -> Omega(M) sending xi_a to dx, the other odd
/// generator and y to zero.
inline Morphism projection_to_forms(const Context& ctx2, int a) {
    if (ctx2.n() != 2) throw std::invalid_argument("requires n = 2");
    const Context ctx1 = Context::make(1, ctx2.m(), ctx2.coord_names());
    Morphism p(ctx2, ctx1);
    for (int i = 0; i < ctx2.m(); ++i) p.set_gen(ctx2.find(i, subset_bit(a)), gen_elem(ctx1, i, 1u));
    return p;
}

struct PairingReport {
    int direction = 0;  // xi_direction maps to dx
    bool chain_map = false;
    bool quasi_isomorphism = false;
    std::size_t source_betti = 0;
    std::size_t target_betti = 0;
    std::size_t induced_rank = 0;
};

/// Compares (Omega_[2], d) with (Omega, target) through projection_to_forms(a).
/// target is the zero derivation when d is fiberwise, the de Rham d otherwise.
inline PairingReport pairing_report(const Deriv& d, int a, const TruncationSpec& t) {
    const Context& ctx2 = d.ctx();
    const Morphism proj = projection_to_forms(ctx2, a);
    const Context& ctx1 = proj.target();
    const Deriv target = d.is_fiberwise() ? Deriv(ctx1, 1, {0}) : d_op(ctx1, 1);
    PairingReport r;
    r.direction = a;

    detail::Blocks src = detail::make_blocks(d, t);
    detail::Blocks tgt = detail::make_blocks(target, t);
    r.chain_map = true;
    for (std::size_t j = 0; j < src.op.domain.dim(); ++j) {
        const Elem u = src.op.domain.element(j);
        if (!(proj.apply(d.apply(u)) == target.apply(proj.apply(u)))) {
            r.chain_map = false;
            break;
        }
    }
    for (const auto& [key, idx] : src.members) r.source_betti += src.kernel(key).size() - src.image_into(key).rank();
    for (const auto& [key, idx] : tgt.members) r.target_betti += tgt.kernel(key).size() - tgt.image_into(key).rank();
    if (!r.chain_map) return r;

    // rank of the induced map: images of cocycles modulo target coboundaries
    std::map<detail::BlockKey, EchelonBasis> spans;
    for (const auto& [key, idx] : tgt.members) spans[key] = tgt.image_into(key);
    std::map<detail::BlockKey, std::size_t> base_rank;
    for (const auto& [key, e] : spans) base_rank[key] = e.rank();
    for (const auto& [key, idx] : src.members)
        for (const auto& z : src.kernel(key)) {
            const Elem pz = proj.apply(src.op.domain.element(z));
            if (pz.is_zero()) continue;
            SparseVec v = tgt.op.codomain.coordinates(pz, true);
            spans[detail::block_of(ctx1, tgt.op.codomain.key(v.begin()->first))].insert(std::move(v));
        }
    for (const auto& [key, e] : spans) r.induced_rank += e.rank() - base_rank[key];
    r.quasi_isomorphism = r.induced_rank == r.source_betti && r.induced_rank == r.target_betti;
    return r;
}

}  // namespace gorms
