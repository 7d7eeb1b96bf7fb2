#pragma once

// Young tables, Schur dimensions, the cotangent-tetris rule, and highest-weight
// kernels on constant-coefficient bidegree fibers of Omega_[2].

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

class YoungTable {
public:
    YoungTable() = default;
    explicit YoungTable(std::vector<int> rows) : rows_(std::move(rows)) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] < 1) throw std::invalid_argument("Young table rows must be positive");
            if (i && rows_[i] > rows_[i - 1]) throw std::invalid_argument("Young table rows must be weakly decreasing");
        }
    }
    /// Two-column table with column lengths c1 >= c2 >= 0.
    static YoungTable from_columns(int c1, int c2) {
        if (c2 < 0 || c1 < c2) throw std::invalid_argument("column lengths must satisfy c1 >= c2 >= 0");
        std::vector<int> rows;
        for (int i = 0; i < c1; ++i) rows.push_back(i < c2 ? 2 : 1);
        return YoungTable(std::move(rows));
    }

    [[nodiscard]] const std::vector<int>& rows() const { return rows_; }
    [[nodiscard]] std::size_t num_rows() const { return rows_.size(); }
    [[nodiscard]] int size() const { return std::accumulate(rows_.begin(), rows_.end(), 0); }
    [[nodiscard]] std::vector<int> columns() const {
        std::vector<int> cols(rows_.empty() ? 0 : static_cast<std::size_t>(rows_[0]), 0);
        for (int r : rows_)
            for (int j = 0; j < r; ++j) ++cols[static_cast<std::size_t>(j)];
        return cols;
    }
    [[nodiscard]] YoungTable transpose() const { return YoungTable(columns()); }
    [[nodiscard]] bool is_two_column() const { return !rows_.empty() && rows_[0] == 2; }

    bool operator==(const YoungTable&) const = default;

    [[nodiscard]] std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < rows_.size(); ++i) s += (i ? "," : "") + std::to_string(rows_[i]);
        return s + ")";
    }

private:
    std::vector<int> rows_;
};

/// Dimension of the GL(m) irreducible with highest weight lambda (hook-content formula).
inline mpz_class schur_dim(const YoungTable& t, int m) {
    if (m < 1) throw std::invalid_argument("dimension m must be positive");
    const std::vector<int> cols = t.columns();
    Rational d = 1;
    for (std::size_t i = 0; i < t.num_rows(); ++i)
        for (int j = 0; j < t.rows()[i]; ++j) {
            const int content = j - static_cast<int>(i);
            const int hook = (t.rows()[i] - j - 1) + (cols[static_cast<std::size_t>(j)] - static_cast<int>(i) - 1) + 1;
            d *= Rational(m + content, hook);
        }
    d.canonicalize();
    return d.get_num();
}

/// Highest weights of Mat(2) occurring in Omega_[2] of an m-dimensional chart: |p - q| <= m.
inline bool mat2_support(int p, int q, int m) { return std::abs(p - q) <= m; }

/// Move the bottom cell of each column to the end of the first row until the
/// second column has length one.
inline std::vector<YoungTable> tetris_sequence(const YoungTable& t) {
    if (!t.is_two_column()) throw std::invalid_argument("not a generic (two-column) table");
    const std::vector<int> cols = t.columns();
    std::vector<YoungTable> out;
    for (int k = 0; k < cols[1]; ++k) {
        std::vector<int> rows(static_cast<std::size_t>(cols[0] - k), 1);
        for (int i = 0; i < cols[1] - k; ++i) rows[static_cast<std::size_t>(i)] = 2;
        rows[0] += k;
        out.emplace_back(std::move(rows));
    }
    return out;
}

inline mpz_class tilde_dim(const YoungTable& t, int m) {
    mpz_class s = 0;
    for (const auto& piece : tetris_sequence(t)) s += schur_dim(piece, m);
    return s;
}

/// Constant-coefficient monomials of bidegree (p, q) in Omega_[2].
struct FiberSpace {
    Context ctx;
    int p = 0;
    int q = 0;
    std::vector<Monomial> basis;
    std::map<Monomial, std::size_t> index;

    [[nodiscard]] std::size_t dim() const { return basis.size(); }
    [[nodiscard]] Elem element(const SparseVec& v) const {
        Elem e(ctx);
        for (const auto& [j, c] : v) e.add_term(basis.at(j), Coef(ctx.nvars(), c));
        return e;
    }
    /// Coordinates of an element lying in this fiber.
    [[nodiscard]] SparseVec coordinates(const Elem& e) const {
        SparseVec v;
        for (const auto& [mono, c] : e.terms()) {
            auto it = index.find(mono);
            if (it == index.end() || !c.is_constant()) throw std::invalid_argument("element is not in the fiber");
            v[it->second] = c.constant_value();
        }
        return v;
    }
};

namespace detail {

inline void for_each_subset(int m, int size, const std::function<void(std::uint64_t)>& f) {
    if (size < 0 || size > m) return;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
        if (std::popcount(s) == size) f(s);
}

inline void for_each_multiset(int m, int size, std::vector<std::uint16_t>& cur, int from,
                              const std::function<void(const std::vector<std::uint16_t>&)>& f) {
    if (size == 0) {
        f(cur);
        return;
    }
    for (int i = from; i < m; ++i) {
        ++cur[static_cast<std::size_t>(i)];
        for_each_multiset(m, size - 1, cur, i, f);
        --cur[static_cast<std::size_t>(i)];
    }
}

}  // namespace detail

inline FiberSpace fiber_basis(const Context& ctx, int p, int q) {
    if (ctx.n() != 2) throw std::invalid_argument("requires n = 2");
    if (p < 0 || q < 0) throw std::invalid_argument("bidegree must be nonnegative");
    FiberSpace f{ctx, p, q, {}, {}};
    const int m = ctx.m();
    auto odd_mask = [&](std::uint64_t coords, unsigned subset) {
        std::uint64_t mask = 0;
        for (int i = 0; i < m; ++i)
            if (coords >> i & 1u) mask |= std::uint64_t{1} << ctx.generator(ctx.find(i, subset)).slot;
        return mask;
    };
    for (int k = 0; k <= std::min(p, q); ++k) {
        std::vector<std::uint16_t> ys(static_cast<std::size_t>(m), 0);
        detail::for_each_multiset(m, k, ys, 0, [&](const std::vector<std::uint16_t>& yexp) {
            detail::for_each_subset(m, p - k, [&](std::uint64_t a) {
                detail::for_each_subset(m, q - k, [&](std::uint64_t b) {
                    Monomial mono{odd_mask(a, 1u) | odd_mask(b, 2u), std::vector<std::uint16_t>(ctx.num_even(), 0)};
                    for (int i = 0; i < m; ++i) mono.even[ctx.generator(ctx.find(i, 3u)).slot] = yexp[static_cast<std::size_t>(i)];
                    f.basis.push_back(std::move(mono));
                });
            });
        });
    }
    std::sort(f.basis.begin(), f.basis.end());
    for (std::size_t j = 0; j < f.basis.size(); ++j) f.index.emplace(f.basis[j], j);
    return f;
}

/// Matrix of a fiberwise operator from a fiber to the fiber shifted by its bidegree.
inline SparseMatrix fiber_matrix(const FiberSpace& f, const Deriv& d) {
    if (!d.is_fiberwise()) throw std::invalid_argument("not fiberwise");
    if (f.p + d.shift()[0] < 0 || f.q + d.shift()[1] < 0) return SparseMatrix(0, f.dim());
    const FiberSpace target = fiber_basis(f.ctx, f.p + d.shift()[0], f.q + d.shift()[1]);
    SparseMatrix a(target.dim(), f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) {
        const Elem img = d.apply(f.element({{j, Rational(1)}}));
        for (const auto& [i, v] : target.coordinates(img)) a.set(i, j, v);
    }
    return a;
}

/// Exact basis of the joint kernel of fiberwise operators on a fiber.
inline std::vector<Elem> hw_kernel(const FiberSpace& f, const std::vector<Deriv>& ops) {
    SparseMatrix stacked(0, f.dim());
    for (const Deriv& d : ops) {
        const SparseMatrix a = fiber_matrix(f, d);
        stacked.data.insert(stacked.data.end(), a.data.begin(), a.data.end());
        stacked.rows += a.rows;
    }
    std::vector<Elem> out;
    for (const auto& v : nullspace(stacked)) out.push_back(f.element(v));
    return out;
}

/// Which raising operator defines highest weight.
///   E12: E_1^2 = xi_1 d/dxi_2 on bidegrees p >= q (default)
///   E21: E_2^1 = xi_2 d/dxi_1 on the transposed bidegrees q >= p
enum class RaisingConvention { E12, E21 };

inline std::string convention_name(RaisingConvention c) { return c == RaisingConvention::E12 ? "e12" : "e21"; }

inline std::vector<Deriv> highest_weight_ops(const Context& ctx, RaisingConvention c) {
    const Deriv e = c == RaisingConvention::E12 ? euler_op(ctx, 1, 2) : euler_op(ctx, 2, 1);
    return {e, r_op(ctx, 1), r_op(ctx, 2)};
}

/// Fiber bidegree whose highest-weight kernel realizes the two-column table t (columns c1 >= c2).
inline std::pair<int, int> kernel_bidegree(const YoungTable& t, RaisingConvention c) {
    const std::vector<int> cols = t.columns();
    const int c1 = cols.empty() ? 0 : cols[0], c2 = cols.size() > 1 ? cols[1] : 0;
    return c == RaisingConvention::E12 ? std::pair{c1, c2} : std::pair{c2, c1};
}

inline std::size_t hw_kernel_dim(int m, int p, int q, RaisingConvention c = RaisingConvention::E12) {
    const Context ctx = make_context(2, m);
    return hw_kernel(fiber_basis(ctx, p, q), highest_weight_ops(ctx, c)).size();
}

/// Mat(2) highest weights: kernel of the raising operator alone.
inline std::size_t mat2_hw_dim(int m, int p, int q, RaisingConvention c = RaisingConvention::E12) {
    const Context ctx = make_context(2, m);
    return hw_kernel(fiber_basis(ctx, p, q), {highest_weight_ops(ctx, c).front()}).size();
}

struct DecomposeEntry {
    int p = 0;
    int q = 0;
    std::size_t total = 0;
    mpz_class generic = 0;
    mpz_class remainder = 0;
    bool in_support = false;
    std::size_t mat2_hw_dim = 0;  // kernel of the raising operator
    std::size_t hw_dim = 0;       // kernel of the raising operator, R_1 and R_2
};

struct DecomposeReport {
    int m = 0;
    int max_degree = 0;
    RaisingConvention convention = RaisingConvention::E12;
    std::vector<DecomposeEntry> entries;
    [[nodiscard]] bool consistent() const {
        return std::all_of(entries.begin(), entries.end(), [](const DecomposeEntry& e) { return e.remainder >= 0; });
    }
};

/// Generic part of the (p, q) fiber: one copy of tilde_dim(l) for every two-column
/// table l whose Mat(2) module has a weight space at (p, q).
inline mpz_class generic_count(int p, int q, int m) {
    if (p == 0 && q == 0) return 1;
    mpz_class s = 0;
    for (int c2 = 1; c2 <= std::min(p, q); ++c2) s += tilde_dim(YoungTable::from_columns(p + q - c2, c2), m);
    return s;
}

inline DecomposeReport decompose_report(int m, int max_degree, RaisingConvention c = RaisingConvention::E12) {
    if (max_degree < 0) throw std::invalid_argument("max degree must be nonnegative");
    DecomposeReport r{m, max_degree, c, {}};
    const Context ctx = make_context(2, m);
    const auto ops = highest_weight_ops(ctx, c);
    for (int total = 0; total <= max_degree; ++total)
        for (int p = total; p >= 0; --p) {
            const int q = total - p;
            DecomposeEntry e;
            e.p = p;
            e.q = q;
            const FiberSpace f = fiber_basis(ctx, p, q);
            e.total = f.dim();
            e.in_support = mat2_support(p, q, m);
            e.generic = e.in_support ? generic_count(p, q, m) : mpz_class(0);
            e.remainder = mpz_class(static_cast<unsigned long>(e.total)) - e.generic;
            e.mat2_hw_dim = hw_kernel(f, {ops.front()}).size();
            e.hw_dim = hw_kernel(f, ops).size();
            r.entries.push_back(std::move(e));
        }
    return r;
}

}  // namespace gorms
