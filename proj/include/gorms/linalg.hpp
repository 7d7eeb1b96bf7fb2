#pragma once

// Exact sparse linear algebra over Q: rank, reduced echelon form, nullspace,
// span membership.

#include "gorms/poly.hpp"

#include <map>
#include <vector>

namespace gorms {

using SparseVec = std::map<std::size_t, Rational>;

inline void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
    if (a == 0) return;
    for (const auto& [j, v] : x) {
        auto [it, inserted] = y.try_emplace(j, a * v);
        if (!inserted) {
            it->second += a * v;
            if (it->second == 0) y.erase(it);
        }
    }
}

/// Incrementally built row-echelon basis of a subspace of Q^cols.
class EchelonBasis {
public:
    /// Reduces `v` against the basis; returns true when it was independent (and adds it).
    bool insert(SparseVec v) {
        reduce(v);
        if (v.empty()) return false;
        const auto [pivot, lead] = *v.begin();
        const Rational inv = 1 / lead;
        for (auto& [j, x] : v) x *= inv;
        rows_.emplace(pivot, std::move(v));
        return true;
    }
    /// Leading-term reduction: afterwards no pivot column of the basis remains.
    void reduce(SparseVec& v) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto row = rows_.find(it->first);
            if (row == rows_.end()) {
                ++it;
                continue;
            }
            const std::size_t col = it->first;
            const Rational a = -it->second;
            axpy(v, a, row->second);
            it = v.upper_bound(col);
        }
    }
    [[nodiscard]] bool contains(SparseVec v) const {
        reduce(v);
        return v.empty();
    }
    [[nodiscard]] std::size_t rank() const { return rows_.size(); }
    [[nodiscard]] const std::map<std::size_t, SparseVec>& rows() const { return rows_; }

    /// Back-substitutes so each pivot column is zero in every other row.
    void make_reduced() {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            const std::size_t p = it->first;
            for (auto& [q, row] : rows_) {
                if (q >= p) break;
                auto hit = row.find(p);
                if (hit != row.end()) {
                    const Rational a = -hit->second;
                    axpy(row, a, it->second);
                }
            }
        }
    }

private:
    std::map<std::size_t, SparseVec> rows_;
};

/// Sparse matrix stored by rows.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseVec> data;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r) {}

    void set(std::size_t i, std::size_t j, const Rational& v) {
        if (v == 0) data.at(i).erase(j);
        else data.at(i)[j] = v;
    }
    [[nodiscard]] Rational get(std::size_t i, std::size_t j) const {
        auto it = data.at(i).find(j);
        return it == data[i].end() ? Rational(0) : it->second;
    }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(data.begin(), data.end(), [](const SparseVec& r) { return r.empty(); });
    }
    [[nodiscard]] SparseMatrix transpose() const {
        SparseMatrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (const auto& [j, v] : data[i]) t.data[j][i] = v;
        return t;
    }
    [[nodiscard]] SparseVec apply(const SparseVec& x) const {
        SparseVec y;
        for (std::size_t i = 0; i < rows; ++i) {
            Rational s = 0;
            for (const auto& [j, v] : data[i]) {
                auto it = x.find(j);
                if (it != x.end()) s += v * it->second;
            }
            if (s != 0) y[i] = s;
        }
        return y;
    }
    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch");
        SparseMatrix c(a.rows, b.cols);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (const auto& [k, v] : a.data[i]) axpy(c.data[i], v, b.data[k]);
        return c;
    }
};

inline std::size_t rank(const SparseMatrix& a) {
    EchelonBasis e;
    for (const auto& r : a.data) e.insert(r);
    return e.rank();
}

/// Basis of {x : A x = 0}, one vector per free column.
inline std::vector<SparseVec> nullspace(const SparseMatrix& a) {
    EchelonBasis e;
    for (const auto& r : a.data) e.insert(r);
    e.make_reduced();
    std::vector<SparseVec> basis;
    for (std::size_t f = 0; f < a.cols; ++f) {
        if (e.rows().count(f)) continue;
        SparseVec v;
        v[f] = 1;
        for (const auto& [p, row] : e.rows()) {
            auto it = row.find(f);
            if (it != row.end()) v[p] = -it->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Column space of A as an echelon basis (columns become rows).
inline EchelonBasis column_space(const SparseMatrix& a) {
    EchelonBasis e;
    for (const auto& c : a.transpose().data) e.insert(c);
    return e;
}

}  // namespace gorms
