#pragma once

// Small dense matrices over the coefficient field.

#include "gorms/coef.hpp"

#include <vector>

namespace gorms {

using CoefMatrix = std::vector<std::vector<Coef>>;

inline CoefMatrix coef_identity(std::size_t size, std::size_t nvars) {
    CoefMatrix a(size, std::vector<Coef>(size, Coef(nvars)));
    for (std::size_t i = 0; i < size; ++i) a[i][i] = Coef(nvars, 1);
    return a;
}

inline bool is_symmetric(const CoefMatrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!(a[i][j] == a[j][i])) return false;
    return true;
}

/// Determinant by Gaussian elimination over the field.
inline Coef determinant(CoefMatrix a) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    const std::size_t nv = a[0][0].nvars();
    Coef det(nv, 1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return Coef(nv);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        const Coef inv = a[col][col].inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            const Coef f = a[r][col] * inv;
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
        }
    }
    return det;
}

/// Inverse by Gauss-Jordan; throws "singular matrix" when not invertible.
inline CoefMatrix inverse(CoefMatrix a) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    const std::size_t nv = a[0][0].nvars();
    CoefMatrix inv = coef_identity(n, nv);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const Coef s = a[col][col].inverse();
        for (std::size_t k = 0; k < n; ++k) {
            a[col][k] *= s;
            inv[col][k] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Coef f = a[r][col];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[col][k];
                inv[r][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

}  // namespace gorms
