#pragma once

// Vector fields on R^{0|2} with constant Grassmann coefficients, computed
// directly in the theta variables. Used as an independent reference for the
// brackets of d_a, E_a^b and R_a.

#include "gorms/calculus.hpp"

namespace gorms::verify {

/// Element of the Grassmann algebra in theta^1, theta^2; index 3 is theta^2 theta^1.
struct Grassmann2 {
    std::array<Rational, 4> c{};

    static Grassmann2 basis(unsigned t) {
        Grassmann2 g;
        g.c[t] = 1;
        return g;
    }
    friend Grassmann2 operator+(Grassmann2 a, const Grassmann2& b) {
        for (int i = 0; i < 4; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend Grassmann2 operator*(const Grassmann2& a, const Grassmann2& b) {
        Grassmann2 r;
        for (unsigned t = 0; t < 4; ++t)
            for (unsigned u = 0; u < 4; ++u) {
                if (a.c[t] == 0 || b.c[u] == 0) continue;
                const int s = theta_product_sign(t, u);
                if (s) r.c[t | u] += s * a.c[t] * b.c[u];
            }
        return r;
    }
    [[nodiscard]] Grassmann2 scaled(const Rational& q) const {
        Grassmann2 r = *this;
        for (auto& x : r.c) x *= q;
        return r;
    }
    /// Left derivative d/dtheta^a.
    [[nodiscard]] Grassmann2 partial(int a) const {
        const unsigned bit = 1u << (a - 1);
        Grassmann2 r;
        for (unsigned t = 0; t < 4; ++t) {
            if (!(t & bit) || c[t] == 0) continue;
            // theta^T is stored in descending order; count factors ahead of theta^a.
            const int ahead = std::popcount(t & ~((bit << 1) - 1));
            r.c[t & ~bit] += ahead % 2 ? -c[t] : c[t];
        }
        return r;
    }
    bool operator==(const Grassmann2&) const = default;
};

/// u = f^1 d/dtheta^1 + f^2 d/dtheta^2, homogeneous of the given parity.
struct ThetaField {
    std::array<Grassmann2, 2> f{};
    int parity = 0;

    [[nodiscard]] Grassmann2 apply(const Grassmann2& g) const { return f[0] * g.partial(1) + f[1] * g.partial(2); }
    bool operator==(const ThetaField& o) const { return f == o.f; }
    [[nodiscard]] bool is_zero() const { return f[0] == Grassmann2{} && f[1] == Grassmann2{}; }
};

inline ThetaField theta_bracket(const ThetaField& u, const ThetaField& v) {
    ThetaField r;
    r.parity = (u.parity + v.parity) & 1;
    const Rational s = (u.parity & v.parity) ? 1 : -1;
    for (int b = 0; b < 2; ++b) r.f[b] = u.apply(v.f[b]) + v.apply(u.f[b]).scaled(s);
    return r;
}

/// theta^T d/dtheta^a for T in {0, {1}, {2}, {2,1}} and a in {1,2}.
inline ThetaField theta_basis_field(unsigned t, int a) {
    ThetaField u;
    u.f[static_cast<std::size_t>(a - 1)] = Grassmann2::basis(t);
    u.parity = (std::popcount(t) + 1) & 1;
    return u;
}

/// The operator attached to theta^T d/dtheta^a: d_a, E_a^b (T = {b}) or R_a.
inline Deriv structure_operator(const Context& ctx, unsigned t, int a) {
    if (t == 0) return d_op(ctx, a);
    if (t == 3u) return r_op(ctx, a);
    return euler_op(ctx, a, t == 1u ? 1 : 2);
}

inline std::string theta_field_name(unsigned t, int a) {
    const std::string idx = std::to_string(a);
    if (t == 0) return "d" + idx;
    if (t == 3u) return "R" + idx;
    return "E" + idx + (t == 1u ? "^1" : "^2");
}

/// Operator image of a field: linear in the Grassmann coefficients.
inline std::optional<Deriv> structure_image(const Context& ctx, const ThetaField& u) {
    std::optional<Deriv> acc;
    for (int a = 1; a <= 2; ++a)
        for (unsigned t = 0; t < 4; ++t) {
            const Rational& q = u.f[static_cast<std::size_t>(a - 1)].c[t];
            if (q == 0) continue;
            Deriv term = structure_operator(ctx, t, a).scaled(q);
            acc = acc ? *acc + term : term;
        }
    return acc;
}

struct BracketCheck {
    std::string lhs;
    std::string rhs;
    bool ok = false;
};

/// Compares [Op(u), Op(v)] with -Op([u, v]) for every pair of basis fields.
inline std::vector<BracketCheck> bracket_table(const Context& ctx) {
    std::vector<BracketCheck> out;
    for (int a = 1; a <= 2; ++a)
        for (unsigned t = 0; t < 4; ++t)
            for (int b = 1; b <= 2; ++b)
                for (unsigned s = 0; s < 4; ++s) {
                    const ThetaField u = theta_basis_field(t, a), v = theta_basis_field(s, b);
                    const Deriv lhs = bracket(structure_operator(ctx, t, a), structure_operator(ctx, s, b));
                    const ThetaField w = theta_bracket(u, v);
                    const auto rhs = structure_image(ctx, w);
                    BracketCheck c;
                    c.lhs = "[" + theta_field_name(t, a) + "," + theta_field_name(s, b) + "]";
                    c.ok = rhs ? lhs == -*rhs : lhs.is_zero();
                    std::string expr;
                    for (int k = 1; k <= 2; ++k)
                        for (unsigned r = 0; r < 4; ++r) {
                            const Rational& q = w.f[static_cast<std::size_t>(k - 1)].c[r];
                            if (q == 0) continue;
                            const Rational neg = -q;
                            if (!expr.empty()) expr += neg < 0 ? " - " : " + ";
                            else if (neg < 0) expr += "-";
                            const Rational mag = abs(neg);
                            if (mag != 1) expr += mag.get_str() + "*";
                            expr += theta_field_name(r, k);
                        }
                    c.rhs = expr.empty() ? "0" : expr;
                    out.push_back(std::move(c));
                }
    return out;
}

}  // namespace gorms::verify
