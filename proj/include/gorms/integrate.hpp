#pragma once

// Berezin integration of pseudodifferential gorms e^{-y^T B y} * poly, Wick
// evaluation of the y-integral, and the Euler-characteristic pipeline.
//
// Berezin convention: the odd measure takes the coefficient of the product of
// all chart odd generators in context order, i.e. xi_1^1 xi_2^1 ... xi_1^m xi_2^m
// for n = 2. Reversing that order flips the sign of every integral.

#include "gorms/calculus.hpp"
#include "gorms/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace gorms {

struct MetricSpec {
    int dim = 0;
    std::vector<std::string> coords;
    CoefMatrix metric;
    Domain domain;
    std::optional<int> euler_char;
};

inline void validate_metric(const MetricSpec& g) {
    if (g.dim < 1) throw std::invalid_argument("metric dimension must be positive");
    const auto m = static_cast<std::size_t>(g.dim);
    if (g.coords.size() != m) throw std::invalid_argument("coords: expected one name per dimension");
    if (g.metric.size() != m) throw std::invalid_argument("metric: expected a square matrix of size dim");
    for (const auto& row : g.metric)
        if (row.size() != m) throw std::invalid_argument("metric: expected a square matrix of size dim");
    if (!is_symmetric(g.metric)) throw std::invalid_argument("metric: matrix is not symmetric");
    if (determinant(g.metric).is_zero()) throw std::invalid_argument("metric: determinant vanishes identically");
}

/// beta = b_ij d1x^i d2x^j and its image d1 d2 beta.
inline Elem metric_beta(const Context& ctx, const CoefMatrix& b) {
    if (ctx.n() != 2) throw std::invalid_argument("requires n = 2");
    if (b.size() != ctx.nvars()) throw std::invalid_argument("metric dimension differs from chart dimension");
    Elem beta(ctx);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            beta += (gen_elem(ctx, static_cast<int>(i), 1u) * gen_elem(ctx, static_cast<int>(j), 2u)).scaled(b[i][j]);
    return beta;
}

inline Elem d1d2_beta(const Context& ctx, const MetricSpec& g) {
    if (static_cast<int>(ctx.nvars()) != g.dim) throw std::invalid_argument("dimension mismatch between context and metric");
    return d_op(ctx, 1).apply(d_op(ctx, 2).apply(metric_beta(ctx, g.metric)));
}

/// Riemann tensor R_ijkl = g_im R^m_jkl with
/// R^m_jkl = d_k G^m_lj - d_l G^m_kj + G^m_kp G^p_lj - G^m_lp G^p_kj.
using Riemann = std::vector<std::vector<std::vector<std::vector<Coef>>>>;

inline Riemann curvature(const CoefMatrix& g) {
    const std::size_t m = g.size();
    const std::size_t nv = g[0][0].nvars();
    CoefMatrix ginv;
    try {
        ginv = inverse(g);
    } catch (const std::domain_error&) {
        throw std::invalid_argument("singular metric");
    }
    // dg[k][i][j] = d_k g_ij
    std::vector<CoefMatrix> dg(m, CoefMatrix(m, std::vector<Coef>(m)));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) dg[k][i][j] = g[i][j].partial(k);
    // gamma[a][i][j] = G^a_ij
    std::vector<CoefMatrix> gamma(m, CoefMatrix(m, std::vector<Coef>(m, Coef(nv))));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                Coef s(nv);
                for (std::size_t l = 0; l < m; ++l) {
                    if (ginv[a][l].is_zero()) continue;
                    s += ginv[a][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                }
                gamma[a][i][j] = gamma[a][j][i] = s.scaled(Rational(1, 2));
            }
    Riemann up(m, std::vector<std::vector<std::vector<Coef>>>(m, std::vector<std::vector<Coef>>(m, std::vector<Coef>(m, Coef(nv)))));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = k + 1; l < m; ++l) {
                    Coef s = gamma[a][l][j].partial(k) - gamma[a][k][j].partial(l);
                    for (std::size_t p = 0; p < m; ++p) s += gamma[a][k][p] * gamma[p][l][j] - gamma[a][l][p] * gamma[p][k][j];
                    up[a][j][k][l] = s;
                    up[a][j][l][k] = -s;
                }
    Riemann low(m, std::vector<std::vector<std::vector<Coef>>>(m, std::vector<std::vector<Coef>>(m, std::vector<Coef>(m, Coef(nv)))));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) {
                    Coef s(nv);
                    for (std::size_t a = 0; a < m; ++a)
                        if (!g[i][a].is_zero()) s += g[i][a] * up[a][j][k][l];
                    low[i][j][k][l] = s;
                }
    return low;
}

/// Represents e^{-y^T B y} * (e^{-|x|^2} if gaussian_x) * poly.
struct PseudoGorm {
    CoefMatrix b;  // over the even generators of the context
    Elem poly;
    bool gaussian_x = false;
};

/// Even generators (the y's for n = 2) indexed by their even slot.
inline std::size_t y_dimension(const Context& ctx) { return ctx.num_even(); }

inline Elem even_slot_elem(const Context& ctx, std::size_t slot) { return Elem::generator(ctx, ctx.even_id(slot)); }

/// -y^T B y as a worm.
inline Elem gaussian_exponent(const Context& ctx, const CoefMatrix& b) {
    Elem q(ctx);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[i][j].is_zero()) q -= (even_slot_elem(ctx, i) * even_slot_elem(ctx, j)).scaled(b[i][j]);
    return q;
}

/// The full exponent -y^T B y (- |x|^2 when the x-weight is present).
inline Elem total_exponent(const Context& ctx, const PseudoGorm& p) {
    Elem q = gaussian_exponent(ctx, p.b);
    if (p.gaussian_x)
        for (std::size_t i = 0; i < ctx.nvars(); ++i) q -= Elem::coordinate(ctx, i).pow(2);
    return q;
}

/// exp of an even worm Q + N with Q = -y^T B y and N nilpotent.
inline PseudoGorm exp_gorm(const Elem& e) {
    const Context& ctx = e.ctx();
    const std::size_t k = y_dimension(ctx);
    const std::size_t nv = ctx.nvars();
    PseudoGorm out;
    out.b.assign(k, std::vector<Coef>(k, Coef(nv)));
    Elem nil(ctx);
    for (const auto& [mono, c] : e.terms()) {
        if (mono.odd_count() % 2) throw std::invalid_argument("exponent is not even");
        if (mono.odd) {
            nil.add_term(mono, c);
            continue;
        }
        if (mono.even_degree() != 2) throw std::invalid_argument("non-Gaussian even part");
        std::vector<std::size_t> idx;
        for (std::size_t s = 0; s < mono.even.size(); ++s)
            for (unsigned r = 0; r < mono.even[s]; ++r) idx.push_back(s);
        if (idx[0] == idx[1]) out.b[idx[0]][idx[0]] -= c;
        else {
            const Coef half = c.scaled(Rational(-1, 2));
            out.b[idx[0]][idx[1]] += half;
            out.b[idx[1]][idx[0]] += half;
        }
    }
    Elem term = Elem::constant(ctx, Rational(1));
    out.poly = term;
    for (unsigned j = 1;; ++j) {
        term = (term * nil).scaled(Rational(1, j));
        if (term.is_zero()) break;
        out.poly += term;
    }
    return out;
}

/// Coefficient of the top chart odd monomial (an even-generator polynomial).
inline Elem berezin_top(const Elem& e) {
    const Context& ctx = e.ctx();
    const std::uint64_t top = ctx.chart_top_mask();
    Elem out(ctx);
    for (const auto& [mono, c] : e.terms()) {
        if (mono.odd != top) continue;
        Monomial rest = mono;
        rest.odd = 0;
        out.add_term(rest, c);
    }
    return out;
}

/// Exact Gaussian y-integral: value = rat * pi^{k/2} / sqrt(det B).
struct WickResult {
    Coef rat;
    Coef det;
    std::size_t k = 0;

    [[nodiscard]] double value(std::span<const double> x) const {
        const double d = k ? det.eval(x) : 1.0;
        if (!(d > 0)) throw std::domain_error("Gaussian weight is not positive definite");
        return rat.eval(x) * std::pow(std::numbers::pi, 0.5 * static_cast<double>(k)) / std::sqrt(d);
    }
};

inline WickResult wick(const CoefMatrix& b, const Elem& q) {
    const Context& ctx = q.ctx();
    const std::size_t k = b.size();
    const std::size_t nv = ctx.nvars();
    if (k != y_dimension(ctx)) throw std::invalid_argument("Gaussian matrix size differs from the number of even generators");
    WickResult r{Coef(nv), Coef(nv, 1), k};
    CoefMatrix cov;
    if (k) {
        r.det = determinant(b);
        if (r.det.is_zero()) throw std::invalid_argument("singular Gaussian matrix");
        cov = inverse(b);
        for (auto& row : cov)
            for (auto& c : row) c = c.scaled(Rational(1, 2));
    }
    std::map<std::vector<std::uint16_t>, Coef> memo;
    std::function<Coef(const std::vector<std::uint16_t>&)> moment = [&](const std::vector<std::uint16_t>& a) -> Coef {
        unsigned total = 0;
        for (auto e : a) total += e;
        if (total == 0) return Coef(nv, 1);
        if (total % 2) return Coef(nv);
        if (auto it = memo.find(a); it != memo.end()) return it->second;
        std::size_t i = 0;
        while (a[i] == 0) ++i;
        std::vector<std::uint16_t> rest = a;
        rest[i] -= 1;
        Coef s(nv);
        for (std::size_t j = 0; j < k; ++j) {
            if (rest[j] == 0 || cov[i][j].is_zero()) continue;
            std::vector<std::uint16_t> next = rest;
            next[j] -= 1;
            s += cov[i][j].scaled(Rational(rest[j])) * moment(next);
        }
        memo.emplace(a, s);
        return s;
    };
    for (const auto& [mono, c] : q.terms()) {
        if (mono.odd) throw std::invalid_argument("Wick integrand must not contain odd generators");
        r.rat += c * moment(mono.even);
    }
    return r;
}

/// Numeric positive-definiteness test (Cholesky) of B at a point.
inline bool positive_definite_at(const std::vector<std::vector<CompiledCoef>>& b, std::span<const double> x) {
    const std::size_t k = b.size();
    std::vector<double> l(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = b[i][j](x);
            for (std::size_t p = 0; p < j; ++p) s -= l[i * k + p] * l[j * k + p];
            if (i == j) {
                if (!(s > 0)) return false;
                l[i * k + i] = std::sqrt(s);
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    return true;
}

struct GormIntegral {
    double value = 0;
    double error_estimate = 0;
    bool symbolic_zero = false;  // no top-degree content survives the Wick stage
    WickResult wick;
    std::size_t evaluations = 0;
};

/// Integrand in x after the odd and y integrations.
inline Integrand reduced_integrand(const WickResult& w, const CoefMatrix& b) {
    auto rat = std::make_shared<CompiledCoef>(w.rat);
    auto det = std::make_shared<CompiledCoef>(w.det);
    auto bm = std::make_shared<std::vector<std::vector<CompiledCoef>>>();
    for (const auto& row : b) {
        bm->emplace_back();
        for (const auto& c : row) bm->back().emplace_back(c);
    }
    const double factor = std::pow(std::numbers::pi, 0.5 * static_cast<double>(w.k));
    return [rat, det, bm, factor, k = w.k](std::span<const double> x) {
        if (k && !positive_definite_at(*bm, x)) {
            std::string where;
            for (double v : x) where += (where.empty() ? "" : ", ") + std::to_string(v);
            throw std::domain_error("Gaussian weight is not positive definite at (" + where + ")");
        }
        const double d = k ? (*det)(x) : 1.0;
        return (*rat)(x) * factor / std::sqrt(d);
    };
}

inline GormIntegral integrate_gorm(const PseudoGorm& g, const Domain& domain, const QuadSettings& s = {}) {
    const Context& ctx = g.poly.ctx();
    GormIntegral out;
    out.wick = wick(g.b, berezin_top(g.poly));
    if (out.wick.rat.is_zero()) {
        out.symbolic_zero = true;
        return out;
    }
    if (g.gaussian_x && domain.kind != Domain::Kind::Gaussian)
        throw std::invalid_argument("gorm carries a Gaussian x-weight; integrate it over the gaussian domain");
    if (!g.gaussian_x && domain.kind == Domain::Kind::Gaussian)
        throw std::invalid_argument("gaussian domain requires a gorm with the Gaussian x-weight");
    const QuadResult q = quadrature(reduced_integrand(out.wick, g.b), domain, ctx.nvars(), s);
    out.value = q.value;
    out.error_estimate = q.error_estimate;
    out.evaluations = q.evaluations;
    return out;
}

/// D applied to e^{Q} P is e^{Q} (D(Q) P + D(P)).
inline PseudoGorm apply_deriv(const Deriv& d, const PseudoGorm& g) {
    const Elem q = total_exponent(g.poly.ctx(), g);
    return PseudoGorm{g.b, d.apply(q) * g.poly + d.apply(g.poly), g.gaussian_x};
}

inline double stokes_check(const Deriv& d, const PseudoGorm& g, const Domain& domain, const QuadSettings& s = {}) {
    return integrate_gorm(apply_deriv(d, g), domain, s).value;
}

/// Area of the unit sphere S^m in R^{m+1}.
inline double sphere_area(int m) {
    return 2 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

struct EulerReport {
    double value = 0;
    double error_estimate = 0;
    bool symbolic_zero = false;
    std::optional<double> predicted;       // (1/2)(-pi)^{m/2} S_m chi
    std::optional<double> relative_error;  // against predicted
    std::size_t nodes_per_axis = 0;
    std::size_t evaluations = 0;
    std::string domain;
    std::string sign_note;
    std::vector<std::string> warnings;
};

inline EulerReport euler_integral(const MetricSpec& g, const QuadSettings& s = {}) {
    validate_metric(g);
    const Context ctx = Context::make(2, g.dim, g.coords);
    const PseudoGorm pg = exp_gorm(d1d2_beta(ctx, g));
    EulerReport r;
    r.domain = g.domain.name();
    r.nodes_per_axis = s.nodes;
    r.sign_note = "odd measure: coefficient of d1(x1) d2(x1) ... d1(xm) d2(xm) in this order; reversing the order flips the sign";
    if (g.dim % 2) r.warnings.push_back("odd dimension: the Pfaffian vanishes and no prediction is made");
    const GormIntegral gi = integrate_gorm(pg, g.domain, s);
    r.value = gi.value;
    r.error_estimate = gi.error_estimate;
    r.symbolic_zero = gi.symbolic_zero;
    r.evaluations = gi.evaluations;
    if (g.euler_char && g.dim % 2 == 0) {
        const double sign = (g.dim / 2) % 2 ? -1.0 : 1.0;
        const double pred = 0.5 * sign * std::pow(std::numbers::pi, g.dim / 2) * sphere_area(g.dim) * *g.euler_char;
        r.predicted = pred == 0 ? 0.0 : pred;
        if (pred != 0) r.relative_error = std::abs(r.value - pred) / std::abs(pred);
        else r.relative_error = std::abs(r.value);
    }
    return r;
}

}  // namespace gorms
