#pragma once

// Tensor-product quadrature over chart domains. Node sums are split by outer
// index across worker threads and reduced in index order, so the result does
// not depend on the worker count.

#include <gsl/gsl_integration.h>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gorms {

struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

inline Rule1D gsl_fixed_rule(const gsl_integration_fixed_type* type, std::size_t n, double a, double b) {
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
        gsl_integration_fixed_alloc(type, n, a, b, 0.0, 0.0), &gsl_integration_fixed_free);
    if (!ws) throw std::runtime_error("quadrature rule allocation failed");
    const double* x = gsl_integration_fixed_nodes(ws.get());
    const double* w = gsl_integration_fixed_weights(ws.get());
    return Rule1D{std::vector<double>(x, x + n), std::vector<double>(w, w + n)};
}

}  // namespace detail

/// Gauss-Legendre rule on [a, b].
inline Rule1D gauss_legendre(std::size_t n, double a, double b) {
    return detail::gsl_fixed_rule(gsl_integration_fixed_legendre, n, a, b);
}

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
inline Rule1D gauss_hermite(std::size_t n) { return detail::gsl_fixed_rule(gsl_integration_fixed_hermite, n, 0.0, 1.0); }

struct Domain {
    enum class Kind { Plane, Rectangle, Disk, Gaussian };
    Kind kind = Kind::Plane;
    std::vector<double> lo, hi;  // rectangle bounds
    double radius = 1.0;         // disk radius

    static Domain plane() { return {}; }
    static Domain gaussian() { return {Kind::Gaussian, {}, {}, 1.0}; }
    static Domain disk(double r) { return {Kind::Disk, {}, {}, r}; }
    static Domain rectangle(std::vector<double> lo, std::vector<double> hi) {
        return {Kind::Rectangle, std::move(lo), std::move(hi), 1.0};
    }
    [[nodiscard]] std::string name() const {
        switch (kind) {
            case Kind::Plane: return "plane";
            case Kind::Rectangle: return "rectangle";
            case Kind::Disk: return "disk";
            case Kind::Gaussian: return "gaussian";
        }
        return "?";
    }
};

struct QuadSettings {
    std::size_t nodes = 400;  // per axis
    unsigned workers = 0;     // 0 = hardware concurrency
    bool refine_check = true; // compare with a half-resolution grid
};

struct QuadResult {
    double value = 0;
    double error_estimate = 0;
    std::size_t nodes_per_axis = 0;
    std::size_t evaluations = 0;
};

/// f(x) for x in the chart; for Domain::Gaussian the weight exp(-|x|^2) is implicit.
using Integrand = std::function<double(std::span<const double>)>;

namespace detail {

// A tensor grid in parameter space plus the map to chart coordinates.
struct Grid {
    std::vector<Rule1D> axes;
    std::function<double(std::span<const double> t, std::span<double> x)> to_chart;  // returns Jacobian
};

inline Grid make_grid(const Domain& d, std::size_t m, std::size_t n) {
    Grid g;
    switch (d.kind) {
        case Domain::Kind::Gaussian:
            g.axes.assign(m, gauss_hermite(n));
            g.to_chart = [](std::span<const double> t, std::span<double> x) {
                std::copy(t.begin(), t.end(), x.begin());
                return 1.0;
            };
            break;
        case Domain::Kind::Rectangle:
            if (d.lo.size() != m || d.hi.size() != m) throw std::invalid_argument("rectangle bounds must have one entry per coordinate");
            for (std::size_t i = 0; i < m; ++i) g.axes.push_back(gauss_legendre(n, d.lo[i], d.hi[i]));
            g.to_chart = [](std::span<const double> t, std::span<double> x) {
                std::copy(t.begin(), t.end(), x.begin());
                return 1.0;
            };
            break;
        case Domain::Kind::Disk:
            if (m != 2) throw std::invalid_argument("disk domain requires two coordinates");
            g.axes = {gauss_legendre(n, 0.0, d.radius), gauss_legendre(n, 0.0, 2 * std::numbers::pi)};
            g.to_chart = [](std::span<const double> t, std::span<double> x) {
                x[0] = t[0] * std::cos(t[1]);
                x[1] = t[0] * std::sin(t[1]);
                return t[0];
            };
            break;
        case Domain::Kind::Plane:
            if (m == 2) {
                // polar form with r = s / (1 - s)
                g.axes = {gauss_legendre(n, 0.0, 1.0), gauss_legendre(n, 0.0, 2 * std::numbers::pi)};
                g.to_chart = [](std::span<const double> t, std::span<double> x) {
                    const double s = t[0], r = s / (1 - s);
                    x[0] = r * std::cos(t[1]);
                    x[1] = r * std::sin(t[1]);
                    return r / ((1 - s) * (1 - s));
                };
            } else {
                // per axis x = t / (1 - t^2)
                g.axes.assign(m, gauss_legendre(n, -1.0, 1.0));
                g.to_chart = [](std::span<const double> t, std::span<double> x) {
                    double jac = 1;
                    for (std::size_t i = 0; i < t.size(); ++i) {
                        const double u = 1 - t[i] * t[i];
                        x[i] = t[i] / u;
                        jac *= (1 + t[i] * t[i]) / (u * u);
                    }
                    return jac;
                };
            }
            break;
    }
    return g;
}

inline double grid_sum(const Grid& g, const Integrand& f, unsigned workers, std::size_t& evaluations) {
    const std::size_t m = g.axes.size();
    const std::size_t n0 = g.axes[0].x.size();
    std::size_t inner = 1;
    for (std::size_t i = 1; i < m; ++i) inner *= g.axes[i].x.size();
    evaluations += n0 * inner;
    std::vector<double> partial(n0, 0.0);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned wid) {
        std::vector<double> t(m), x(m);
        std::vector<std::size_t> idx(m, 0);
        try {
            for (std::size_t i0 = wid; i0 < n0; i0 += workers) {
                double row = 0;
                for (std::size_t k = 0; k < inner; ++k) {
                    std::size_t rem = k;
                    double w = g.axes[0].w[i0];
                    t[0] = g.axes[0].x[i0];
                    for (std::size_t a = m; a-- > 1;) {
                        const std::size_t na = g.axes[a].x.size();
                        idx[a] = rem % na;
                        rem /= na;
                        t[a] = g.axes[a].x[idx[a]];
                        w *= g.axes[a].w[idx[a]];
                    }
                    if (w == 0) continue;
                    const double jac = g.to_chart(t, x);
                    const double v = f(x);
                    if (!std::isfinite(v)) throw std::domain_error("non-finite integrand value");
                    row += w * jac * v;
                }
                partial[i0] = row;
            }
        } catch (...) {
            errors[wid] = std::current_exception();
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wid = 0; wid < workers; ++wid) pool.emplace_back(run, wid);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    double total = 0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace detail

inline unsigned resolve_workers(unsigned requested) {
    if (requested) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline QuadResult quadrature(const Integrand& f, const Domain& domain, std::size_t m, const QuadSettings& s = {}) {
    if (m == 0) throw std::invalid_argument("quadrature needs at least one coordinate");
    if (s.nodes < 2) throw std::invalid_argument("quadrature needs at least two nodes per axis");
    const unsigned workers = resolve_workers(s.workers);
    QuadResult r;
    r.nodes_per_axis = s.nodes;
    r.value = detail::grid_sum(detail::make_grid(domain, m, s.nodes), f, workers, r.evaluations);
    if (s.refine_check) {
        const double coarse = detail::grid_sum(detail::make_grid(domain, m, s.nodes / 2), f, workers, r.evaluations);
        r.error_estimate = std::abs(r.value - coarse);
    }
    return r;
}

}  // namespace gorms
