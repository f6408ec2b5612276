#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "nnlln/cone_order.hpp"

namespace nnlln {

/// log Gamma(x) for x > 0. Wraps the C library's log-domain implementation,
/// which is accurate to well below 1e-12 relative error on [0.5, 50].
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

namespace detail {

// Volume of the unit d-ball, d >= 0 (v_0 = 1).
inline double ball_volume(int d) {
    return std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * d));
}

// Integral of sin^d over [0, pi/3] by the textbook reduction formula.
inline double sin_power_integral_to_pi_third(int d) {
    const double boundary = std::sqrt(3.0) / 2.0;  // sin(pi/3)
    double even = std::numbers::pi / 3.0;           // d = 0
    double odd = 0.5;                               // d = 1
    if (d == 0) return even;
    if (d == 1) return odd;
    double value = 0.0;
    for (int n = 2; n <= d; ++n) {
        double& prev = (n % 2 == 0) ? even : odd;
        value = (-0.5 * std::pow(boundary, n - 1) + (n - 1) * prev) / n;
        prev = value;
    }
    return value;
}

// Adaptive Simpson quadrature, plain recursive bisection.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// v_d, the volume of the Euclidean unit d-ball.
inline double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
    return detail::ball_volume(d);
}

/// omega_d, the volume of the union of two unit d-balls whose centres are
/// unit distance apart: 2 v_d minus the lens, evaluated as twice the
/// spherical cap of height 1/2 through the sin-power reduction formula.
inline double union_two_balls_volume(int d) {
    if (d < 1) throw std::invalid_argument("union_two_balls_volume: dimension must be >= 1");
    return 2.0 * detail::ball_volume(d) -
           2.0 * detail::ball_volume(d - 1) * detail::sin_power_integral_to_pi_third(d);
}

/// Independent slab-integration route to omega_d: concentric cross-sections
/// perpendicular to the centre axis give omega_d = 2 v_{d-1} int_{pi/3}^{pi}
/// sin^d, evaluated by adaptive quadrature. Used to cross-check the
/// closed-form route above.
inline double union_two_balls_volume_by_quadrature(int d) {
    if (d < 1) throw std::invalid_argument("union_two_balls_volume_by_quadrature: dimension must be >= 1");
    const double integral = detail::integrate([d](double phi) { return std::pow(std::sin(phi), d); },
                                              std::numbers::pi / 3.0, std::numbers::pi, 1e-14);
    return 2.0 * detail::ball_volume(d - 1) * integral;
}

/// Limiting probability that a point belongs to a reciprocal pair (two points
/// that are each other's nearest neighbour): v_d / omega_d.
inline double reciprocal_pair_fraction(int d) {
    if (d < 1) throw std::invalid_argument("reciprocal_pair_fraction: dimension must be >= 1");
    return unit_ball_volume(d) / union_two_balls_volume(d);
}

// --- Graph family selectors -------------------------------------------------

struct JthNng {
    int j = 1;
};
struct Knng {
    int k = 1;
};
struct KnngUndirected {
    int k = 1;
};
struct Ong {};
struct Mdsf {
    ConeOrder order;
    bool with_origin_sink = false;
};
struct Gabriel {};

using GraphFamily = std::variant<JthNng, Knng, KnngUndirected, Ong, Mdsf, Gabriel>;

/// Checks the family's own invariants (independent of d and alpha).
inline void validate_family(const GraphFamily& family) {
    if (const auto* jth = std::get_if<JthNng>(&family)) {
        if (jth->j < 1) throw std::domain_error("nng: neighbour rank j must be >= 1");
    } else if (const auto* knn = std::get_if<Knng>(&family)) {
        if (knn->k < 1) throw std::domain_error("knng: neighbour count k must be >= 1");
    } else if (const auto* undirected = std::get_if<KnngUndirected>(&family)) {
        if (undirected->k < 1) throw std::domain_error("knng-undirected: neighbour count k must be >= 1");
    } else if (const auto* mdsf = std::get_if<Mdsf>(&family)) {
        if (mdsf->with_origin_sink && !mdsf->order.is_star())
            throw std::domain_error("mdsf: the origin sink is only defined for the star order");
    }
}

/// Compact single-token family label used in CSV output and reports.
inline std::string family_name(const GraphFamily& family) {
    char buf[96];
    if (const auto* jth = std::get_if<JthNng>(&family)) {
        std::snprintf(buf, sizeof buf, "nng(j=%d)", jth->j);
    } else if (const auto* knn = std::get_if<Knng>(&family)) {
        std::snprintf(buf, sizeof buf, "knng(k=%d)", knn->k);
    } else if (const auto* undirected = std::get_if<KnngUndirected>(&family)) {
        std::snprintf(buf, sizeof buf, "knng-undirected(k=%d)", undirected->k);
    } else if (std::holds_alternative<Ong>(family)) {
        return "ong";
    } else if (const auto* mdsf = std::get_if<Mdsf>(&family)) {
        if (mdsf->order.is_star())
            return mdsf->with_origin_sink ? "mdsf(star;origin)" : "mdsf(star)";
        std::snprintf(buf, sizeof buf, "mdsf(theta=%.9g;phi=%.9g)", mdsf->order.theta(),
                      mdsf->order.phi());
    } else {
        return "gabriel";
    }
    return buf;
}

/// A limit request: graph family, ambient dimension, weight exponent.
struct LimitQuery {
    GraphFamily family;
    int d = 2;
    double alpha = 1.0;
};

/// C(d, alpha, k) = v_d^{-alpha/d} * d/(d+alpha) * Gamma(k+1+alpha/d)/Gamma(k),
/// the per-point limit of the k-nearest-neighbours total weight.
inline double knng_limit_constant(int d, double alpha, int k) {
    const double ratio = alpha / static_cast<double>(d);
    const double log_vd = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * d);
    return (d / (d + alpha)) * std::exp(-ratio * log_vd + std::lgamma(k + 1.0 + ratio) - std::lgamma(static_cast<double>(k)));
}

/// The per-point limit constant of the rescaled total power-weighted edge
/// length for the requested family, at uniform density. Throws
/// std::domain_error when (d, alpha) violate the family's hypotheses.
inline double limit_constant(const LimitQuery& q) {
    if (q.d < 1) throw std::domain_error("limit_constant: dimension must be >= 1");
    if (!(q.alpha >= 0.0) || !std::isfinite(q.alpha))
        throw std::domain_error("limit_constant: weight exponent alpha must be finite and >= 0");
    validate_family(q.family);

    const double d = static_cast<double>(q.d);
    const double ratio = q.alpha / d;
    const double log_vd = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(1.0 + 0.5 * d);
    const double vd_pow = std::exp(-ratio * log_vd);  // v_d^{-alpha/d}

    if (const auto* jth = std::get_if<JthNng>(&q.family)) {
        return vd_pow * std::exp(std::lgamma(jth->j + ratio) - std::lgamma(static_cast<double>(jth->j)));
    }
    if (const auto* knn = std::get_if<Knng>(&q.family)) {
        return knng_limit_constant(q.d, q.alpha, knn->k);
    }
    if (const auto* undirected = std::get_if<KnngUndirected>(&q.family)) {
        if (undirected->k != 1)
            throw std::domain_error(
                "limit_constant: the undirected nearest-neighbour limit is only available for k = 1");
        const double vd = detail::ball_volume(q.d);
        const double omega = union_two_balls_volume(q.d);
        return std::tgamma(1.0 + ratio) * (vd_pow - 0.5 * vd * std::pow(omega, -1.0 - ratio));
    }
    if (std::holds_alternative<Ong>(q.family)) {
        if (!(q.alpha < d))
            throw std::domain_error(
                "limit_constant: the on-line nearest-neighbour limit requires alpha < d");
        return (d / (d - q.alpha)) * vd_pow * std::tgamma(1.0 + ratio);
    }
    if (const auto* mdsf = std::get_if<Mdsf>(&q.family)) {
        if (q.d != 2)
            throw std::domain_error("limit_constant: the cone-order forest limit requires d = 2");
        if (!(q.alpha > 0.0 && q.alpha < 2.0))
            throw std::domain_error(
                "limit_constant: the cone-order forest limit requires 0 < alpha < 2");
        // Independent of theta and of the origin sink.
        return std::pow(2.0 / mdsf->order.phi(), 0.5 * q.alpha) * std::tgamma(1.0 + 0.5 * q.alpha);
    }
    // Gabriel graph.
    return vd_pow * std::exp2(d + q.alpha - 1.0) * std::tgamma(1.0 + ratio);
}

}  // namespace nnlln
