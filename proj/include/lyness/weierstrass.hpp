#pragma once

// Short Weierstrass cubics y'^2 = x'^3 + Ax' + B and their birational
// equivalence with Lyness curves. Generic over Rational and RingElement (F_p).

#include <optional>
#include <stdexcept>
#include <utility>

#include "lyness/curve.hpp"

namespace lyness {

template <class F>
struct WeierstrassCurve {
    F A;
    F B;

    F discriminant_factor() const { return 4 * (A * A * A) + 27 * (B * B); }
    bool nonsingular() const { return !discriminant_factor().is_zero(); }
};

template <class F>
struct WeierstrassPoint {
    F x;
    F y;

    friend bool operator==(const WeierstrassPoint&, const WeierstrassPoint&) = default;
};

/// std::nullopt is the point at infinity.
template <class F>
using WPoint = std::optional<WeierstrassPoint<F>>;

template <class F>
struct MarkedPoint {
    F nu;
    F xi;
};

template <class F>
struct ConversionData {
    WeierstrassCurve<F> curve;
    MarkedPoint<F> mark;
    F alpha;
    F J;
    F beta;
    LynessParams<F> lyness;  // K always set
};

template <class F>
bool on_curve(const WeierstrassCurve<F>& c, const WeierstrassPoint<F>& p) {
    return p.y * p.y == p.x * p.x * p.x + c.A * p.x + c.B;
}

/// 1728 * 4A^3 / (4A^3 + 27B^2); nullopt on a singular cubic.
template <class F>
std::optional<F> weierstrass_j(const WeierstrassCurve<F>& c) {
    F d = c.discriminant_factor();
    if (d.is_zero()) return std::nullopt;
    return 1728 * (4 * (c.A * c.A * c.A)) / d;
}

/// Chord-tangent addition.
template <class F>
WPoint<F> weierstrass_add(const WeierstrassCurve<F>& c, const WPoint<F>& p, const WPoint<F>& q) {
    if (!p) return q;
    if (!q) return p;
    F lambda;
    if (p->x == q->x) {
        if ((p->y + q->y).is_zero()) return std::nullopt;
        lambda = (3 * (p->x * p->x) + c.A) / (2 * p->y);
    } else {
        lambda = (q->y - p->y) / (q->x - p->x);
    }
    F x3 = lambda * lambda - p->x - q->x;
    F y3 = lambda * (p->x - x3) - p->y;
    return WeierstrassPoint<F>{std::move(x3), std::move(y3)};
}

/// (a, b, K) from a Weierstrass cubic and a marked point (nu, xi):
///   alpha = 4 xi^2, J = 6 nu^2 + 2A, beta = J^2/4 - 12 nu xi^2,
///   a = -alpha^2 - beta J, b = 2a^2 + a beta J - beta^3, K = -2a - beta J.
template <class F>
ConversionData<F> to_lyness(const WeierstrassCurve<F>& curve, const MarkedPoint<F>& mark) {
    const F& nu = mark.nu;
    const F& xi = mark.xi;
    if (!curve.nonsingular()) throw CurveError(CurveErrorKind::DegenerateCurve, "singular Weierstrass cubic");
    if (xi.is_zero()) throw CurveError(CurveErrorKind::DegenerateConversion, "marked point has xi = 0");
    if (!on_curve(curve, WeierstrassPoint<F>{nu, xi}))
        throw CurveError(CurveErrorKind::NotOnCurve, "marked point is not on the cubic");
    F alpha = 4 * (xi * xi);
    F J = 6 * (nu * nu) + 2 * curve.A;
    F beta = J * J / lift(J, 4) - 12 * (nu * xi * xi);
    F bJ = beta * J;
    F a = -(alpha * alpha) - bJ;
    if (a.is_zero())
        throw CurveError(CurveErrorKind::DegenerateConversion, "conversion gives a = 0; choose another marked point");
    F b = 2 * (a * a) + a * bJ - beta * beta * beta;
    F K = -2 * a - bJ;
    if (!(alpha * alpha == K + a) || !(beta * beta * beta == -(K * a + b)) || !(bJ == -(K + 2 * a)))
        throw std::logic_error("to_lyness: conversion identities violated");
    return {curve, mark, std::move(alpha), std::move(J), std::move(beta), LynessParams<F>{a, b, K}};
}

/// Image of a finite Weierstrass point on the Lyness curve.
///   u = nu - x', v = (4 xi y' + J u - alpha) / (2u^2),
///   x = -beta(alpha u + beta)/(uv) - a, y = -beta u v - a.
template <class F>
AffinePoint<F> map_point_to_lyness(const ConversionData<F>& conv, const WeierstrassPoint<F>& p) {
    constexpr auto kind = CurveErrorKind::ExceptionalPoint;
    const F& a = conv.lyness.a;
    F u = conv.mark.nu - p.x;
    if (u.is_zero()) throw CurveError(kind, "u = 0");
    F v = detail::checked_div(4 * (conv.mark.xi * p.y) + conv.J * u - conv.alpha, 2 * (u * u), kind, "u = 0");
    if (v.is_zero()) throw CurveError(kind, "v = 0");
    F x = -(conv.beta * (conv.alpha * u + conv.beta)) / (u * v) - a;
    F y = -(conv.beta * u * v) - a;
    return AffinePoint<F>::finite(std::move(x), std::move(y));
}

/// Inverse of map_point_to_lyness, landing on the original cubic.
template <class F>
WeierstrassPoint<F> from_lyness(const ConversionData<F>& conv, const AffinePoint<F>& q) {
    constexpr auto kind = CurveErrorKind::ExceptionalPoint;
    const F& a = conv.lyness.a;
    const F& alpha = conv.alpha;
    const F& beta = conv.beta;
    F xa = detail::fx(q) + a;
    F ya = detail::fy(q) + a;
    F u = detail::checked_div(detail::checked_div(xa * ya, beta * beta, kind, "beta = 0") - beta, alpha, kind,
                              "alpha = 0");
    F four_xi = 4 * conv.mark.xi;
    F y_prime = -(u / four_xi) * (2 * ya / beta + conv.J) + alpha / four_xi;
    return {conv.mark.nu - u, std::move(y_prime)};
}

/// The twist (alpha^2 beta^4 A, alpha^3 beta^6 B) of the original cubic.
template <class F>
WeierstrassCurve<F> twisted_curve(const ConversionData<F>& conv) {
    F a2 = conv.alpha * conv.alpha;
    F b2 = conv.beta * conv.beta;
    F b4 = b2 * b2;
    return {a2 * b4 * conv.curve.A, a2 * conv.alpha * b4 * b2 * conv.curve.B};
}

/// Point scaling compatible with twisted_curve: lambda = 2 xi beta.
template <class F>
WeierstrassPoint<F> twist_point(const ConversionData<F>& conv, const WeierstrassPoint<F>& p) {
    F lambda = 2 * (conv.mark.xi * conv.beta);
    F l2 = lambda * lambda;
    return {l2 * p.x, l2 * lambda * p.y};
}

/// Twisted Weierstrass model written directly in (a, b, K), for curves with
/// no known marked point. Coincides with twisted_curve(to_lyness(...)).
template <class F>
WeierstrassCurve<F> twisted_model(const LynessParams<F>& params) {
    const F& a = params.a;
    const F& K = detail::require_K(params);
    F p = K + a;
    F q = K * a + params.b;
    F r = K + 2 * a;
    F two = lift(a, 2);
    F M = (r * r / lift(a, 4) + q) / lift(a, 3);
    F pqr = p * q * r;
    F A = pqr / two - 3 * (M * M);
    F B = p * p * q * q / lift(a, 4) - (pqr * M / two - 2 * (M * M * M));
    return {std::move(A), std::move(B)};
}

/// Image of a finite Lyness point on twisted_model(params).
template <class F>
WeierstrassPoint<F> to_twisted_point(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& a = params.a;
    const F& K = detail::require_K(params);
    F p = K + a;
    F q = K * a + params.b;
    F r = K + 2 * a;
    F two = lift(a, 2);
    F M = (r * r / lift(a, 4) + q) / lift(a, 3);
    F ya = detail::fy(pt) + a;
    F U = (detail::fx(pt) + a) * ya + q;
    F x = M - U;
    F y = -(p * q) / two - U * ya + U * r / two;
    return {std::move(x), std::move(y)};
}

/// (a, b, K) -> (1, b/a^2, K/a) with the point rescaled to (x/a, y/a).
template <class F>
std::pair<LynessParams<F>, AffinePoint<F>> normalize_a(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& a = params.a;
    if (a.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "a = 0");
    LynessParams<F> out{lift(a, 1), params.b / (a * a), std::nullopt};
    if (params.K) out.K = *params.K / a;
    AffinePoint<F> q;
    if (pt.x) q.x = *pt.x / a;
    if (pt.y) q.y = *pt.y / a;
    return {std::move(out), std::move(q)};
}

}  // namespace lyness
