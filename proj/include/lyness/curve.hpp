#pragma once

// Lyness curves  xy(x+y) + a(x+y)^2 + (a^2+b)(x+y) + ab = Kxy  and the affine
// maps acting on them. Everything here is generic over the scalar type: exact
// Rational, or RingElement for F_p and Z/NZ.
//
// Over Z/NZ a zero denominator is a domain error (CurveError), while a nonzero
// denominator sharing a factor with N surfaces as NonInvertibleError carrying
// that factor.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "lyness/rational.hpp"
#include "lyness/ring.hpp"

namespace lyness {

enum class CurveErrorKind {
    BasePointOrAxis,   // a coordinate the formula divides by is zero
    FiveTorsion,       // b = a^2
    DegenerateCurve,   // a = 0 or b = 0
    ExceptionalPoint,  // an addition/doubling denominator vanishes
    DegenerateConversion,  // Weierstrass marked point gives a = 0
    NotOnCurve,
};

class CurveError : public std::runtime_error {
public:
    CurveError(CurveErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    CurveErrorKind kind() const noexcept { return kind_; }

private:
    CurveErrorKind kind_;
};

template <class F>
struct LynessParams {
    F a;
    F b;
    std::optional<F> K;
};

/// A point of P^1 x P^1 written affinely; std::nullopt marks infinity.
template <class F>
struct AffinePoint {
    std::optional<F> x;
    std::optional<F> y;

    static AffinePoint finite(F x, F y) { return {std::move(x), std::move(y)}; }
    static AffinePoint identity() { return {std::nullopt, std::nullopt}; }

    bool is_finite() const { return x.has_value() && y.has_value(); }

    friend bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

template <class F>
struct CurveInvariants {
    F singular_factor;  // K a^3 - 8a^4 + K^2 b - 10Kab + 13a^2 b - 16b^2
    F g2hat;
    F j_denominator;    // (K+a)^2 (Ka+b)^3 singular_factor
    std::optional<F> j; // nullopt when j_denominator = 0

    bool singular() const { return j_denominator.is_zero(); }
};

/// One of the seven base points of the pencil, labelled by its multiple of P.
template <class F>
struct BasePoint {
    int multiple;
    AffinePoint<F> point;
};

namespace detail {

template <class F>
F checked_div(const F& num, const F& den, CurveErrorKind kind, const char* what) {
    if (den.is_zero()) throw CurveError(kind, what);
    return num / den;
}

template <class F>
const F& require_K(const LynessParams<F>& params) {
    if (!params.K) throw std::invalid_argument("curve parameter K is required here");
    return *params.K;
}

template <class F>
const F& fx(const AffinePoint<F>& pt) {
    if (!pt.x) throw CurveError(CurveErrorKind::BasePointOrAxis, "x coordinate at infinity");
    return *pt.x;
}

template <class F>
const F& fy(const AffinePoint<F>& pt) {
    if (!pt.y) throw CurveError(CurveErrorKind::BasePointOrAxis, "y coordinate at infinity");
    return *pt.y;
}

/// The Lyness polynomial xy(x+y) + a(x+y)^2 + (a^2+b)(x+y) + ab.
template <class F>
F lyness_numerator(const F& a, const F& b, const F& x, const F& y) {
    F s = x + y;
    return x * y * s + a * s * s + (a * a + b) * s + a * b;
}

/// R(x,y) = (xy-ay-b)(x^2 y - a^2 x - by - ab) / (x(x-y)(y^2-ax-b))
template <class F>
F doubling_rational(const F& a, const F& b, const F& x, const F& y) {
    F num = (x * y - a * y - b) * (x * x * y - a * a * x - b * y - a * b);
    F den = x * (x - y) * (y * y - a * x - b);
    return checked_div(num, den, CurveErrorKind::ExceptionalPoint, "doubling denominator vanishes");
}

}  // namespace detail

/// Conserved quantity K(x,y). Requires a finite point with x, y nonzero.
template <class F>
F eval_K(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& x = detail::fx(pt);
    const F& y = detail::fy(pt);
    return detail::checked_div(detail::lyness_numerator(params.a, params.b, x, y), x * y,
                               CurveErrorKind::BasePointOrAxis, "K(x,y) undefined on the axes");
}

/// Membership in the fibre K, including the three points at infinity
/// O = (inf, inf), P = (inf, -a) and -P = (-a, inf).
template <class F>
bool on_curve(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& K = detail::require_K(params);
    if (!pt.x && !pt.y) return true;
    if (!pt.x) return *pt.y == -params.a;
    if (!pt.y) return *pt.x == -params.a;
    const F& x = *pt.x;
    const F& y = *pt.y;
    return detail::lyness_numerator(params.a, params.b, x, y) == K * x * y;
}

/// y-coordinate of 4P = (-b/a, u5):  u5 = -a - b(Ka+b) / (a(a^2-b)).
template <class F>
F derive_u5(const LynessParams<F>& params) {
    const F& a = params.a;
    const F& b = params.b;
    const F& K = detail::require_K(params);
    if (a.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "a = 0");
    if ((a * a - b).is_zero()) throw CurveError(CurveErrorKind::FiveTorsion, "b = a^2: P is 5-torsion");
    return -a - b * (K * a + b) / (a * (a * a - b));
}

/// Inverse of derive_u5:  K = (1 - a^2/b)(u5 + a) - b/a.
template <class F>
F derive_K(const F& a, const F& b, const F& u5) {
    if (a.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "a = 0");
    if (b.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "b = 0");
    return (lift(a, 1) - a * a / b) * (u5 + a) - b / a;
}

/// The Lyness map (x, y) -> (y, (ay+b)/x): translation by P.
template <class F>
AffinePoint<F> affine_step(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& x = detail::fx(pt);
    const F& y = detail::fy(pt);
    F next = detail::checked_div(params.a * y + params.b, x, CurveErrorKind::BasePointOrAxis,
                                 "Lyness map undefined at x = 0");
    return AffinePoint<F>::finite(y, std::move(next));
}

/// Inverse map (x, y) -> ((ax+b)/y, x): translation by -P.
template <class F>
AffinePoint<F> affine_inverse(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& x = detail::fx(pt);
    const F& y = detail::fy(pt);
    F prev = detail::checked_div(params.a * x + params.b, y, CurveErrorKind::BasePointOrAxis,
                                 "inverse Lyness map undefined at y = 0");
    return AffinePoint<F>::finite(std::move(prev), x);
}

/// Elliptic involution (x, y) -> (y, x), i.e. negation.
template <class F>
AffinePoint<F> involution(const AffinePoint<F>& pt) {
    return {pt.y, pt.x};
}

/// Doubling (x, y) -> (R(x,y), R(y,x)).
template <class F>
AffinePoint<F> affine_double(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& x = detail::fx(pt);
    const F& y = detail::fy(pt);
    return AffinePoint<F>::finite(detail::doubling_rational(params.a, params.b, x, y),
                                  detail::doubling_rational(params.a, params.b, y, x));
}

/// Chord addition of two distinct finite points.
template <class F>
AffinePoint<F> affine_add(const LynessParams<F>& params, const AffinePoint<F>& p1,
                          const AffinePoint<F>& p2) {
    const F& a = params.a;
    const F& b = params.b;
    const F& x1 = detail::fx(p1);
    const F& y1 = detail::fy(p1);
    const F& x2 = detail::fx(p2);
    const F& y2 = detail::fy(p2);
    F dx = x1 - x2;
    F dy = y1 - y2;
    F cross = x1 * y2 - x2 * y1;
    F sum = dx + dy;
    F x3_num = (a * dy - cross) * (a * cross - b * dy);
    F x3_den = y1 * y2 * dx * sum;
    F y3_num = (a * dx + cross) * (-a * cross - b * dx);
    F y3_den = x1 * x2 * dy * sum;
    constexpr auto kind = CurveErrorKind::ExceptionalPoint;
    return AffinePoint<F>::finite(detail::checked_div(x3_num, x3_den, kind, "addition x-denominator vanishes"),
                                  detail::checked_div(y3_num, y3_den, kind, "addition y-denominator vanishes"));
}

/// O, +-P, +-2P, +-3P: the points common to every curve of the pencil.
template <class F>
std::array<BasePoint<F>, 7> base_points(const LynessParams<F>& params) {
    const F& a = params.a;
    if (a.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "a = 0");
    F zero = lift(a, 0);
    F three_y = -params.b / a;
    using Pt = AffinePoint<F>;
    return {{
        {0, Pt::identity()},
        {1, Pt{std::nullopt, -a}},
        {-1, Pt{-a, std::nullopt}},
        {2, Pt::finite(-a, zero)},
        {-2, Pt::finite(zero, -a)},
        {3, Pt::finite(zero, three_y)},
        {-3, Pt::finite(three_y, zero)},
    }};
}

template <class F>
CurveInvariants<F> curve_invariants(const LynessParams<F>& params) {
    const F& a = params.a;
    const F& b = params.b;
    const F& K = detail::require_K(params);
    if (a.is_zero()) throw CurveError(CurveErrorKind::DegenerateCurve, "a = 0");
    F a2 = a * a;
    F K2 = K * K;
    F sf = K * a2 * a - 8 * (a2 * a2) + K2 * b - 10 * (K * a * b) + 13 * (a2 * b) - 16 * (b * b);
    F g2 = K2 * K2 - 8 * (K2 * K * a) + 16 * (K * a2 * a) + 16 * (a2 * a2) - 16 * (K2 * b) -
           8 * (K * a * b) - 16 * (a2 * b) + 16 * (b * b);
    F ka = K + a;
    F kab = K * a + b;
    F den = ka * ka * kab * kab * kab * sf;
    std::optional<F> j;
    if (!den.is_zero()) j = g2 * g2 * g2 / den;
    return {std::move(sf), std::move(g2), std::move(den), std::move(j)};
}

/// det of the Jacobian of the Lyness map, from its partial derivatives.
template <class F>
F step_jacobian(const LynessParams<F>& params, const AffinePoint<F>& pt) {
    const F& x = detail::fx(pt);
    const F& y = detail::fy(pt);
    if (x.is_zero()) throw CurveError(CurveErrorKind::BasePointOrAxis, "Lyness map undefined at x = 0");
    F zero = lift(x, 0);
    F one = lift(x, 1);
    // x' = y, y' = (ay+b)/x
    F dx_dx = zero, dx_dy = one;
    F dy_dx = -(params.a * y + params.b) / (x * x);
    F dy_dy = params.a / x;
    return dx_dx * dy_dy - dx_dy * dy_dx;
}

template <class F>
bool is_five_periodic(const LynessParams<F>& params) {
    return params.b == params.a * params.a;
}

}  // namespace lyness
