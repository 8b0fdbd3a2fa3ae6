#include "lyness/projective.hpp"

namespace lyness {

bool ProjQuad::degenerate() const {
    return (X.is_zero() && W.is_zero()) || (Y.is_zero() && Z.is_zero());
}

std::string ProjQuad::to_string() const {
    return "(" + X.to_string() + ", " + W.to_string() + ", " + Y.to_string() + ", " + Z.to_string() + ")";
}

RingParams unit_a_params(const Modulus& n, const BigInt& b) { return RingParams{n.one(), n(b), std::nullopt}; }

ProjQuad quad_from_affine(const RingElement& x, const RingElement& y) {
    RingElement one = lift(x, 1);
    return {x, one, y, one};
}

ProjQuad start_quad(const RingParams& params, const RingElement& u5) {
    return {-params.b, params.a, u5, lift(u5, 1)};
}

ProjQuad proj_add_P(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    RingElement t = ring_add(ring_mul_const(params.a, q.Y, tally), ring_mul_const(params.b, q.Z, tally), tally);
    return {q.Y, q.Z, ring_mul(t, q.W, tally), ring_mul(q.X, q.Z, tally)};
}

ProjQuad proj_sub_P(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    RingElement t = ring_add(ring_mul_const(params.a, q.X, tally), ring_mul_const(params.b, q.W, tally), tally);
    return {ring_mul(t, q.Z, tally), ring_mul(q.Y, q.W, tally), q.X, q.W};
}

ProjQuad proj_double(const ProjQuad& q, const RingParams& params, CostTally& tally) {
    const RingElement& a = params.a;
    const RingElement& X = q.X;
    const RingElement& W = q.W;
    const RingElement& Y = q.Y;
    const RingElement& Z = q.Z;
    RingElement a2 = a * a;

    RingElement E = ring_mul(X, Z, tally);
    RingElement F = ring_mul(Y, W, tally);
    RingElement G = ring_mul(X, Y, tally);
    RingElement H = ring_mul(W, Z, tally);
    RingElement Hb = ring_mul_const(params.b, H, tally);
    RingElement S = ring_add(E, F, tally);
    RingElement T = ring_sub(E, F, tally);

    RingElement A_minus = ring_mul_const(a, T, tally);
    RingElement A_plus = ring_sub(ring_sub(ring_dbl(G, tally), ring_mul_const(a, S, tally), tally),
                                  ring_dbl(Hb, tally), tally);
    RingElement G_a2H = ring_sub(G, ring_mul_const(a2, H, tally), tally);
    RingElement HHb = ring_dbl(ring_mul_const(a, ring_mul(H, Hb, tally), tally), tally);
    RingElement B_plus = ring_sub(ring_mul(S, ring_sub(G_a2H, Hb, tally), tally), HHb, tally);
    RingElement B_minus = ring_mul(T, ring_add(G_a2H, Hb, tally), tally);

    RingElement A1 = ring_add(A_plus, A_minus, tally);
    RingElement A2 = ring_sub(A_plus, A_minus, tally);
    RingElement B1 = ring_add(B_plus, B_minus, tally);
    RingElement B2 = ring_sub(B_plus, B_minus, tally);
    RingElement C1 = ring_dbl(ring_mul(X, T, tally), tally);
    RingElement C2 = ring_neg_dbl(ring_mul(Y, T, tally), tally);
    RingElement D1 = ring_add(ring_mul(Z, A2, tally), C2, tally);
    RingElement D2 = ring_add(ring_mul(W, A1, tally), C1, tally);

    return {ring_mul(A1, B1, tally), ring_mul(C1, D1, tally), ring_mul(A2, B2, tally), ring_mul(C2, D2, tally)};
}

namespace {

// num/den, with nullopt marking an infinite coordinate.
std::variant<std::optional<RingElement>, FactorFound> de_projectivize(const RingElement& num,
                                                                      const RingElement& den) {
    if (den.is_zero()) return std::optional<RingElement>{};
    auto inv = den.inverse();
    if (auto* bad = std::get_if<NonInvertible>(&inv)) return FactorFound{bad->g};
    return std::optional<RingElement>{num * std::get<RingElement>(inv)};
}

}  // namespace

Normalized proj_normalize(const ProjQuad& q) {
    if (q.degenerate()) return DegenerateQuad{};
    auto x = de_projectivize(q.X, q.W);
    if (auto* f = std::get_if<FactorFound>(&x)) return *f;
    auto y = de_projectivize(q.Y, q.Z);
    if (auto* f = std::get_if<FactorFound>(&y)) return *f;
    return AffinePoint<RingElement>{std::get<0>(x), std::get<0>(y)};
}

bool proj_eq(const ProjQuad& q1, const ProjQuad& q2) {
    return q1.X * q2.W == q2.X * q1.W && q1.Y * q2.Z == q2.Y * q1.Z;
}

}  // namespace lyness
