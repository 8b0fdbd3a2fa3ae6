#pragma once

// P^1 x P^1 arithmetic on the quadruple (X, W, Y, Z) representing the point
// nP = (X/W, Y/Z) = (u_n, u_{n+1}). No inversions: every map is polynomial and
// reports its cost through an explicit CostTally.

#include <string>
#include <variant>

#include "lyness/cost.hpp"
#include "lyness/curve.hpp"
#include "lyness/ring.hpp"

namespace lyness {

using RingParams = LynessParams<RingElement>;

struct ProjQuad {
    RingElement X;
    RingElement W;
    RingElement Y;
    RingElement Z;

    /// (X : W) = (0 : 0) or (Y : Z) = (0 : 0) modulo N.
    bool degenerate() const;
    std::string to_string() const;  // "(X, W, Y, Z)"

    friend bool operator==(const ProjQuad&, const ProjQuad&) = default;
};

/// Curve constants over Z/NZ with a = 1.
RingParams unit_a_params(const Modulus& n, const BigInt& b);

/// Quadruple for a finite affine point, W = Z = 1.
ProjQuad quad_from_affine(const RingElement& x, const RingElement& y);

/// 4P = (-b/a, u5) as (-b, a, u5, 1).
ProjQuad start_quad(const RingParams& params, const RingElement& u5);

/// nP -> (n+1)P:  (Y, Z, (aY + bZ)W, XZ).  2M+1C when a = 1.
ProjQuad proj_add_P(const ProjQuad& q, const RingParams& params, CostTally& tally);

/// nP -> (n-1)P:  ((aX + bW)Z, YW, X, W).  2M+1C when a = 1.
ProjQuad proj_sub_P(const ProjQuad& q, const RingParams& params, CostTally& tally);

/// nP -> 2nP.  15M+1C when a = 1; other values of a add constant multiplications.
ProjQuad proj_double(const ProjQuad& q, const RingParams& params, CostTally& tally);

struct FactorFound {
    BigInt factor;
};

/// A pair (X : W) or (Y : Z) that is (0 : 0) modulo N.
struct DegenerateQuad {};

/// Affine reading of a quadruple. A zero W or Z gives an infinite coordinate;
/// an inversion failing with 1 < g < N gives FactorFound.
using Normalized = std::variant<AffinePoint<RingElement>, FactorFound, DegenerateQuad>;
Normalized proj_normalize(const ProjQuad& q);

/// Projective equality X1 W2 = X2 W1 and Y1 Z2 = Y2 Z1. Meaningful for prime
/// moduli and non-degenerate quadruples.
bool proj_eq(const ProjQuad& q1, const ProjQuad& q2);

}  // namespace lyness
