#pragma once

// Brute-force ground truth over small prime fields, with a = 1 throughout
// unless stated. Nothing here is used by the factoring path.

#include <cstdint>
#include <variant>
#include <vector>

#include "lyness/chain.hpp"
#include "lyness/projective.hpp"

namespace lyness {

/// The curve through 4P = (-b, u5) with a = 1 over F_p.
struct SmallCurve {
    std::uint64_t p = 0;
    std::uint64_t b = 0;
    std::uint64_t u5 = 0;

    Modulus field() const;
    RingParams params() const;          // a = 1, K from derive_K
    ProjQuad start() const;
};

/// (K+a)(Ka+b) * singular_factor = 0 mod p.
bool lyness_singular_mod_p(std::uint64_t p, std::int64_t a, std::uint64_t b, std::uint64_t K);

/// Throws std::invalid_argument unless p is a prime >= 5, b is not 0 or 1
/// mod p and the curve is nonsingular.
void require_valid(const SmallCurve& c);

struct OrbitRecord {
    std::uint64_t order = 0;
    std::vector<ProjQuad> trace;  // 4P, 5P, ..., (ord-1)P, O
};

/// Walks proj_add_P from 4P until the step out of O degenerates. The walk
/// visits 4P, ..., -P, O in t + 1 quadruples, so ord = t + 4.
OrbitRecord order_of_P(const SmallCurve& c, bool keep_trace = false);

/// Independent route: affine_step from 4P until -2P = (0, -1); ord = index + 2.
std::uint64_t order_by_affine_orbit(const SmallCurve& c);

/// Affine solutions of the Lyness equation plus O, P, -P. Requires p <= 2^31.
/// Throws std::logic_error outside the Hasse interval.
std::uint64_t count_points(std::uint64_t p, std::int64_t a, std::uint64_t b, std::uint64_t K);

struct InfinityRegion {
    std::int64_t multiple;  // n mod ord, in (-ord/2, ord/2]
};

/// Quadruple for nP reached by successive proj_add_P from 4P, or the base
/// point region n = 0, +-1, +-2, +-3 mod ord where the projective pair is
/// not reachable that way.
std::variant<ProjQuad, InfinityRegion> multiple_of_P(const SmallCurve& c, const BigInt& n, std::uint64_t ord);

/// Canonical quadruple for rP, 0 <= r < ord, including the base points.
ProjQuad residue_quad(const SmallCurve& c, std::uint64_t r, std::uint64_t ord);

enum class ChainOp { Add, Sub, Double };

/// Whether the projective map `op` degenerates at input rP. Holds for
/// nonsingular curves with a = 1:
///   add at r = 0, 3;  sub at r = 0, -3;  double at r = 0, +-2, +-3.
bool op_degenerates(ChainOp op, std::uint64_t r, std::uint64_t ord);

struct EventPrediction {
    bool event = false;       // W*Z = 0 mod p at the end of the chain
    bool collapsed = false;   // some step produced a (0 : 0) pair
    std::uint64_t final_residue = 0;
};

/// Tracks s mod ord along the chain. A degenerate pair persists to the end,
/// otherwise W*Z vanishes exactly when sP is O, P or -P.
EventPrediction predict_event(const AdditionChain& chain, std::uint64_t ord);

/// The divisibility prediction: an event at p iff ord | s.
inline bool divisibility_event(const BigInt& s, std::uint64_t ord) {
    return mpz_divisible_ui_p(s.get_mpz_t(), ord) != 0;
}

}  // namespace lyness
