#include "lyness/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lyness {

Modulus SmallCurve::field() const { return Modulus(BigInt(static_cast<unsigned long>(p))); }

RingParams SmallCurve::params() const {
    Modulus F = field();
    RingElement one = F.one();
    RingElement bb = F(BigInt(static_cast<unsigned long>(b)));
    RingElement K = derive_K(one, bb, F(BigInt(static_cast<unsigned long>(u5))));
    return RingParams{one, bb, K};
}

ProjQuad SmallCurve::start() const {
    RingParams prm = params();
    return start_quad(prm, prm.a.modulus()(BigInt(static_cast<unsigned long>(u5))));
}

bool lyness_singular_mod_p(std::uint64_t p, std::int64_t a, std::uint64_t b, std::uint64_t K) {
    Modulus F(BigInt(static_cast<unsigned long>(p)));
    RingParams prm{F(a), F(BigInt(static_cast<unsigned long>(b))), F(BigInt(static_cast<unsigned long>(K)))};
    return curve_invariants(prm).singular();
}

void require_valid(const SmallCurve& c) {
    if (c.p < 5 || !is_probable_prime(BigInt(static_cast<unsigned long>(c.p))))
        throw std::invalid_argument("oracle field size must be a prime >= 5");
    if (c.b % c.p == 0 || c.b % c.p == 1) throw std::invalid_argument("oracle curve needs b not 0 or 1 mod p");
    if (curve_invariants(c.params()).singular()) throw std::invalid_argument("oracle curve is singular mod p");
}

OrbitRecord order_of_P(const SmallCurve& c, bool keep_trace) {
    require_valid(c);
    RingParams prm = c.params();
    ProjQuad q = c.start();
    OrbitRecord rec;
    if (keep_trace) rec.trace.push_back(q);
    const auto limit = static_cast<std::uint64_t>(static_cast<double>(c.p) + 1 + 2 * std::sqrt(double(c.p)) + 10);
    std::uint64_t t = 0;
    CostTally scratch;
    for (;;) {
        ProjQuad next = proj_add_P(q, prm, scratch);
        if (next.degenerate()) break;
        q = std::move(next);
        if (keep_trace) rec.trace.push_back(q);
        if (++t > limit) throw std::logic_error("order_of_P: walk exceeded the Hasse bound");
    }
    rec.order = t + 4;
    return rec;
}

std::uint64_t order_by_affine_orbit(const SmallCurve& c) {
    require_valid(c);
    RingParams prm = c.params();
    Modulus F = prm.a.modulus();
    RingElement minus_one = F(-1);
    auto pt = AffinePoint<RingElement>::finite(-prm.b, F(BigInt(static_cast<unsigned long>(c.u5))));
    const auto limit = static_cast<std::uint64_t>(static_cast<double>(c.p) + 1 + 2 * std::sqrt(double(c.p)) + 10);
    std::uint64_t index = 4;
    while (!(pt.x->is_zero() && *pt.y == minus_one)) {
        pt = affine_step(prm, pt);
        if (++index > limit) throw std::logic_error("order_by_affine_orbit: no return within the Hasse bound");
    }
    return index + 2;
}

std::uint64_t count_points(std::uint64_t p, std::int64_t a_signed, std::uint64_t b, std::uint64_t K) {
    if (p >= (1ULL << 31)) throw std::invalid_argument("count_points: p too large for enumeration");
    if (lyness_singular_mod_p(p, a_signed, b, K)) throw std::invalid_argument("count_points: singular curve");
    const std::uint64_t a = static_cast<std::uint64_t>((a_signed % std::int64_t(p) + std::int64_t(p)) % std::int64_t(p));
    b %= p;
    K %= p;
    std::uint64_t count = 3;  // O, P, -P
    for (std::uint64_t x = 0; x < p; ++x) {
        // (x+a) y^2 + (x^2 + 2ax + a^2 + b - Kx) y + (a x^2 + (a^2+b) x + ab) = 0
        std::uint64_t x2 = x * x % p;
        std::uint64_t a2b = (a * a + b) % p;
        std::uint64_t c2 = (x + a) % p;
        std::uint64_t c1 = (x2 + 2 * a * x % p + a2b + p - K * x % p) % p;
        std::uint64_t c0 = (a * x2 % p + a2b * x % p + a * b % p) % p;
        for (std::uint64_t y = 0; y < p; ++y) {
            if ((c2 * y % p * y + c1 * y + c0) % p == 0) ++count;
        }
    }
    auto dev = static_cast<std::int64_t>(count) - static_cast<std::int64_t>(p) - 1;
    if (static_cast<std::uint64_t>(dev * dev) > 4 * p)
        throw std::logic_error("count_points: " + std::to_string(count) + " outside the Hasse interval");
    return count;
}

namespace {

ProjQuad walk_from_start(const SmallCurve& c, std::uint64_t steps) {
    RingParams prm = c.params();
    ProjQuad q = c.start();
    CostTally scratch;
    for (std::uint64_t i = 0; i < steps; ++i) q = proj_add_P(q, prm, scratch);
    return q;
}

bool residue_is(std::uint64_t r, std::int64_t k, std::uint64_t ord) {
    auto m = static_cast<std::int64_t>(ord);
    return r == static_cast<std::uint64_t>(((k % m) + m) % m);
}

bool in_base_window(std::uint64_t r, std::uint64_t ord) {
    for (std::int64_t k = -3; k <= 3; ++k)
        if (residue_is(r, k, ord)) return true;
    return false;
}

}  // namespace

std::variant<ProjQuad, InfinityRegion> multiple_of_P(const SmallCurve& c, const BigInt& n, std::uint64_t ord) {
    if (n < 4) throw std::invalid_argument("multiple_of_P needs n >= 4");
    std::uint64_t r = mpz_fdiv_ui(n.get_mpz_t(), ord);
    if (in_base_window(r, ord)) {
        auto sr = static_cast<std::int64_t>(r);
        if (2 * r > ord) sr -= static_cast<std::int64_t>(ord);
        return InfinityRegion{sr};
    }
    return walk_from_start(c, r - 4);
}

ProjQuad residue_quad(const SmallCurve& c, std::uint64_t r, std::uint64_t ord) {
    Modulus F = c.field();
    RingElement zero = F.zero(), one = F.one(), m1 = F(-1);
    RingElement mb = -F(BigInt(static_cast<unsigned long>(c.b)));
    r %= ord;
    if (residue_is(r, 0, ord)) return {one, zero, one, zero};
    if (residue_is(r, 1, ord)) return {one, zero, m1, one};
    if (residue_is(r, -1, ord)) return {m1, one, one, zero};
    if (residue_is(r, 2, ord)) return {m1, one, zero, one};
    if (residue_is(r, -2, ord)) return {zero, one, m1, one};
    if (residue_is(r, 3, ord)) return {zero, one, mb, one};
    if (residue_is(r, -3, ord)) return {mb, one, zero, one};
    return walk_from_start(c, r - 4);
}

bool op_degenerates(ChainOp op, std::uint64_t r, std::uint64_t ord) {
    r %= ord;
    switch (op) {
    case ChainOp::Add:
        return residue_is(r, 0, ord) || residue_is(r, 3, ord);
    case ChainOp::Sub:
        return residue_is(r, 0, ord) || residue_is(r, -3, ord);
    case ChainOp::Double:
        return residue_is(r, 0, ord) || residue_is(r, 2, ord) || residue_is(r, -2, ord) || residue_is(r, 3, ord) ||
               residue_is(r, -3, ord);
    }
    return false;
}

EventPrediction predict_event(const AdditionChain& chain, std::uint64_t ord) {
    EventPrediction out;
    std::uint64_t r = 4 % ord;
    auto apply = [&](ChainOp op) {
        if (op_degenerates(op, r, ord)) out.collapsed = true;
        switch (op) {
        case ChainOp::Add: r = (r + 1) % ord; break;
        case ChainOp::Sub: r = (r + ord - 1) % ord; break;
        case ChainOp::Double: r = 2 * r % ord; break;
        }
    };
    for (unsigned i = 0; i < chain.delta0; ++i) apply(ChainOp::Add);
    for (const auto& seg : chain.tail) {
        for (unsigned i = 0; i < seg.k; ++i) apply(ChainOp::Double);
        if (seg.delta > 0) apply(ChainOp::Add);
        if (seg.delta < 0) apply(ChainOp::Sub);
    }
    out.final_residue = r;
    out.event = out.collapsed || residue_is(r, 0, ord) || residue_is(r, 1, ord) || residue_is(r, -1, ord);
    return out;
}

}  // namespace lyness
