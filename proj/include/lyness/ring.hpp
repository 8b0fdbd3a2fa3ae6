#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "lyness/cost.hpp"

namespace lyness {

using BigInt = mpz_class;

/// Parses a decimal or 0x-prefixed hexadecimal integer with optional sign.
/// Throws std::invalid_argument on malformed input.
BigInt parse_integer(std::string_view text);

std::string to_decimal(const BigInt& v);
std::string to_hex(const BigInt& v);

/// Greatest common divisor of |x| and |y|. Both zero is a usage error.
BigInt gcd(const BigInt& x, const BigInt& y);

bool is_probable_prime(const BigInt& n, int reps = 30);
bool is_perfect_power(const BigInt& n);

/// Witness of a failed inversion: g = gcd(x, N) > 1. For 1 < g < N this is a
/// proper factor of N.
struct NonInvertible {
    BigInt g;
};

/// Thrown by RingElement division when the divisor shares a factor with N.
class NonInvertibleError : public std::runtime_error {
public:
    explicit NonInvertibleError(BigInt g);
    const BigInt& gcd() const noexcept { return g_; }

private:
    BigInt g_;
};

class RingElement;

/// The ring Z/NZ, N >= 2. Copies share the same underlying modulus, so
/// elements created from copies of one Modulus compare as compatible without
/// a big-integer comparison.
class Modulus {
public:
    explicit Modulus(const BigInt& n);

    const BigInt& value() const noexcept { return *n_; }

    RingElement operator()(const BigInt& v) const;
    RingElement operator()(long v) const;
    RingElement zero() const;
    RingElement one() const;

    friend bool operator==(const Modulus& a, const Modulus& b) {
        return a.n_ == b.n_ || *a.n_ == *b.n_;
    }

private:
    friend class RingElement;
    explicit Modulus(std::shared_ptr<const BigInt> n) : n_(std::move(n)) {}

    std::shared_ptr<const BigInt> n_;
};

/// A canonical residue 0 <= value < N. Immutable; every operation returns a
/// fully reduced value. Mixing moduli throws std::invalid_argument.
class RingElement {
public:
    /// Unbound element, only useful as a placeholder to be assigned over.
    RingElement() = default;
    RingElement(const Modulus& m, const BigInt& v);

    const BigInt& value() const noexcept { return v_; }
    Modulus modulus() const;
    const BigInt& modulus_value() const;
    bool bound() const noexcept { return static_cast<bool>(n_); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    /// x^-1 mod N, or the gcd witness when x is not a unit (x = 0 gives N).
    std::variant<RingElement, NonInvertible> inverse() const;

    std::string to_string() const { return to_decimal(v_); }

    friend RingElement operator+(const RingElement& x, const RingElement& y);
    friend RingElement operator-(const RingElement& x, const RingElement& y);
    friend RingElement operator*(const RingElement& x, const RingElement& y);
    /// Throws NonInvertibleError when y is not a unit.
    friend RingElement operator/(const RingElement& x, const RingElement& y);
    friend RingElement operator-(const RingElement& x);

    friend RingElement operator+(const RingElement& x, long k);
    friend RingElement operator+(long k, const RingElement& x) { return x + k; }
    friend RingElement operator-(const RingElement& x, long k) { return x + (-k); }
    friend RingElement operator-(long k, const RingElement& x) { return -x + k; }
    friend RingElement operator*(const RingElement& x, long k);
    friend RingElement operator*(long k, const RingElement& x) { return x * k; }

    RingElement& operator+=(const RingElement& y) { return *this = *this + y; }
    RingElement& operator-=(const RingElement& y) { return *this = *this - y; }
    RingElement& operator*=(const RingElement& y) { return *this = *this * y; }

    /// Same modulus and same residue.
    friend bool operator==(const RingElement& x, const RingElement& y);

private:
    RingElement(std::shared_ptr<const BigInt> n, BigInt v) : v_(std::move(v)), n_(std::move(n)) {}
    const std::shared_ptr<const BigInt>& shared_with(const RingElement& other) const;

    BigInt v_;
    std::shared_ptr<const BigInt> n_;
};

/// Element with the same modulus as `like` holding the integer v.
inline RingElement lift(const RingElement& like, long v) { return like.modulus()(v); }

/// Tallied multiplication: one M.
RingElement ring_mul(const RingElement& x, const RingElement& y, CostTally& tally);
/// Tallied squaring: one S.
RingElement ring_sqr(const RingElement& x, CostTally& tally);
/// Multiplication by a curve constant: one C, or nothing when k = 1.
RingElement ring_mul_const(const RingElement& k, const RingElement& x, CostTally& tally);
/// Tallied additive operations (counted under `add`).
RingElement ring_add(const RingElement& x, const RingElement& y, CostTally& tally);
RingElement ring_sub(const RingElement& x, const RingElement& y, CostTally& tally);
RingElement ring_dbl(const RingElement& x, CostTally& tally);
/// -2x, canonical: (N - 2x mod N) mod N.
RingElement ring_neg_dbl(const RingElement& x, CostTally& tally);

std::variant<RingElement, NonInvertible> ring_inv(const RingElement& x);

}  // namespace lyness
