#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "lyness/ring.hpp"

namespace lyness {

/// Exact rational in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Accepts "p", "p/q", "-p/q", and decimal fractions such as "0.25".
    static Rational parse(std::string_view text);

    BigInt numerator() const { return q_.get_num(); }
    BigInt denominator() const { return q_.get_den(); }
    const mpq_class& raw() const noexcept { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }

    std::string to_string() const { return q_.get_str(10); }

    /// Reduction into Z/NZ; throws NonInvertibleError when the denominator
    /// shares a factor with N.
    RingElement reduce(const Modulus& m) const;

    friend Rational operator+(const Rational& x, const Rational& y) { return Rational(mpq_class(x.q_ + y.q_)); }
    friend Rational operator-(const Rational& x, const Rational& y) { return Rational(mpq_class(x.q_ - y.q_)); }
    friend Rational operator*(const Rational& x, const Rational& y) { return Rational(mpq_class(x.q_ * y.q_)); }
    /// Throws std::domain_error on division by zero.
    friend Rational operator/(const Rational& x, const Rational& y);
    friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.q_)); }

    friend Rational operator+(const Rational& x, long k) { return x + Rational(k); }
    friend Rational operator+(long k, const Rational& x) { return Rational(k) + x; }
    friend Rational operator-(const Rational& x, long k) { return x - Rational(k); }
    friend Rational operator-(long k, const Rational& x) { return Rational(k) - x; }
    friend Rational operator*(const Rational& x, long k) { return x * Rational(k); }
    friend Rational operator*(long k, const Rational& x) { return Rational(k) * x; }

    Rational& operator+=(const Rational& y) { return *this = *this + y; }
    Rational& operator-=(const Rational& y) { return *this = *this - y; }
    Rational& operator*=(const Rational& y) { return *this = *this * y; }

    friend bool operator==(const Rational& x, const Rational& y) { return x.q_ == y.q_; }
    friend bool operator<(const Rational& x, const Rational& y) { return x.q_ < y.q_; }

private:
    mpq_class q_;
};

inline Rational lift(const Rational&, long v) { return Rational(v); }

Rational pow(const Rational& x, unsigned e);

}  // namespace lyness
