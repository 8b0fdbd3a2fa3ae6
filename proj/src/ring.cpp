#include "lyness/ring.hpp"

#include <cctype>
#include <sstream>

namespace lyness {

std::string CostTally::cost_string() const {
    std::ostringstream os;
    os << m << "M";
    if (s != 0) os << "+" << s << "S";
    os << "+" << c << "C";
    return os.str();
}

std::string CostTally::depth_string() const {
    std::ostringstream os;
    os << depth_m << "M+" << depth_c << "C";
    return os.str();
}

BigInt parse_integer(std::string_view text) {
    std::string s(text);
    std::size_t pos = 0;
    bool negative = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        negative = s[pos] == '-';
        ++pos;
    }
    int base = 10;
    if (s.size() - pos > 2 && s[pos] == '0' && (s[pos + 1] == 'x' || s[pos + 1] == 'X')) {
        base = 16;
        pos += 2;
    }
    std::string digits = s.substr(pos);
    if (digits.empty()) throw std::invalid_argument("empty integer literal: '" + s + "'");
    for (char ch : digits) {
        bool ok = base == 16 ? std::isxdigit(static_cast<unsigned char>(ch)) != 0
                             : std::isdigit(static_cast<unsigned char>(ch)) != 0;
        if (!ok) throw std::invalid_argument("malformed integer literal: '" + s + "'");
    }
    BigInt v;
    if (v.set_str(digits, base) != 0) throw std::invalid_argument("malformed integer literal: '" + s + "'");
    return negative ? BigInt(-v) : v;
}

std::string to_decimal(const BigInt& v) { return v.get_str(10); }

std::string to_hex(const BigInt& v) {
    if (v < 0) return "-0x" + BigInt(-v).get_str(16);
    return "0x" + v.get_str(16);
}

BigInt gcd(const BigInt& x, const BigInt& y) {
    if (x == 0 && y == 0) throw std::invalid_argument("gcd(0, 0) is undefined");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return g;
}

bool is_probable_prime(const BigInt& n, int reps) {
    return mpz_probab_prime_p(n.get_mpz_t(), reps) != 0;
}

bool is_perfect_power(const BigInt& n) { return mpz_perfect_power_p(n.get_mpz_t()) != 0; }

NonInvertibleError::NonInvertibleError(BigInt g)
    : std::runtime_error("element not invertible, gcd = " + to_decimal(g)), g_(std::move(g)) {}

namespace {

BigInt reduce(const BigInt& v, const BigInt& n) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    return r;
}

}  // namespace

Modulus::Modulus(const BigInt& n) {
    if (n < 2) throw std::invalid_argument("modulus must be >= 2, got " + to_decimal(n));
    n_ = std::make_shared<const BigInt>(n);
}

RingElement Modulus::operator()(const BigInt& v) const { return RingElement(*this, v); }
RingElement Modulus::operator()(long v) const { return RingElement(*this, BigInt(v)); }
RingElement Modulus::zero() const { return (*this)(0L); }
RingElement Modulus::one() const { return (*this)(1L); }

RingElement::RingElement(const Modulus& m, const BigInt& v) : v_(reduce(v, m.value())), n_(m.n_) {}

Modulus RingElement::modulus() const {
    if (!n_) throw std::logic_error("unbound ring element");
    return Modulus(n_);
}

const BigInt& RingElement::modulus_value() const {
    if (!n_) throw std::logic_error("unbound ring element");
    return *n_;
}

const std::shared_ptr<const BigInt>& RingElement::shared_with(const RingElement& other) const {
    if (n_ == other.n_ && n_) return n_;
    if (!n_ || !other.n_) throw std::logic_error("unbound ring element");
    if (*n_ != *other.n_) {
        throw std::invalid_argument("modulus mismatch: " + to_decimal(*n_) + " vs " +
                                    to_decimal(*other.n_));
    }
    return n_;
}

std::variant<RingElement, NonInvertible> RingElement::inverse() const {
    const BigInt& n = modulus_value();
    BigInt g = lyness::gcd(v_, n);
    if (g != 1) return NonInvertible{g};
    BigInt r;
    mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), n.get_mpz_t());
    return RingElement(n_, std::move(r));
}

RingElement operator+(const RingElement& x, const RingElement& y) {
    const auto& n = x.shared_with(y);
    BigInt r = x.v_ + y.v_;
    if (r >= *n) r -= *n;
    return RingElement(n, std::move(r));
}

RingElement operator-(const RingElement& x, const RingElement& y) {
    const auto& n = x.shared_with(y);
    BigInt r = x.v_ - y.v_;
    if (r < 0) r += *n;
    return RingElement(n, std::move(r));
}

RingElement operator*(const RingElement& x, const RingElement& y) {
    const auto& n = x.shared_with(y);
    BigInt r = x.v_ * y.v_;
    mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), n->get_mpz_t());
    return RingElement(n, std::move(r));
}

RingElement operator/(const RingElement& x, const RingElement& y) {
    x.shared_with(y);
    auto inv = y.inverse();
    if (auto* w = std::get_if<NonInvertible>(&inv)) throw NonInvertibleError(w->g);
    return x * std::get<RingElement>(inv);
}

RingElement operator-(const RingElement& x) {
    const BigInt& n = x.modulus_value();
    if (x.v_ == 0) return x;
    return RingElement(x.n_, n - x.v_);
}

RingElement operator+(const RingElement& x, long k) {
    return RingElement(x.n_, reduce(x.v_ + k, x.modulus_value()));
}

RingElement operator*(const RingElement& x, long k) {
    return RingElement(x.n_, reduce(x.v_ * k, x.modulus_value()));
}

bool operator==(const RingElement& x, const RingElement& y) {
    if (x.n_ != y.n_) {
        if (!x.n_ || !y.n_ || *x.n_ != *y.n_) return false;
    }
    return x.v_ == y.v_;
}

RingElement ring_mul(const RingElement& x, const RingElement& y, CostTally& tally) {
    ++tally.m;
    return x * y;
}

RingElement ring_sqr(const RingElement& x, CostTally& tally) {
    ++tally.s;
    return x * x;
}

RingElement ring_mul_const(const RingElement& k, const RingElement& x, CostTally& tally) {
    if (k.is_one() && k.modulus() == x.modulus()) return x;
    RingElement r = k * x;
    ++tally.c;
    return r;
}

RingElement ring_add(const RingElement& x, const RingElement& y, CostTally& tally) {
    ++tally.add;
    return x + y;
}

RingElement ring_sub(const RingElement& x, const RingElement& y, CostTally& tally) {
    ++tally.add;
    return x - y;
}

RingElement ring_dbl(const RingElement& x, CostTally& tally) {
    ++tally.add;
    return x + x;
}

RingElement ring_neg_dbl(const RingElement& x, CostTally& tally) {
    ++tally.add;
    return -(x + x);
}

std::variant<RingElement, NonInvertible> ring_inv(const RingElement& x) { return x.inverse(); }

}  // namespace lyness
