#include "lyness/rational.hpp"

#include <stdexcept>

namespace lyness {

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (auto slash = s.find('/'); slash != std::string::npos) {
        return Rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (frac.empty() || frac[0] == '+' || frac[0] == '-') throw std::invalid_argument("malformed rational: '" + s + "'");
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        BigInt w = parse_integer(whole);
        BigInt f = parse_integer(frac);
        BigInt num = (negative ? BigInt(-w) : w) * scale + f;
        return Rational(negative ? BigInt(-num) : num, scale);
    }
    return Rational(parse_integer(s));
}

RingElement Rational::reduce(const Modulus& m) const {
    return m(numerator()) / m(denominator());
}

Rational operator/(const Rational& x, const Rational& y) {
    if (y.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(mpq_class(x.q_ / y.q_));
}

Rational pow(const Rational& x, unsigned e) {
    Rational r(1);
    for (unsigned i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace lyness
