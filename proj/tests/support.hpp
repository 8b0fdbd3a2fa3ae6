#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lyness/rational.hpp"
#include "lyness/ring.hpp"

namespace testing {

using lyness::BigInt;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed1234ULL);
    return gen;
}

inline std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng());
}

inline BigInt big_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

/// Random prime with the top bit of a 64-bit word set.
inline BigInt random_prime_64() {
    BigInt p;
    BigInt start = big_u64(rng()() | (1ULL << 63));
    mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
    return p;
}

inline BigInt random_below(const BigInt& n) {
    BigInt r = 0;
    for (int i = 0; i < 4; ++i) r = (r << 64) + big_u64(rng()());
    return r % n;
}

inline std::vector<std::uint64_t> small_primes(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
    }
    return out;
}

inline lyness::Rational random_rational(long span = 50) {
    long num = static_cast<long>(uniform(0, 2 * span)) - span;
    long den = static_cast<long>(uniform(1, span));
    return lyness::Rational(BigInt(num), BigInt(den));
}

}  // namespace testing
