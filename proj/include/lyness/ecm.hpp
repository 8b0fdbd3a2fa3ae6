#pragma once

// Stage-1 ECM on Lyness curves with a = 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lyness/chain.hpp"
#include "lyness/cost.hpp"
#include "lyness/projective.hpp"
#include "lyness/ring.hpp"

namespace lyness {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Empty when N is usable; otherwise every failed condition, joined by "; ".
std::optional<std::string> modulus_problem(const BigInt& N);

struct CurveAttempt {
    RingElement b;
    RingElement u5;

    RingParams params() const;  // (1, b)
    ProjQuad start() const;     // (-b, 1, u5, 1)
};

struct EcmConfig {
    BigInt N;
    unsigned long B1 = 0;             // ignored when scalar is set
    std::optional<BigInt> scalar;
    std::size_t curve_count = 1;
    std::uint64_t seed = 1;
    ChainMode chain_mode = ChainMode::Signed;
    int lanes = 1;                    // 1, 2 or 4
    std::size_t gcd_interval = 0;     // chain segments between checks; 0 = end only
    int workers = 1;                  // concurrent curve attempts
    std::optional<BigInt> b;          // explicit curve: both b and u5
    std::optional<BigInt> u5;

    /// Throws UsageError.
    void validate() const;
    BigInt resolved_scalar() const;
};

enum class EcmStatus { FactorFound, NoFactor, TotalCollapse };

std::string_view status_name(EcmStatus s);
EcmStatus parse_status(std::string_view text);

struct CurveRecord {
    std::size_t index = 0;
    BigInt b;
    BigInt u5;
    EcmStatus status = EcmStatus::NoFactor;
    BigInt factor;               // 0 unless FactorFound
    std::size_t position = 0;    // chain segment of the event (segment count = end)
    bool backtracked = false;
    ProjQuad final_quad;
    CostTally tally;
};

struct EcmOutcome {
    EcmStatus status = EcmStatus::NoFactor;
    BigInt factor;
    std::size_t curve_index = 0;
    std::size_t position = 0;
    std::vector<CurveRecord> curves;
    CostTally total;
};

/// Classification of a final or intermediate quadruple by
/// gcd(W*Z mod N, N), re-derived from W and Z separately when it is N.
struct GcdEvent {
    EcmStatus status = EcmStatus::NoFactor;
    BigInt factor;
};
GcdEvent classify_quad(const ProjQuad& q, const BigInt& N);

/// Draws attempt i of the seeded sequence: b in [2, N-2], u5 in [1, N-1].
std::vector<CurveAttempt> draw_attempts(const Modulus& N, std::uint64_t seed, std::size_t count);

/// One curve. With gcd_interval > 0 the gcd is also taken every
/// gcd_interval segments and a factor stops the chain early.
EcmOutcome stage1_single(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain, int lanes = 1,
                         std::size_t gcd_interval = 0);
EcmOutcome stage1_single(const Modulus& N, const CurveAttempt& attempt, const BigInt& s, ChainMode mode,
                         int lanes = 1);

/// Re-runs the chain with a gcd after every segment and returns the first
/// proper factor; TotalCollapse if all factors collapse together.
EcmOutcome backtrack(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain, int lanes = 1);

/// Runs config.curve_count attempts (on config.workers threads) and returns
/// the lowest-indexed success. curves holds the records of attempts
/// 0..curve_index on success, all attempts otherwise; total sums them.
/// Attempts ending in TotalCollapse are backtracked.
EcmOutcome stage1_multi(const EcmConfig& config);

}  // namespace lyness
