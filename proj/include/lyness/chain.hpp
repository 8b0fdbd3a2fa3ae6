#pragma once

// Addition chains from 4P:
//
//   s = 2^{k_m}( ... 2^{k_1}(4 + d_0) + d_1 ... ) + d_m
//
// d_0 additions of P, then for each segment k_j doublings followed by adding
// (d_j = +1) or subtracting (d_j = -1) P, or nothing (d_j = 0).

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lyness/cost.hpp"
#include "lyness/lanes.hpp"
#include "lyness/projective.hpp"
#include "lyness/ring.hpp"

namespace lyness {

enum class ChainMode { Signed, AddOnly };

std::string_view chain_mode_name(ChainMode mode);
ChainMode parse_chain_mode(std::string_view text);  // "signed" | "addonly"

struct ChainSegment {
    unsigned k = 0;
    int delta = 0;

    friend bool operator==(const ChainSegment&, const ChainSegment&) = default;
};

struct AdditionChain {
    unsigned delta0 = 0;
    std::vector<ChainSegment> tail;
    ChainMode mode = ChainMode::Signed;

    std::size_t doublings() const;
    std::size_t additions() const;     // delta0 plus segments ending in +1
    std::size_t subtractions() const;  // segments ending in -1

    /// Throws std::invalid_argument unless 0 <= d_0 <= 3, every k >= 1 and
    /// every d_j is allowed by the mode.
    void validate() const;

    /// Compact text: "4 +3 D2" (add-only 28), "4 D1 -1 D2" (signed 28).
    std::string to_string() const;
    /// Inverse of to_string. The mode is Signed if any segment subtracts.
    static AdditionChain parse(std::string_view text);

    friend bool operator==(const AdditionChain&, const AdditionChain&) = default;
};

struct ScalarPlan {
    unsigned long B1 = 0;
    BigInt s;
};

/// s = product over primes p <= B1 of the largest power of p not above B1.
ScalarPlan build_scalar(unsigned long B1);

/// Signed mode: non-adjacent form of s with a leading window in [4, 7].
/// Add-only mode: binary expansion with the top three bits as the window.
/// Requires s >= 4.
AdditionChain build_chain(const BigInt& s, ChainMode mode);

BigInt chain_value(const AdditionChain& chain);

/// Operation count of chain_exec for a = 1, from the chain shape alone.
CostTally chain_cost(const AdditionChain& chain);

/// Called after the d_0 block (segment 0) and after each tail segment
/// (1..m). Returning false stops the evaluation.
using SegmentObserver = std::function<bool(std::size_t segment, const ProjQuad& q)>;

/// Evaluates the chain from the quadruple for 4P and returns the quadruple
/// for sP. Sequential arithmetic unless `arith` is given.
ProjQuad chain_exec(const AdditionChain& chain, const RingParams& params, const ProjQuad& start,
                    CostTally& tally, QuadArithmetic* arith = nullptr, const SegmentObserver& observer = {});

}  // namespace lyness
