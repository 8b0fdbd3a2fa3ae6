#pragma once

#include <cstdint>
#include <string>

namespace lyness {

/// Operation counts in the M/S/C cost model. Additions are tracked but are
/// treated as free when costs are compared.
///
/// A tally is always owned by one computation (or one lane); nothing in the
/// library writes to shared counters.
struct CostTally {
    std::uint64_t m = 0;    // general multiplications
    std::uint64_t s = 0;    // squarings
    std::uint64_t c = 0;    // multiplications by curve constants
    std::uint64_t add = 0;  // additions, subtractions, doublings, negations

    // Critical-path rows executed by lane programs, by row cost class.
    std::uint64_t depth_m = 0;
    std::uint64_t depth_c = 0;
    std::uint64_t depth_free = 0;

    CostTally& operator+=(const CostTally& other) {
        m += other.m;
        s += other.s;
        c += other.c;
        add += other.add;
        depth_m += other.depth_m;
        depth_c += other.depth_c;
        depth_free += other.depth_free;
        return *this;
    }

    friend CostTally operator+(CostTally lhs, const CostTally& rhs) { return lhs += rhs; }
    friend bool operator==(const CostTally&, const CostTally&) = default;

    /// Multiplicative cost only, e.g. "15M+1C". Zero S is omitted.
    std::string cost_string() const;

    /// Lane-program critical path, e.g. "4M+1C".
    std::string depth_string() const;
};

}  // namespace lyness
