#include "lyness/chain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lyness {

std::string_view chain_mode_name(ChainMode mode) { return mode == ChainMode::Signed ? "signed" : "addonly"; }

ChainMode parse_chain_mode(std::string_view text) {
    if (text == "signed") return ChainMode::Signed;
    if (text == "addonly" || text == "add-only") return ChainMode::AddOnly;
    throw std::invalid_argument("unknown chain mode '" + std::string(text) + "'");
}

std::size_t AdditionChain::doublings() const {
    std::size_t n = 0;
    for (const auto& seg : tail) n += seg.k;
    return n;
}

std::size_t AdditionChain::additions() const {
    return delta0 + static_cast<std::size_t>(std::count_if(tail.begin(), tail.end(),
                                                           [](const ChainSegment& s) { return s.delta > 0; }));
}

std::size_t AdditionChain::subtractions() const {
    return static_cast<std::size_t>(
        std::count_if(tail.begin(), tail.end(), [](const ChainSegment& s) { return s.delta < 0; }));
}

void AdditionChain::validate() const {
    if (delta0 > 3) throw std::invalid_argument("chain: delta0 must be in [0, 3]");
    for (const auto& seg : tail) {
        if (seg.k == 0) throw std::invalid_argument("chain: segment with no doublings");
        if (seg.delta < -1 || seg.delta > 1) throw std::invalid_argument("chain: delta must be -1, 0 or 1");
        if (mode == ChainMode::AddOnly && seg.delta < 0)
            throw std::invalid_argument("chain: add-only chain subtracts P");
    }
}

std::string AdditionChain::to_string() const {
    std::ostringstream os;
    os << "4";
    if (delta0 > 0) os << " +" << delta0;
    for (const auto& seg : tail) {
        os << " D" << seg.k;
        if (seg.delta > 0) os << " +1";
        if (seg.delta < 0) os << " -1";
    }
    return os.str();
}

AdditionChain AdditionChain::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string tok;
    if (!(is >> tok) || tok != "4") throw std::invalid_argument("chain text must start with '4'");
    AdditionChain chain;
    bool any_sub = false;
    while (is >> tok) {
        if (tok[0] == 'D') {
            std::size_t used = 0;
            unsigned long k = 0;
            try {
                k = std::stoul(tok.substr(1), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used + 1 != tok.size() || k == 0)
                throw std::invalid_argument("bad doubling token '" + tok + "'");
            chain.tail.push_back({static_cast<unsigned>(k), 0});
        } else if (tok[0] == '+' || tok[0] == '-') {
            long v = 0;
            try {
                v = std::stol(tok);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad step token '" + tok + "'");
            }
            if (chain.tail.empty()) {
                if (v < 0 || v > 3 || chain.delta0 != 0) throw std::invalid_argument("bad leading additions '" + tok + "'");
                chain.delta0 = static_cast<unsigned>(v);
            } else {
                auto& seg = chain.tail.back();
                if ((v != 1 && v != -1) || seg.delta != 0) throw std::invalid_argument("bad step token '" + tok + "'");
                seg.delta = static_cast<int>(v);
                any_sub = any_sub || v < 0;
            }
        } else {
            throw std::invalid_argument("unexpected chain token '" + tok + "'");
        }
    }
    chain.mode = any_sub ? ChainMode::Signed : ChainMode::AddOnly;
    chain.validate();
    return chain;
}

ScalarPlan build_scalar(unsigned long B1) {
    if (B1 < 2) throw std::invalid_argument("B1 must be >= 2");
    std::vector<bool> composite(B1 + 1, false);
    BigInt s = 1;
    for (unsigned long p = 2; p <= B1; ++p) {
        if (composite[p]) continue;
        for (unsigned long m = p * p; m <= B1; m += p) composite[m] = true;
        unsigned long pk = p;
        while (pk <= B1 / p) pk *= p;
        s *= pk;
    }
    return {B1, s};
}

namespace {

// Groups MSB-first digits following the window into (k, delta) segments.
std::vector<ChainSegment> group_tail(const std::vector<int>& digits, std::size_t from) {
    std::vector<ChainSegment> tail;
    unsigned k = 0;
    for (std::size_t i = from; i < digits.size(); ++i) {
        ++k;
        if (digits[i] != 0) {
            tail.push_back({k, digits[i]});
            k = 0;
        }
    }
    if (k > 0) tail.push_back({k, 0});
    return tail;
}

std::vector<int> binary_digits(const BigInt& s) {
    std::size_t n = mpz_sizeinbase(s.get_mpz_t(), 2);
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[n - 1 - i] = mpz_tstbit(s.get_mpz_t(), i);
    return d;
}

std::vector<int> naf_digits(const BigInt& s) {
    std::vector<int> lsb_first;
    BigInt n = s;
    while (n > 0) {
        int d = 0;
        if (mpz_odd_p(n.get_mpz_t())) {
            d = mpz_tstbit(n.get_mpz_t(), 1) ? -1 : 1;
            n -= d;
        }
        lsb_first.push_back(d);
        n >>= 1;
    }
    return {lsb_first.rbegin(), lsb_first.rend()};
}

}  // namespace

AdditionChain build_chain(const BigInt& s, ChainMode mode) {
    if (s < 4) throw std::invalid_argument("scalar must be >= 4, got " + to_decimal(s));
    std::vector<int> digits = mode == ChainMode::Signed ? naf_digits(s) : binary_digits(s);
    long window = 0;
    std::size_t used = 0;
    while (used < digits.size() && (used < 3 || window < 4)) window = 2 * window + digits[used++];
    AdditionChain chain;
    chain.mode = mode;
    chain.delta0 = static_cast<unsigned>(window - 4);
    chain.tail = group_tail(digits, used);
    chain.validate();
    return chain;
}

BigInt chain_value(const AdditionChain& chain) {
    BigInt v = 4 + chain.delta0;
    for (const auto& seg : chain.tail) {
        v <<= seg.k;
        v += seg.delta;
    }
    return v;
}

CostTally chain_cost(const AdditionChain& chain) {
    std::uint64_t steps = chain.additions() + chain.subtractions();
    std::uint64_t dbl = chain.doublings();
    CostTally t;
    t.m = 2 * steps + 15 * dbl;
    t.c = steps + dbl;
    return t;
}

ProjQuad chain_exec(const AdditionChain& chain, const RingParams& params, const ProjQuad& start,
                    CostTally& tally, QuadArithmetic* arith, const SegmentObserver& observer) {
    QuadArithmetic sequential(1);
    QuadArithmetic& ops = arith ? *arith : sequential;
    ProjQuad q = start;
    for (unsigned i = 0; i < chain.delta0; ++i) q = ops.add_P(q, params, tally);
    if (observer && !observer(0, q)) return q;
    for (std::size_t j = 0; j < chain.tail.size(); ++j) {
        const auto& seg = chain.tail[j];
        for (unsigned i = 0; i < seg.k; ++i) q = ops.dbl(q, params, tally);
        if (seg.delta > 0) q = ops.add_P(q, params, tally);
        if (seg.delta < 0) q = ops.sub_P(q, params, tally);
        if (observer && !observer(j + 1, q)) return q;
    }
    return q;
}

}  // namespace lyness
