#include <doctest.h>

#include "lyness/chain.hpp"
#include "support.hpp"

using namespace lyness;

namespace {

BigInt lcm_up_to(unsigned long n) {
    BigInt l = 1;
    for (unsigned long k = 2; k <= n; ++k) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), k);
    return l;
}

// Digits after the leading window, most significant first.
std::vector<int> tail_digits(const AdditionChain& c) {
    std::vector<int> d;
    for (const auto& seg : c.tail) {
        for (unsigned i = 1; i < seg.k; ++i) d.push_back(0);
        d.push_back(seg.delta);
    }
    return d;
}

BigInt random_bits(unsigned bits) {
    BigInt r = 0;
    for (unsigned i = 0; i < bits; i += 64) r = (r << 64) + testing::big_u64(testing::rng()());
    mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
    mpz_setbit(r.get_mpz_t(), bits - 1);
    return r;
}

}  // namespace

TEST_CASE("build_scalar") {
    CHECK(build_scalar(10).s == 2520);
    CHECK(build_scalar(2).s == 2);
    CHECK(build_scalar(28).s % 16 == 0);
    CHECK(build_scalar(28).s % 32 != 0);
    CHECK(build_scalar(20).s == 232792560);
    // the product of maximal prime powers is lcm(1..B1)
    for (unsigned long B1 : {3UL, 7UL, 30UL, 97UL, 1000UL}) CHECK(build_scalar(B1).s == lcm_up_to(B1));
    CHECK_THROWS_AS(build_scalar(1), std::invalid_argument);
}

TEST_CASE("chains for 28") {
    AdditionChain sgn = build_chain(28, ChainMode::Signed);
    CHECK(sgn.delta0 == 0);
    CHECK(sgn.tail == std::vector<ChainSegment>{{1, -1}, {2, 0}});
    CHECK(sgn.to_string() == "4 D1 -1 D2");

    AdditionChain add = build_chain(28, ChainMode::AddOnly);
    CHECK(add.delta0 == 3);
    CHECK(add.tail == std::vector<ChainSegment>{{2, 0}});
    CHECK(add.to_string() == "4 +3 D2");

    CHECK(chain_value(sgn) == 28);
    CHECK(chain_value(add) == 28);
    CHECK(chain_cost(sgn).cost_string() == "47M+4C");
    CHECK(chain_cost(add).cost_string() == "36M+5C");
}

TEST_CASE("small scalars") {
    AdditionChain four = build_chain(4, ChainMode::Signed);
    CHECK(four.delta0 == 0);
    CHECK(four.tail.empty());
    CHECK(chain_value(four) == 4);
    CHECK(build_chain(7, ChainMode::AddOnly).delta0 == 3);
    CHECK(build_chain(7, ChainMode::Signed).to_string() == "4 D1 -1");
    CHECK_THROWS_AS(build_chain(3, ChainMode::Signed), std::invalid_argument);
    CHECK_THROWS_AS(build_chain(0, ChainMode::AddOnly), std::invalid_argument);
}

TEST_CASE("text form") {
    for (const char* text : {"4", "4 +3 D2", "4 D1 -1 D2", "4 +1 D3 +1 D1 D2 -1"}) {
        CHECK(AdditionChain::parse(text).to_string() == text);
    }
    CHECK(AdditionChain::parse("4 D1 -1 D2").mode == ChainMode::Signed);
    CHECK(AdditionChain::parse("4 +3 D2") == build_chain(28, ChainMode::AddOnly));
    for (const char* bad : {"", "5 D1", "4 +4", "4 D0", "4 D1 +2", "4 D1 +1 -1", "4 -1", "4 Dx", "4 D2x", "4 +1 +1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(AdditionChain::parse(bad), std::invalid_argument);
    }
    AdditionChain c{0, {{1, -1}}, ChainMode::AddOnly};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("chain values for consecutive and large scalars") {
    for (long s = 4; s <= 100000; ++s) {
        for (ChainMode mode : {ChainMode::Signed, ChainMode::AddOnly}) {
            AdditionChain c = build_chain(s, mode);
            if (chain_value(c) != s) {
                FAIL("chain value mismatch for " << s);
            }
        }
    }
    for (int i = 0; i < 200; ++i) {
        BigInt s = random_bits(512);
        for (ChainMode mode : {ChainMode::Signed, ChainMode::AddOnly}) CHECK(chain_value(build_chain(s, mode)) == s);
    }
}

TEST_CASE("signed chains are non-adjacent, add-only chains never subtract") {
    for (long s = 4; s <= 20000; ++s) {
        auto d = tail_digits(build_chain(s, ChainMode::Signed));
        for (std::size_t i = 1; i < d.size(); ++i) REQUIRE_FALSE((d[i] != 0 && d[i - 1] != 0));
        for (const auto& seg : build_chain(s, ChainMode::AddOnly).tail) REQUIRE(seg.delta >= 0);
    }
}

TEST_CASE("chain_exec on the worked example") {
    Modulus N(BigInt("3595474639"));
    RingParams p = unit_a_params(N, 2);
    ProjQuad start{N(-2), N(1), N(17), N(1)};
    CostTally t;
    ProjQuad q = chain_exec(build_chain(28, ChainMode::Signed), p, start, t);
    CHECK(q == ProjQuad{N(558084862), N(1754538456), N(252369828), N(1216214157)});
    CHECK(t.cost_string() == "47M+4C");

    CostTally e;
    CHECK(chain_exec(build_chain(4, ChainMode::Signed), p, start, e) == start);
    CHECK(e == CostTally{});

    std::vector<std::size_t> seen;
    CostTally o;
    chain_exec(build_chain(28, ChainMode::Signed), p, start, o, nullptr, [&](std::size_t seg, const ProjQuad&) {
        seen.push_back(seg);
        return seg < 1;
    });
    CHECK(seen == std::vector<std::size_t>{0, 1});
    CHECK(o.cost_string() == "17M+2C");
}

TEST_CASE("tally matches the chain shape and modes agree projectively") {
    for (int i = 0; i < 40; ++i) {
        Modulus F(testing::random_prime_64());
        RingParams prm{F(1), F(testing::random_below(F.value())), std::nullopt};
        ProjQuad start{-prm.b, F(1), F(testing::random_below(F.value())), F(1)};
        BigInt s = random_bits(static_cast<unsigned>(testing::uniform(3, 200)));
        AdditionChain cs = build_chain(s, ChainMode::Signed);
        AdditionChain ca = build_chain(s, ChainMode::AddOnly);
        CostTally ts, ta;
        QuadArithmetic lanes(i % 2 == 0 ? 1 : 4);
        ProjQuad qs = chain_exec(cs, prm, start, ts, &lanes);
        ProjQuad qa = chain_exec(ca, prm, start, ta);
        CHECK(proj_eq(qs, qa));
        CHECK(ts.m == chain_cost(cs).m);
        CHECK(ts.c == chain_cost(cs).c);
        CHECK(ta.m == chain_cost(ca).m);
        CHECK(ta.c == chain_cost(ca).c);
    }
}
