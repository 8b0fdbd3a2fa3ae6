// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "lyness/ecm.hpp"
#include "lyness/lanes.hpp"
#include "lyness/oracle.hpp"
#include "lyness/weierstrass.hpp"
#include "support.hpp"

using namespace lyness;

namespace {

enum class Verdict { Pass, Warn, Fail };

struct Result {
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

const BigInt kN("3595474639");

ProjQuad quad(const Modulus& m, const char* x, const char* w, const char* y, const char* z) {
    return {m(BigInt(x)), m(BigInt(w)), m(BigInt(y)), m(BigInt(z))};
}

std::uint64_t mod_u64(const BigInt& v, std::uint64_t p) { return mpz_fdiv_ui(v.get_mpz_t(), p); }

Result worked_example() {
    Modulus N(kN);
    RingParams p = unit_a_params(N, 2);
    ProjQuad start{N(-2), N(1), N(17), N(1)};
    CostTally t;
    int bad = 0;
    ProjQuad q8 = proj_double(start, p, t);
    bad += !(q8 == quad(N, "3595467431", "43928", "80648", "3595455259"));
    ProjQuad q7 = proj_sub_P(q8, p, t);
    bad += !(q7.X.value() == BigInt("2032516399") && q7.W.value() == BigInt("3542705344"));
    ProjQuad q14 = proj_double(q7, p, t);
    bad += !(q14 == quad(N, "160913035", "3261908647", "3049465821", "760206673"));
    ProjQuad q28 = proj_double(q14, p, t);
    bad += !(q28 == quad(N, "558084862", "1754538456", "252369828", "1216214157"));
    bad += !(gcd(q28.W.value(), kN) == 6645979);
    ProjQuad q29 = proj_add_P(q28, p, t);
    bad += !(gcd(q29.W.value(), kN) == 6645979);

    CostTally c;
    bad += !(chain_exec(build_chain(28, ChainMode::Signed), p, start, c) == q28);
    EcmOutcome out = stage1_single(N, {N(2), N(17)}, 28, ChainMode::Signed);
    bad += !(out.status == EcmStatus::FactorFound && out.factor == 6645979);
    return {bad ? Verdict::Fail : Verdict::Pass, std::to_string(6 + 2 - bad) + "/8 values exact, factor " +
                                                     to_decimal(out.factor) + " cofactor " +
                                                     to_decimal(kN / std::max(out.factor, BigInt(1)))};
}

Result cost_model() {
    Modulus N(kN);
    RingParams p = unit_a_params(N, 2);
    ProjQuad q{N(-2), N(1), N(17), N(1)};
    std::vector<std::string> got;
    auto one = [&](auto op) {
        CostTally t;
        op(t);
        return t;
    };
    got.push_back(one([&](CostTally& t) { proj_add_P(q, p, t); }).cost_string());
    got.push_back(one([&](CostTally& t) { proj_sub_P(q, p, t); }).cost_string());
    got.push_back(one([&](CostTally& t) { proj_double(q, p, t); }).cost_string());
    LaneExecutor two(2), four(4);
    got.push_back(one([&](CostTally& t) { two.run(addition_program(), q, p, t); }).depth_string());
    got.push_back(one([&](CostTally& t) { four.run(doubling_program(), q, p, t); }).depth_string());
    got.push_back(chain_cost(build_chain(28, ChainMode::Signed)).cost_string());
    got.push_back(one([&](CostTally& t) { chain_exec(build_chain(28, ChainMode::Signed), p, q, t); }).cost_string());
    std::vector<std::string> want{"2M+1C", "2M+1C", "15M+1C", "1M+1C", "4M+1C", "47M+4C", "47M+4C"};
    std::string detail;
    for (const auto& g : got) detail += (detail.empty() ? "" : " ") + g;
    return {got == want ? Verdict::Pass : Verdict::Fail, detail};
}

Result parallel_bit_equality() {
    LaneExecutor w1(1), w2(2), w4(4);
    long mismatches = 0, total = 0;
    for (int m = 0; m < 10; ++m) {
        Modulus F(testing::random_prime_64());
        auto r = [&] { return F(testing::random_below(F.value())); };
        for (int i = 0; i < 1000; ++i) {
            RingParams prm{F(1), r(), std::nullopt};
            ProjQuad q{r(), r(), r(), r()};
            CostTally t;
            ProjQuad d = proj_double(q, prm, t);
            ProjQuad a = proj_add_P(q, prm, t);
            for (LaneExecutor* e : {&w1, &w2, &w4}) mismatches += !(e->run(doubling_program(), q, prm, t).result == d);
            for (LaneExecutor* e : {&w1, &w2}) mismatches += !(e->run(addition_program(), q, prm, t).result == a);
            ++total;
        }
    }
    return {mismatches ? Verdict::Fail : Verdict::Pass,
            std::to_string(total) + " quadruples, " + std::to_string(mismatches) + " mismatches"};
}

Result oracle_equivalence() {
    auto primes = testing::small_primes(11, 199);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (auto p : primes)
        for (auto q : primes)
            if (p < q) pairs.emplace_back(p, q);
    std::shuffle(pairs.begin(), pairs.end(), testing::rng());
    pairs.resize(200);

    AdditionChain chain = build_chain(build_scalar(20).s, ChainMode::Signed);
    long cases = 0, literal = 0, path_aware = 0, sufficient = 0, sufficient_total = 0;
    long extra_event = 0, split_both = 0, other_miss = 0;
    std::uint64_t seed = 1;
    for (auto [p, q] : pairs) {
        Modulus N(BigInt(static_cast<long>(p * q)));
        int drawn = 0;
        while (drawn < 10) {
            CurveAttempt at = draw_attempts(N, seed++, 1).front();
            SmallCurve cp{p, mod_u64(at.b.value(), p), mod_u64(at.u5.value(), p)};
            SmallCurve cq{q, mod_u64(at.b.value(), q), mod_u64(at.u5.value(), q)};
            try {
                require_valid(cp);
                require_valid(cq);
            } catch (const std::invalid_argument&) {
                continue;
            }
            ++drawn;
            std::uint64_t op = order_of_P(cp).order, oq = order_of_P(cq).order;
            EcmOutcome out = stage1_single(N, at, chain);

            // literal rule: ord_p | s and ord_q | s decide the outcome
            bool dp = divisibility_event(chain_value(chain), op), dq = divisibility_event(chain_value(chain), oq);
            bool lit = false;
            if (dp && dq) lit = out.status == EcmStatus::TotalCollapse;
            else if (dp) lit = out.status == EcmStatus::FactorFound && out.factor == p;
            else if (dq) lit = out.status == EcmStatus::FactorFound && out.factor == q;
            else lit = out.status == EcmStatus::NoFactor;
            literal += lit;
            if (!lit) {
                if (!dp && !dq) ++extra_event;
                else if (dp && dq) ++split_both;
                else ++other_miss;
            }

            bool ep = predict_event(chain, op).event, eq = predict_event(chain, oq).event;
            bool pa = false;
            if (ep && eq) pa = out.status != EcmStatus::NoFactor;
            else if (ep) pa = out.status == EcmStatus::FactorFound && out.factor == p;
            else if (eq) pa = out.status == EcmStatus::FactorFound && out.factor == q;
            else pa = out.status == EcmStatus::NoFactor;
            path_aware += pa;

            if (dp || dq) {
                ++sufficient_total;
                sufficient += out.status != EcmStatus::NoFactor;
            }
            ++cases;
        }
    }
    std::ostringstream d;
    d << "divisibility prediction matched " << literal << "/" << cases << "; ord | s gave an event in " << sufficient
      << "/" << sufficient_total << "; misses: " << extra_event << " events with neither order dividing s, "
      << other_miss << " events at both primes with one order dividing s, " << split_both
      << " splits where both divide; path-aware prediction matched " << path_aware << "/" << cases;
    return {literal == cases ? Verdict::Pass : Verdict::Fail, d.str()};
}

Result chain_correctness() {
    long bad = 0, compared = 0, skipped = 0;
    for (long s = 4; s <= 1000000; ++s)
        for (ChainMode mode : {ChainMode::Signed, ChainMode::AddOnly}) bad += chain_value(build_chain(s, mode)) != s;
    for (int i = 0; i < 1000; ++i) {
        BigInt s = 0;
        for (int k = 0; k < 8; ++k) s = (s << 64) + testing::big_u64(testing::rng()());
        mpz_setbit(s.get_mpz_t(), 511);
        for (ChainMode mode : {ChainMode::Signed, ChainMode::AddOnly}) bad += chain_value(build_chain(s, mode)) != s;
    }
    auto primes = testing::small_primes(101, 1000);
    while (compared < 100) {
        std::uint64_t p = primes[testing::uniform(0, primes.size() - 1)];
        SmallCurve c{p, testing::uniform(2, p - 1), testing::uniform(0, p - 1)};
        try {
            require_valid(c);
        } catch (const std::invalid_argument&) {
            continue;
        }
        BigInt s = testing::big_u64(testing::uniform(4, 1ULL << 40));
        AdditionChain cs = build_chain(s, ChainMode::Signed), ca = build_chain(s, ChainMode::AddOnly);
        std::uint64_t ord = order_of_P(c).order;
        if (predict_event(cs, ord).collapsed || predict_event(ca, ord).collapsed) {
            ++skipped;
            continue;
        }
        CostTally t;
        bad += !proj_eq(chain_exec(cs, c.params(), c.start(), t), chain_exec(ca, c.params(), c.start(), t));
        ++compared;
    }
    std::ostringstream d;
    d << bad << " failures; " << compared << " mode comparisons (" << skipped << " collapsing paths redrawn)";
    return {bad ? Verdict::Fail : Verdict::Pass, d.str()};
}

Result invariant_suites() {
    using RPoint = AffinePoint<RingElement>;
    long bad = 0, k_checks = 0, cycles = 0, jac = 0, conv = 0, jm = 0;
    while (k_checks < 1000) {
        Modulus F(testing::random_prime_64());
        auto r = [&] { return F(testing::random_below(F.value())); };
        LynessParams<RingElement> p{r(), r(), std::nullopt};
        RPoint s = RPoint::finite(r(), r());
        try {
            RingElement K = eval_K(p, s);
            RPoint f = affine_step(p, s), g = affine_inverse(p, s), d = affine_double(p, s);
            bad += !(eval_K(p, f) == K) + !(eval_K(p, g) == K) + !(eval_K(p, d) == K);
            ++k_checks;
        } catch (const CurveError&) {
        }
    }
    while (cycles < 200) {
        Modulus F(testing::random_prime_64());
        RingElement a = F(testing::random_below(F.value()));
        LynessParams<RingElement> p{a, a * a, std::nullopt};
        RPoint s = RPoint::finite(F(testing::random_below(F.value())), F(testing::random_below(F.value())));
        RPoint z = s;
        try {
            for (int i = 0; i < 5; ++i) z = affine_step(p, z);
        } catch (const CurveError&) {
            continue;
        }
        bad += !(z == s);
        ++cycles;
    }
    while (jac < 1000) {
        Modulus F(testing::random_prime_64());
        auto r = [&] { return F(testing::random_below(F.value())); };
        LynessParams<RingElement> p{r(), r(), std::nullopt};
        RPoint s = RPoint::finite(r(), r());
        try {
            RPoint f = affine_step(p, s);
            bad += !(step_jacobian(p, s) * (*s.x * *s.y) == *f.x * *f.y);
            ++jac;
        } catch (const CurveError&) {
        }
    }
    using Q = Rational;
    while (conv < 100) {
        Q A = testing::random_rational(), nu = testing::random_rational(), xi = testing::random_rational();
        WeierstrassCurve<Q> curve{A, xi * xi - nu * nu * nu - A * nu};
        ConversionData<Q> c;
        try {
            c = to_lyness(curve, MarkedPoint<Q>{nu, xi});
        } catch (const CurveError&) {
            continue;
        }
        const auto& L = c.lyness;
        bad += !(c.alpha * c.alpha == *L.K + L.a);
        bad += !(c.beta * c.beta * c.beta == -(*L.K * L.a + L.b));
        bad += !(c.beta * c.J == -(*L.K + 2 * L.a));
        WPoint<Q> m = WeierstrassPoint<Q>{nu, xi}, pt = m;
        for (int k = 2; k <= 5; ++k) {
            pt = weierstrass_add(curve, pt, m);
            if (k < 4 || !pt) continue;
            try {
                bad += !(from_lyness(c, map_point_to_lyness(c, *pt)) == *pt);
            } catch (const CurveError&) {
            }
        }
        ++conv;
    }
    while (jm < 20) {
        LynessParams<Q> L{testing::random_rational(), testing::random_rational(), testing::random_rational()};
        if (L.a.is_zero() || curve_invariants(L).singular()) continue;
        bad += !(curve_invariants(L).j == weierstrass_j(twisted_model(L)));
        ++jm;
    }
    std::ostringstream d;
    d << bad << " failures over " << k_checks << " K checks, " << cycles << " five-cycles, " << jac
      << " Jacobians, " << conv << " conversions, " << jm << " j-matches";
    return {bad ? Verdict::Fail : Verdict::Pass, d.str()};
}

Result singular_fixture() {
    using Q = Rational;
    auto s = curve_invariants(LynessParams<Q>{1, 2, Q(BigInt(23), BigInt(2))});
    auto w = curve_invariants(LynessParams<Q>{1, 2, Q(7)});
    bool ok = s.singular_factor.is_zero() && !w.singular_factor.is_zero() && !w.singular();
    return {ok ? Verdict::Pass : Verdict::Fail, "singular factor at K=23/2 is " + s.singular_factor.to_string() +
                                                    ", at K=7 is " + w.singular_factor.to_string()};
}

BigInt random_prime_in(unsigned lo_bits, unsigned hi_bits) {
    BigInt lo = BigInt(1) << lo_bits, span = (BigInt(1) << hi_bits) - lo;
    for (;;) {
        BigInt p;
        BigInt start = lo + testing::random_below(span);
        mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
        if (p < (BigInt(1) << hi_bits)) return p;
    }
}

Result end_to_end() {
    int found = 0;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (int i = 0; i < 20; ++i) {
        BigInt p = random_prime_in(20, 25), q = random_prime_in(30, 35);
        EcmConfig c;
        c.N = p * q;
        c.B1 = 10000;
        c.curve_count = 200;
        c.seed = 1000 + i;
        c.workers = workers;
        EcmOutcome o = stage1_multi(c);
        found += o.status == EcmStatus::FactorFound && (o.factor == p || o.factor == q);
    }
    Verdict v = found >= 15 ? Verdict::Pass : found >= 12 ? Verdict::Warn : Verdict::Fail;
    return {v, std::to_string(found) + "/20 semiprimes factored"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Result()> run;
    };
    std::vector<Criterion> all{
        {1, "worked example", 1, worked_example},
        {2, "cost model", 1, cost_model},
        {3, "parallel bit equality", 30, parallel_bit_equality},
        {4, "oracle equivalence", 120, oracle_equivalence},
        {5, "chain correctness", 60, chain_correctness},
        {6, "invariant suites", 600, invariant_suites},
        {7, "singular fixture", 1, singular_fixture},
        {8, "end-to-end factoring", 600, end_to_end},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {Verdict::Fail, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > c.limit_s) {
            r.verdict = Verdict::Fail;
            r.detail += "; over the time limit";
        }
        const char* tag = r.verdict == Verdict::Pass ? "PASS" : r.verdict == Verdict::Warn ? "WARN" : "FAIL";
        std::printf("[%s] %d %s: %s (%.2f s, limit %.0f s)\n", tag, c.id, c.name, r.detail.c_str(), s, c.limit_s);
        std::fflush(stdout);
        failed += r.verdict == Verdict::Fail;
    }
    return failed ? 1 : 0;
}
