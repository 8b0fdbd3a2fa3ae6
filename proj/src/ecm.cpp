#include "lyness/ecm.hpp"

#include <atomic>
#include <limits>
#include <thread>

namespace lyness {

std::optional<std::string> modulus_problem(const BigInt& N) {
    std::string why;
    auto add = [&](const char* msg) {
        if (!why.empty()) why += "; ";
        why += msg;
    };
    if (N < 5) add("N must be at least 5");
    if (N >= 0 && mpz_even_p(N.get_mpz_t())) add("N is even");
    if (N >= 2 && is_probable_prime(N)) add("N is prime");
    if (N >= 4 && is_perfect_power(N)) add("N is a perfect power");
    if (why.empty()) return std::nullopt;
    return why;
}

RingParams CurveAttempt::params() const { return RingParams{lift(b, 1), b, std::nullopt}; }

ProjQuad CurveAttempt::start() const { return start_quad(params(), u5); }

void EcmConfig::validate() const {
    if (auto why = modulus_problem(N)) throw UsageError("invalid modulus " + to_decimal(N) + ": " + *why);
    if (curve_count == 0) throw UsageError("curve count must be positive");
    if (lanes != 1 && lanes != 2 && lanes != 4) throw UsageError("lanes must be 1, 2 or 4");
    if (workers < 1) throw UsageError("workers must be positive");
    if (b.has_value() != u5.has_value()) throw UsageError("an explicit curve needs both b and u5");
    if (b) {
        BigInt r = *b % N;
        if (r < 0) r += N;
        if (r == 0 || r == 1) throw UsageError("b must not be 0 or 1 mod N");
    }
    if (!scalar && B1 < 2) throw UsageError("B1 must be at least 2 (or give an explicit scalar)");
    if (resolved_scalar() < 4) throw UsageError("the scalar must be at least 4");
}

BigInt EcmConfig::resolved_scalar() const { return scalar ? *scalar : build_scalar(B1).s; }

std::string_view status_name(EcmStatus s) {
    switch (s) {
    case EcmStatus::FactorFound: return "factor";
    case EcmStatus::NoFactor: return "none";
    case EcmStatus::TotalCollapse: return "collapse";
    }
    return "?";
}

EcmStatus parse_status(std::string_view text) {
    if (text == "factor") return EcmStatus::FactorFound;
    if (text == "none") return EcmStatus::NoFactor;
    if (text == "collapse") return EcmStatus::TotalCollapse;
    throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

GcdEvent classify_quad(const ProjQuad& q, const BigInt& N) {
    BigInt g = gcd((q.W * q.Z).value(), N);
    if (g == 1) return {EcmStatus::NoFactor, 0};
    if (g < N) return {EcmStatus::FactorFound, g};
    for (const RingElement* part : {&q.W, &q.Z}) {
        BigInt h = gcd(part->value(), N);
        if (h > 1 && h < N) return {EcmStatus::FactorFound, h};
    }
    return {EcmStatus::TotalCollapse, 0};
}

std::vector<CurveAttempt> draw_attempts(const Modulus& N, std::uint64_t seed, std::size_t count) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(BigInt(static_cast<unsigned long>(seed)));
    const BigInt& n = N.value();
    std::vector<CurveAttempt> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BigInt b = 2 + BigInt(rng.get_z_range(BigInt(n - 3)));
        BigInt u5 = 1 + BigInt(rng.get_z_range(BigInt(n - 1)));
        out.push_back({N(b), N(u5)});
    }
    return out;
}

namespace {

void assert_sound(const EcmOutcome& out, const BigInt& N) {
    if (out.status != EcmStatus::FactorFound) return;
    if (!(out.factor > 1 && out.factor < N && mpz_divisible_p(N.get_mpz_t(), out.factor.get_mpz_t())))
        throw std::logic_error("unsound factor " + to_decimal(out.factor) + " of " + to_decimal(N));
}

CurveRecord run_chain(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain,
                      QuadArithmetic& ops, std::size_t interval) {
    CurveRecord rec;
    rec.b = attempt.b.value();
    rec.u5 = attempt.u5.value();
    RingParams params = attempt.params();
    bool stopped = false;
    auto observer = [&](std::size_t segment, const ProjQuad& q) {
        if (interval == 0 || segment % interval != 0) return true;
        GcdEvent ev = classify_quad(q, N.value());
        if (ev.status != EcmStatus::FactorFound) return true;
        rec.status = ev.status;
        rec.factor = ev.factor;
        rec.position = segment;
        stopped = true;
        return false;
    };
    rec.final_quad = chain_exec(chain, params, attempt.start(), rec.tally, &ops, observer);
    if (!stopped) {
        GcdEvent ev = classify_quad(rec.final_quad, N.value());
        rec.status = ev.status;
        rec.factor = ev.factor;
        rec.position = chain.tail.size();
    }
    return rec;
}

EcmOutcome outcome_of(CurveRecord rec, const BigInt& N) {
    EcmOutcome out;
    out.status = rec.status;
    out.factor = rec.factor;
    out.curve_index = rec.index;
    out.position = rec.position;
    out.total = rec.tally;
    out.curves.push_back(std::move(rec));
    assert_sound(out, N);
    return out;
}

CurveRecord run_attempt(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain,
                        QuadArithmetic& ops, std::size_t interval) {
    CurveRecord rec = run_chain(N, attempt, chain, ops, interval);
    if (rec.status == EcmStatus::TotalCollapse) {
        CurveRecord again = run_chain(N, attempt, chain, ops, 1);
        again.tally += rec.tally;
        again.backtracked = true;
        rec = std::move(again);
    }
    return rec;
}

}  // namespace

EcmOutcome stage1_single(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain, int lanes,
                         std::size_t gcd_interval) {
    QuadArithmetic ops(lanes);
    return outcome_of(run_chain(N, attempt, chain, ops, gcd_interval), N.value());
}

EcmOutcome stage1_single(const Modulus& N, const CurveAttempt& attempt, const BigInt& s, ChainMode mode,
                         int lanes) {
    return stage1_single(N, attempt, build_chain(s, mode), lanes, 0);
}

EcmOutcome backtrack(const Modulus& N, const CurveAttempt& attempt, const AdditionChain& chain, int lanes) {
    QuadArithmetic ops(lanes);
    CurveRecord rec = run_chain(N, attempt, chain, ops, 1);
    rec.backtracked = true;
    return outcome_of(std::move(rec), N.value());
}

EcmOutcome stage1_multi(const EcmConfig& config) {
    config.validate();
    Modulus N(config.N);
    AdditionChain chain = build_chain(config.resolved_scalar(), config.chain_mode);

    std::vector<CurveAttempt> attempts;
    if (config.b)
        attempts.push_back({N(*config.b), N(*config.u5)});
    else
        attempts = draw_attempts(N, config.seed, config.curve_count);

    const std::size_t count = attempts.size();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<CurveRecord> records(count);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{none};

    auto work = [&] {
        QuadArithmetic ops(config.lanes);
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count || i > best.load()) return;
            CurveRecord rec = run_attempt(N, attempts[i], chain, ops, config.gcd_interval);
            rec.index = i;
            bool found = rec.status == EcmStatus::FactorFound;
            records[i] = std::move(rec);
            if (found) {
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {}
            }
        }
    };

    int threads = std::max(1, std::min<int>(config.workers, static_cast<int>(count)));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(work);
        work();
    }

    EcmOutcome out;
    std::size_t last = best == none ? count : best + 1;
    out.curves.assign(std::make_move_iterator(records.begin()), std::make_move_iterator(records.begin() + last));
    for (const auto& rec : out.curves) out.total += rec.tally;
    if (best != none) {
        const CurveRecord& win = out.curves.back();
        out.status = EcmStatus::FactorFound;
        out.factor = win.factor;
        out.curve_index = win.index;
        out.position = win.position;
    } else {
        out.status = EcmStatus::NoFactor;
        out.curve_index = count;
    }
    assert_sound(out, config.N);
    return out;
}

}  // namespace lyness
