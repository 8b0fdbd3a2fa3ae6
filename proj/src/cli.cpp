#include "lyness/cli.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lyness/lanes.hpp"
#include "lyness/oracle.hpp"
#include "lyness/rational.hpp"
#include "lyness/weierstrass.hpp"

namespace lyness {

using nlohmann::json;

namespace {

json big(const BigInt& v) { return to_decimal(v); }
BigInt big(const json& j) { return parse_integer(j.get<std::string>()); }

json opt_big(const std::optional<BigInt>& v) { return v ? big(*v) : json(nullptr); }
std::optional<BigInt> opt_big(const json& j) {
    if (j.is_null()) return std::nullopt;
    return big(j);
}

}  // namespace

json tally_to_json(const CostTally& t) {
    return {{"M", t.m}, {"S", t.s}, {"C", t.c}, {"add", t.add},
            {"depth_M", t.depth_m}, {"depth_C", t.depth_c}, {"depth_free", t.depth_free}};
}

CostTally tally_from_json(const json& j) {
    CostTally t;
    t.m = j.at("M").get<std::uint64_t>();
    t.s = j.at("S").get<std::uint64_t>();
    t.c = j.at("C").get<std::uint64_t>();
    t.add = j.at("add").get<std::uint64_t>();
    t.depth_m = j.at("depth_M").get<std::uint64_t>();
    t.depth_c = j.at("depth_C").get<std::uint64_t>();
    t.depth_free = j.at("depth_free").get<std::uint64_t>();
    return t;
}

json RunReport::to_json() const {
    json cfg = {
        {"N", big(config.N)},
        {"B1", config.B1},
        {"scalar", opt_big(config.scalar)},
        {"curves", config.curve_count},
        {"seed", config.seed},
        {"chain_mode", std::string(chain_mode_name(config.chain_mode))},
        {"lanes", config.lanes},
        {"gcd_interval", config.gcd_interval},
        {"workers", config.workers},
        {"b", opt_big(config.b)},
        {"u5", opt_big(config.u5)},
    };
    json curves = json::array();
    for (const auto& rec : outcome.curves) {
        const ProjQuad& q = rec.final_quad;
        curves.push_back({
            {"index", rec.index},
            {"b", big(rec.b)},
            {"u5", big(rec.u5)},
            {"chain", chain},
            {"status", std::string(status_name(rec.status))},
            {"factor", big(rec.factor)},
            {"position", rec.position},
            {"backtracked", rec.backtracked},
            {"final", {big(q.X.value()), big(q.W.value()), big(q.Y.value()), big(q.Z.value())}},
            {"tally", tally_to_json(rec.tally)},
        });
    }
    return {
        {"version", version},
        {"invocation", invocation},
        {"config", cfg},
        {"chain", chain},
        {"curves", curves},
        {"outcome",
         {{"status", std::string(status_name(outcome.status))},
          {"factor", big(outcome.factor)},
          {"curve_index", outcome.curve_index},
          {"position", outcome.position},
          {"total", tally_to_json(outcome.total)}}},
        {"wall_ms", wall_ms},
    };
}

RunReport RunReport::from_json(const json& j) {
    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.invocation = j.at("invocation").get<std::vector<std::string>>();
    const json& cfg = j.at("config");
    r.config.N = big(cfg.at("N"));
    r.config.B1 = cfg.at("B1").get<unsigned long>();
    r.config.scalar = opt_big(cfg.at("scalar"));
    r.config.curve_count = cfg.at("curves").get<std::size_t>();
    r.config.seed = cfg.at("seed").get<std::uint64_t>();
    r.config.chain_mode = parse_chain_mode(cfg.at("chain_mode").get<std::string>());
    r.config.lanes = cfg.at("lanes").get<int>();
    r.config.gcd_interval = cfg.at("gcd_interval").get<std::size_t>();
    r.config.workers = cfg.at("workers").get<int>();
    r.config.b = opt_big(cfg.at("b"));
    r.config.u5 = opt_big(cfg.at("u5"));
    r.chain = j.at("chain").get<std::string>();

    if (r.config.N < 2) throw std::invalid_argument("report modulus must be at least 2");
    Modulus N(r.config.N);
    for (const json& c : j.at("curves")) {
        CurveRecord rec;
        rec.index = c.at("index").get<std::size_t>();
        rec.b = big(c.at("b"));
        rec.u5 = big(c.at("u5"));
        rec.status = parse_status(c.at("status").get<std::string>());
        rec.factor = big(c.at("factor"));
        rec.position = c.at("position").get<std::size_t>();
        rec.backtracked = c.at("backtracked").get<bool>();
        const json& f = c.at("final");
        if (!f.is_array() || f.size() != 4) throw std::invalid_argument("final quadruple needs four entries");
        rec.final_quad = {N(big(f[0])), N(big(f[1])), N(big(f[2])), N(big(f[3]))};
        rec.tally = tally_from_json(c.at("tally"));
        r.outcome.curves.push_back(std::move(rec));
    }
    const json& o = j.at("outcome");
    r.outcome.status = parse_status(o.at("status").get<std::string>());
    r.outcome.factor = big(o.at("factor"));
    r.outcome.curve_index = o.at("curve_index").get<std::size_t>();
    r.outcome.position = o.at("position").get<std::size_t>();
    r.outcome.total = tally_from_json(o.at("total"));
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

RunReport run_factor(const EcmConfig& config, std::vector<std::string> invocation) {
    RunReport report;
    report.invocation = std::move(invocation);
    report.config = config;
    auto t0 = std::chrono::steady_clock::now();
    report.outcome = stage1_multi(config);
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.chain = build_chain(config.resolved_scalar(), config.chain_mode).to_string();
    return report;
}

namespace {

const char* primality(const BigInt& v) { return is_probable_prime(v) ? "probable prime" : "composite"; }

}  // namespace

void print_report(const RunReport& r, std::ostream& out) {
    const EcmConfig& c = r.config;
    out << "N = " << to_decimal(c.N) << "\n";
    out << "s = " << to_decimal(c.resolved_scalar());
    if (!c.scalar) out << " (B1 = " << c.B1 << ")";
    out << "\nchain: " << r.chain << "  [" << chain_mode_name(c.chain_mode) << ", lanes " << c.lanes << "]\n";
    for (const auto& rec : r.outcome.curves) {
        out << "curve " << rec.index << ": b = " << to_decimal(rec.b) << ", u5 = " << to_decimal(rec.u5) << ", "
            << status_name(rec.status);
        if (rec.status == EcmStatus::FactorFound) out << " " << to_decimal(rec.factor) << " at segment " << rec.position;
        if (rec.backtracked) out << " (backtracked)";
        out << ", " << rec.tally.cost_string() << "\n";
    }
    out << "total " << r.outcome.total.cost_string() << ", " << std::fixed << std::setprecision(1) << r.wall_ms
        << " ms\n";
    out.unsetf(std::ios::fixed);
    if (r.outcome.status == EcmStatus::FactorFound) {
        BigInt g = r.outcome.factor;
        BigInt cof = c.N / g;
        out << "factor " << to_decimal(g) << " (" << primality(g) << ")\n";
        out << "cofactor " << to_decimal(cof) << " (" << primality(cof) << ")\n";
    } else {
        out << "no factor found with " << r.outcome.curves.size() << " curve(s)\n";
    }
}

int cmd_demo(std::ostream& out) {
    const BigInt n("3595474639");
    Modulus N(n);
    RingParams params = unit_a_params(N, 2);
    RingElement u5 = N(17);
    int bad = 0;
    auto check = [&](const std::string& label, const std::string& got, const std::string& want) {
        out << label << " = " << got;
        if (got != want) {
            out << "   MISMATCH, expected " << want;
            ++bad;
        }
        out << "\n";
    };

    out << "N = " << to_decimal(n) << ", a = 1, b = 2, u5 = 17\n";
    RingElement K = derive_K(params.a, params.b, u5);
    check("K", K.to_string(), "7");
    AdditionChain chain = build_chain(28, ChainMode::Signed);
    check("chain for s = 28", chain.to_string(), "4 D1 -1 D2");

    ProjQuad q = start_quad(params, u5);
    check("4P", q == ProjQuad{N(-2), N(1), N(17), N(1)} ? "(-2, 1, 17, 1)" : q.to_string(), "(-2, 1, 17, 1)");

    CostTally tally;
    q = proj_double(q, params, tally);
    check("8P", q.to_string(), "(3595467431, 43928, 80648, 3595455259)");
    q = proj_sub_P(q, params, tally);
    check("(X7, W7)", "(" + q.X.to_string() + ", " + q.W.to_string() + ")", "(2032516399, 3542705344)");
    q = proj_double(q, params, tally);
    check("14P", q.to_string(), "(160913035, 3261908647, 3049465821, 760206673)");
    q = proj_double(q, params, tally);
    check("28P", q.to_string(), "(558084862, 1754538456, 252369828, 1216214157)");
    check("tally", tally.cost_string(), "47M+4C");

    BigInt g28 = gcd(q.W.value(), n);
    BigInt g29 = gcd(q.Z.value(), n);
    check("gcd(W29, N)", to_decimal(g29), "6645979");
    check("cofactor", to_decimal(n / g28), "541");
    check("gcd", to_decimal(g28), "6645979");
    return bad == 0 ? 0 : 1;
}

namespace {

int cmd_convert(const std::string& A, const std::string& B, const std::string& nu, const std::string& xi,
                bool normalize, std::ostream& out, std::ostream& err) {
    WeierstrassCurve<Rational> curve{Rational::parse(A), Rational::parse(B)};
    MarkedPoint<Rational> mark{Rational::parse(nu), Rational::parse(xi)};
    if (!curve.nonsingular()) {
        err << "error: the cubic is singular (4A^3 + 27B^2 = 0)\n";
        return kExitUsage;
    }
    if (!on_curve(curve, WeierstrassPoint<Rational>{mark.nu, mark.xi})) {
        err << "error: (" << nu << ", " << xi << ") is not on y^2 = x^3 + (" << A << ")x + (" << B << ")\n";
        return kExitUsage;
    }
    if (mark.xi.is_zero()) {
        err << "error: the marked point must have xi != 0\n";
        return kExitUsage;
    }
    ConversionData<Rational> conv;
    try {
        conv = to_lyness(curve, mark);
    } catch (const CurveError& e) {
        if (e.kind() != CurveErrorKind::DegenerateConversion) throw;
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    }
    const auto& L = conv.lyness;
    const Rational& a = L.a;
    const Rational& b = L.b;
    const Rational& K = *L.K;
    out << "alpha = " << conv.alpha.to_string() << ", J = " << conv.J.to_string()
        << ", beta = " << conv.beta.to_string() << "\n";
    out << "a = " << a.to_string() << ", b = " << b.to_string() << ", K = " << K.to_string() << "\n";
    auto flag = [](bool ok) { return ok ? "ok" : "FAILED"; };
    out << "alpha^2 = K + a: " << flag(conv.alpha * conv.alpha == K + a) << "\n";
    out << "beta^3 = -(Ka + b): " << flag(pow(conv.beta, 3) == -(K * a + b)) << "\n";
    out << "beta J = -(K + 2a): " << flag(conv.beta * conv.J == -(K + 2 * a)) << "\n";
    if (normalize) {
        auto [norm, pt] = normalize_a(L, AffinePoint<Rational>::identity());
        out << "normalized: a = 1, b = " << norm.b.to_string() << ", K = " << norm.K->to_string() << "\n";
        try {
            out << "u5 = " << derive_u5(norm).to_string() << "\n";
        } catch (const CurveError& e) {
            out << "u5 undefined: " << e.what() << "\n";
        }
    }
    return 0;
}

int cmd_order(std::uint64_t p, std::uint64_t b, std::uint64_t u5, std::ostream& out, std::ostream& err) {
    SmallCurve c{p, b % (p ? p : 1), u5 % (p ? p : 1)};
    try {
        require_valid(c);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    RingParams prm = c.params();
    std::uint64_t ord = order_of_P(c).order;
    std::uint64_t ord2 = order_by_affine_orbit(c);
    out << "p = " << p << ", b = " << c.b << ", u5 = " << c.u5 << ", K = " << prm.K->to_string() << "\n";
    out << "ord(P) = " << ord << " (affine orbit: " << ord2 << ")\n";
    bool ok = ord == ord2;
    if (p <= 20000) {
        std::uint64_t n = count_points(p, 1, c.b, mpz_get_ui(prm.K->value().get_mpz_t()));
        out << "#E = " << n << ", ord | #E: " << (n % ord == 0 ? "yes" : "NO") << "\n";
        ok = ok && n % ord == 0;
    }
    return ok ? 0 : 1;
}

int cmd_bench(unsigned bits, unsigned reps, int lanes, std::ostream& out) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(12345);
    BigInt p;
    mpz_nextprime(p.get_mpz_t(), BigInt(rng.get_z_bits(bits)).get_mpz_t());
    Modulus N(p);
    auto rnd = [&] { return N(BigInt(rng.get_z_range(p))); };
    RingParams prm = unit_a_params(N, rnd().value());
    std::vector<ProjQuad> quads;
    for (unsigned i = 0; i < std::max(1u, reps); ++i) quads.push_back({rnd(), rnd(), rnd(), rnd()});

    int bad = 0;
    auto row = [&](const std::string& name, const std::string& got, const std::string& want) {
        out << std::left << std::setw(22) << name << std::setw(10) << got;
        if (got != want) {
            out << "expected " << want;
            ++bad;
        }
        out << "\n";
    };
    out << "modulus: " << bits << "-bit prime, " << quads.size() << " quadruples\n";
    CostTally t_add, t_sub, t_dbl;
    proj_add_P(quads[0], prm, t_add);
    proj_sub_P(quads[0], prm, t_sub);
    proj_double(quads[0], prm, t_dbl);
    row("add P", t_add.cost_string(), "2M+1C");
    row("subtract P", t_sub.cost_string(), "2M+1C");
    row("double", t_dbl.cost_string(), "15M+1C");
    CostTally d1, d2;
    run_lane_program(addition_program(), quads[0], prm, 1, d1);
    run_lane_program(doubling_program(), quads[0], prm, 1, d2);
    row("add program depth", d1.depth_string(), "1M+1C");
    row("double program depth", d2.depth_string(), "4M+1C");

    using clock = std::chrono::steady_clock;
    auto time_it = [&](auto&& fn) {
        auto t0 = clock::now();
        for (const auto& q : quads) fn(q);
        return std::chrono::duration<double, std::micro>(clock::now() - t0).count() / double(quads.size());
    };
    CostTally scratch;
    double seq_add = time_it([&](const ProjQuad& q) { proj_add_P(q, prm, scratch); });
    double seq_dbl = time_it([&](const ProjQuad& q) { proj_double(q, prm, scratch); });
    QuadArithmetic par(lanes);
    double par_add = time_it([&](const ProjQuad& q) { par.add_P(q, prm, scratch); });
    double par_dbl = time_it([&](const ProjQuad& q) { par.dbl(q, prm, scratch); });
    out << std::fixed << std::setprecision(3);
    out << "timing (us/op)         sequential  lanes=" << lanes << "\n";
    out << "  add P                " << std::setw(11) << seq_add << " " << par_add << "\n";
    out << "  double               " << std::setw(11) << seq_dbl << " " << par_dbl << "\n";
    out.unsetf(std::ios::fixed);
    return bad == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stage-1 ECM with Lyness curves", "lyness-ecm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string modulus;
    unsigned long B1 = 10000;
    std::string scalar, b_text, u5_text, mode = "signed";
    std::size_t curves = 50, gcd_interval = 0;
    std::uint64_t seed = 1;
    int lanes = 1, workers = 1;
    bool as_json = false;
    auto* factor = app.add_subcommand("factor", "run stage 1 on N");
    factor->add_option("--modulus,-N", modulus, "N, decimal or 0x hex")->required();
    factor->add_option("--b1", B1, "smoothness bound");
    factor->add_option("--scalar", scalar, "explicit scalar s instead of B1");
    factor->add_option("--curves", curves, "number of curves");
    factor->add_option("--seed", seed, "random seed");
    factor->add_option("--chain-mode", mode, "signed or addonly")->check(CLI::IsMember({"signed", "addonly"}));
    factor->add_option("--lanes", lanes, "doubling lanes: 1, 2 or 4")->check(CLI::IsMember({1, 2, 4}));
    factor->add_option("--gcd-interval", gcd_interval, "chain segments between gcds, 0 = end only");
    factor->add_option("--workers", workers, "concurrent curves")->check(CLI::PositiveNumber);
    factor->add_option("--b", b_text, "explicit curve parameter b");
    factor->add_option("--u5", u5_text, "explicit start ordinate u5");
    factor->add_flag("--json", as_json, "print the run report as one JSON line");

    auto* demo = app.add_subcommand("demo", "reproduce the N = 3595474639 worked example");

    std::string A, B, nu, xi;
    bool normalize = false;
    auto* convert = app.add_subcommand("convert", "Weierstrass cubic and point to Lyness parameters");
    convert->add_option("--A", A)->required();
    convert->add_option("--B", B)->required();
    convert->add_option("--nu", nu)->required();
    convert->add_option("--xi", xi)->required();
    convert->add_flag("--normalize", normalize, "also rescale to a = 1");

    std::uint64_t op = 0, ob = 0, ou5 = 0;
    auto* order = app.add_subcommand("order", "order of P over a small prime field");
    order->add_option("--p", op)->required();
    order->add_option("--b", ob)->required();
    order->add_option("--u5", ou5)->required();

    unsigned bits = 256, reps = 1000;
    int bench_lanes = 4;
    auto* bench = app.add_subcommand("bench", "operation counts and timings");
    bench->add_option("--bits", bits)->check(CLI::Range(8u, 8192u));
    bench->add_option("--reps", reps);
    bench->add_option("--lanes", bench_lanes)->check(CLI::IsMember({1, 2, 4}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*demo) return cmd_demo(out);
        if (*convert) return cmd_convert(A, B, nu, xi, normalize, out, err);
        if (*order) return cmd_order(op, ob, ou5, out, err);
        if (*bench) return cmd_bench(bits, reps, bench_lanes, out);

        EcmConfig config;
        config.N = parse_integer(modulus);
        config.B1 = B1;
        if (!scalar.empty()) config.scalar = parse_integer(scalar);
        if (!b_text.empty()) config.b = parse_integer(b_text);
        if (!u5_text.empty()) config.u5 = parse_integer(u5_text);
        config.curve_count = curves;
        config.seed = seed;
        config.chain_mode = parse_chain_mode(mode);
        config.lanes = lanes;
        config.gcd_interval = gcd_interval;
        config.workers = workers;
        config.validate();

        std::vector<std::string> invocation{"lyness-ecm"};
        invocation.insert(invocation.end(), args.begin(), args.end());
        RunReport report = run_factor(config, invocation);
        if (as_json)
            out << report.to_json().dump() << "\n";
        else
            print_report(report, out);
        return report.outcome.status == EcmStatus::FactorFound ? kExitFactor : kExitNoFactor;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace lyness
