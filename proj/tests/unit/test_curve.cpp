#include <doctest.h>

#include "lyness/curve.hpp"
#include "support.hpp"

using namespace lyness;

namespace {

using Q = Rational;
using QParams = LynessParams<Q>;
using QPoint = AffinePoint<Q>;

Q q(long n, long d = 1) { return Q(BigInt(n), BigInt(d)); }
QPoint pt(Q x, Q y) { return QPoint::finite(std::move(x), std::move(y)); }

using RPoint = AffinePoint<RingElement>;

}  // namespace

TEST_CASE("eval_K examples") {
    CHECK(eval_K(QParams{1, 2, {}}, pt(-2, 17)) == 7);
    CHECK(eval_K(QParams{1, 2, {}}, pt(2, 2)) == q(23, 2));
    CHECK_THROWS_AS(eval_K(QParams{1, 2, {}}, pt(0, 5)), CurveError);
}

TEST_CASE("integer points on xy(x+y) - 5(x+y)^2 + 54(x+y) - 145 = 6xy") {
    // integer points straight from the curve equation
    int found = 0;
    for (long x = -20; x <= 20; ++x) {
        for (long y = -20; y <= 20; ++y) {
            long s = x + y;
            if (x == 0 || y == 0) continue;
            if (x * y * s - 5 * s * s + 54 * s - 145 != 6 * x * y) continue;
            ++found;
            CHECK(eval_K(QParams{-5, 29, {}}, pt(x, y)) == 6);
        }
    }
    CHECK(found > 0);
    CHECK(eval_K(QParams{-5, 29, {}}, pt(4, 3)) == 6);
}

TEST_CASE("derive_u5 and derive_K") {
    CHECK(derive_u5(QParams{1, 2, Q(7)}) == 17);
    CHECK(derive_u5(QParams{1, 2, q(23, 2)}) == 26);
    CHECK(eval_K(QParams{1, 2, {}}, pt(-2, 26)) == q(23, 2));
    CHECK(derive_u5(QParams{1, -1, Q(0)}) == q(-3, 2));
    CHECK_THROWS_AS(derive_u5(QParams{2, 4, Q(1)}), CurveError);

    CHECK(derive_K(Q(1), Q(2), Q(17)) == 7);
    CHECK(derive_K(Q(1), Q(2), Q(26)) == q(23, 2));
    try {
        derive_K(Q(1), Q(0), Q(3));
        FAIL("expected an error");
    } catch (const CurveError& e) {
        CHECK(e.kind() == CurveErrorKind::DegenerateCurve);
    }

    for (int i = 0; i < 200; ++i) {
        Q a = testing::random_rational(), b = testing::random_rational(), K = testing::random_rational();
        if (a.is_zero() || b.is_zero() || a * a == b) continue;
        Q u5 = derive_u5(QParams{a, b, K});
        CHECK(derive_K(a, b, u5) == K);
        // 4P = (-b/a, u5) lies on the fibre K
        CHECK(on_curve(QParams{a, b, K}, pt(-b / a, u5)));
    }
}

TEST_CASE("affine_step and affine_inverse") {
    QParams p{1, 2, {}};
    CHECK(affine_step(p, pt(-2, 17)) == pt(17, q(-19, 2)));
    CHECK(affine_step(p, pt(-1, 0)) == pt(0, -2));
    CHECK(affine_inverse(p, pt(17, q(-19, 2))) == pt(-2, 17));
    CHECK(affine_inverse(p, pt(0, -2)) == pt(-1, 0));
    CHECK_THROWS_AS(affine_step(p, pt(0, -2)), CurveError);
    CHECK_THROWS_AS(affine_inverse(p, pt(-1, 0)), CurveError);

    QParams five{1, 1, {}};
    QPoint z = pt(3, 4);
    for (int i = 0; i < 5; ++i) z = affine_step(five, z);
    CHECK(z == pt(3, 4));

    for (int i = 0; i < 100; ++i) {
        QParams r{testing::random_rational(), testing::random_rational(), {}};
        QPoint s = pt(testing::random_rational(), testing::random_rational());
        if (!s.x->is_zero() && !s.y->is_zero()) {
            CHECK(affine_inverse(r, affine_step(r, s)) == s);
            CHECK(affine_step(r, affine_inverse(r, s)) == s);
        }
    }
}

TEST_CASE("affine_double worked point") {
    QParams p{1, 2, {}};
    QPoint d = affine_double(p, pt(-2, 17));
    CHECK(d == pt(q(-53, 323), q(-1186, 285)));
    // 8P by four Lyness steps from 4P
    QPoint w = pt(-2, 17);
    for (int i = 0; i < 4; ++i) w = affine_step(p, w);
    CHECK(w == d);
    CHECK(detail::doubling_rational(p.a, p.b, Q(-2), Q(17)) == q(-53, 323));
    CHECK(eval_K(p, d) == 7);
    CHECK_THROWS_AS(affine_double(p, pt(5, 5)), CurveError);
}

TEST_CASE("affine_add") {
    QParams p{1, 2, Q(7)};
    QPoint p4 = pt(-2, 17);
    QPoint p5 = affine_step(p, p4);
    CHECK(p5 == pt(17, q(-19, 2)));
    QPoint p9 = p4;
    for (int i = 0; i < 5; ++i) p9 = affine_step(p, p9);
    CHECK(affine_add(p, p4, p5) == p9);
    CHECK(affine_add(p, p5, p4) == p9);
    CHECK(on_curve(p, p9));

    // symmetry and involution compatibility on random points of random fibres
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        QParams r{testing::random_rational(), testing::random_rational(), {}};
        if (r.a.is_zero()) continue;
        QPoint s = pt(testing::random_rational(), testing::random_rational());
        if (s.x->is_zero() || s.y->is_zero() || (r.a * *s.y + r.b).is_zero()) continue;
        r.K = eval_K(r, s);
        QPoint t = affine_double(r, s);
        try {
            QPoint u = affine_add(r, s, t);
            CHECK(affine_add(r, t, s) == u);
            CHECK(involution(u) == affine_add(r, involution(s), involution(t)));
            CHECK(on_curve(r, u));
            ++checked;
        } catch (const CurveError&) {
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("base points") {
    QParams p{1, 2, {}};
    auto bp = base_points(p);
    auto find = [&](int m) {
        for (const auto& b : bp)
            if (b.multiple == m) return b.point;
        FAIL("missing base point");
        return QPoint{};
    };
    CHECK(find(0) == QPoint::identity());
    CHECK(find(3) == pt(0, -2));
    CHECK(find(2) == pt(-1, 0));
    CHECK(find(-2) == pt(0, -1));
    CHECK(find(-3) == pt(-2, 0));
    CHECK(find(1) == QPoint{std::nullopt, Q(-1)});
    CHECK(find(-1) == QPoint{Q(-1), std::nullopt});

    // every base point lies on every fibre
    for (int i = 0; i < 20; ++i) {
        QParams r{testing::random_rational(), testing::random_rational(), testing::random_rational()};
        if (r.a.is_zero()) continue;
        for (const auto& b : base_points(r)) CHECK(on_curve(r, b.point));
    }
}

TEST_CASE("curve invariants and five-periodicity") {
    auto singular = curve_invariants(QParams{1, 2, q(23, 2)});
    CHECK(singular.singular_factor.is_zero());
    CHECK(singular.singular());
    CHECK_FALSE(singular.j.has_value());

    auto worked = curve_invariants(QParams{1, 2, Q(7)});
    CHECK_FALSE(worked.singular_factor.is_zero());
    CHECK(worked.j.has_value());

    CHECK(is_five_periodic(QParams{1, 1, {}}));
    CHECK_FALSE(is_five_periodic(QParams{1, 2, {}}));
    CHECK(is_five_periodic(QParams{2, 4, {}}));
}

TEST_CASE("invariants over random 64-bit primes") {
    int steps = 0, inverses = 0, doubles = 0, jac = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Modulus F(testing::random_prime_64());
        auto rnd = [&] { return F(testing::random_below(F.value())); };
        LynessParams<RingElement> p{rnd(), rnd(), std::nullopt};
        RPoint s = RPoint::finite(rnd(), rnd());
        if (p.a.is_zero() || s.x->is_zero() || s.y->is_zero()) continue;
        RingElement K = eval_K(p, s);

        RPoint f = affine_step(p, s);
        if (!f.y->is_zero()) {
            CHECK(eval_K(p, f) == K);
            ++steps;
        }
        RPoint g = affine_inverse(p, s);
        if (!g.x->is_zero()) {
            CHECK(eval_K(p, g) == K);
            ++inverses;
        }
        RPoint d = affine_double(p, s);
        if (!d.x->is_zero() && !d.y->is_zero()) {
            CHECK(eval_K(p, d) == K);
            ++doubles;
        }
        CHECK(step_jacobian(p, s) * (*s.x * *s.y) == *f.x * *f.y);
        ++jac;
    }
    CHECK(steps > 350);
    CHECK(inverses > 350);
    CHECK(doubles > 350);
    CHECK(jac > 350);
}

TEST_CASE("five-cycle for b = a^2 over random primes") {
    int done = 0;
    while (done < 200) {
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
        CHECK(z == s);
        ++done;
    }
}

TEST_CASE("affine_double(nP) = 2nP by stepping over F_p") {
    for (std::uint64_t p : {101ULL, 103ULL, 1009ULL}) {
        Modulus F(testing::big_u64(p));
        LynessParams<RingElement> prm{F(1), F(2), F(7)};
        std::vector<RPoint> orbit{RPoint::finite(F(-2), F(17))};  // 4P, 5P, ...
        for (int i = 0; i < 60; ++i) {
            try {
                orbit.push_back(affine_step(prm, orbit.back()));
            } catch (const CurveError&) {
                break;
            }
        }
        int compared = 0;
        for (std::size_t n = 4; 2 * n - 4 < orbit.size(); ++n) {
            try {
                CHECK(affine_double(prm, orbit[n - 4]) == orbit[2 * n - 4]);
                ++compared;
            } catch (const CurveError&) {
            }
        }
        CHECK(compared > 0);
    }
}

TEST_CASE("non-invertible denominators over Z/NZ expose the factor") {
    Modulus N(BigInt("3595474639"));
    LynessParams<RingElement> p{N(1), N(2), std::nullopt};
    RPoint s = RPoint::finite(N(6645979 * 3L), N(5));
    try {
        affine_step(p, s);
        FAIL("expected NonInvertibleError");
    } catch (const NonInvertibleError& e) {
        CHECK(e.gcd() == 6645979);
    }
}
