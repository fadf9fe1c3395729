#include <doctest.h>

#include <cmath>
#include <random>

#include "stokes/gammafn.hpp"
#include "stokes/interval.hpp"

using namespace stokes;

namespace {

double rand_double(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-12, 12);
    return std::ldexp(mant(rng), expo(rng));
}

RealInterval rand_interval(std::mt19937_64& rng) {
    const double a = rand_double(rng), b = rand_double(rng);
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

TEST_CASE("interval arithmetic basics") {
    RealInterval a(1.0, 2.0), b(3.0, 4.0);
    RealInterval p = a * b;
    CHECK(p.lo <= 3.0);
    CHECK(p.hi >= 8.0);
    CHECK(p.width() < 5.0 + 1e-12);

    RealInterval s = RealInterval(-1.0, 1.0) * RealInterval(-1.0, 1.0);
    CHECK(s.contains(-1.0));
    CHECK(s.contains(1.0));
    CHECK(s.hi < 1.0 + 1e-12);

    // enclosure of 1/3, width within 2 ulp
    RealInterval third = RealInterval(1.0) / RealInterval(3.0);
    const long double exact = 1.0L / 3.0L;
    CHECK(static_cast<long double>(third.lo) < exact);
    CHECK(static_cast<long double>(third.hi) > exact);
    CHECK(third.width() <= 2.0 * std::ldexp(1.0, -53));
}

TEST_CASE("interval division by zero throws") {
    CHECK_THROWS_AS(RealInterval(1.0) / RealInterval(-1.0, 1.0), DivisionByZeroInterval);
}

TEST_CASE("interval sqrt") {
    RealInterval r = iv_sqrt(RealInterval(4.0, 9.0));
    CHECK(r.lo <= 2.0);
    CHECK(r.hi >= 3.0);
    CHECK(r.width() < 1.0 + 1e-12);

    RealInterval z = iv_sqrt(RealInterval(0.0));
    CHECK(z.lo == 0.0);
    CHECK(z.hi == 0.0);

    RealInterval two = iv_sqrt(RealInterval(2.0));
    const long double s2 = sqrtl(2.0L);
    CHECK(static_cast<long double>(two.lo) <= s2);
    CHECK(static_cast<long double>(two.hi) >= s2);
    CHECK(two.width() <= 2.0 * std::ldexp(1.0, -52));

    CHECK_THROWS_AS(iv_sqrt(RealInterval(-1.0, 1.0)), NegativeArgument);
}

TEST_CASE("inclusion monotonicity on random boxes") {
    std::mt19937_64 rng(20240201);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int cases = 0; cases < 10000; ++cases) {
        RealInterval A = rand_interval(rng), B = rand_interval(rng);
        const double a1 = A.lo + ur(rng) * A.width(), a2 = A.lo + ur(rng) * A.width();
        const double b1 = B.lo + ur(rng) * B.width(), b2 = B.lo + ur(rng) * B.width();
        RealInterval As(std::min(a1, a2), std::max(a1, a2));
        RealInterval Bs(std::min(b1, b2), std::max(b1, b2));
        CHECK((A + B).contains(As + Bs));
        CHECK((A - B).contains(As - Bs));
        CHECK((A * B).contains(As * Bs));
        if (!B.contains_zero() && !Bs.contains_zero()) CHECK((A / B).contains(As / Bs));
    }
}

TEST_CASE("point containment against extended precision") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 100000; ++i) {
        const double a = rand_double(rng), b = rand_double(rng);
        const long double la = a, lb = b;
        RealInterval A(a), B(b);
        {
            RealInterval r = A + B;
            CHECK(static_cast<long double>(r.lo) <= la + lb);
            CHECK(static_cast<long double>(r.hi) >= la + lb);
        }
        {
            RealInterval r = A - B;
            CHECK(static_cast<long double>(r.lo) <= la - lb);
            CHECK(static_cast<long double>(r.hi) >= la - lb);
        }
        {
            RealInterval r = A * B;
            CHECK(static_cast<long double>(r.lo) <= la * lb);
            CHECK(static_cast<long double>(r.hi) >= la * lb);
        }
        if (b != 0.0) {
            RealInterval r = A / B;
            CHECK(static_cast<long double>(r.lo) <= la / lb);
            CHECK(static_cast<long double>(r.hi) >= la / lb);
        }
        if (a > 0.0) {
            RealInterval r = iv_sqrt(A);
            CHECK(static_cast<long double>(r.lo) <= sqrtl(la));
            CHECK(static_cast<long double>(r.hi) >= sqrtl(la));
            RealInterval c = iv_cbrt(A);
            CHECK(static_cast<long double>(c.lo) <= cbrtl(la));
            CHECK(static_cast<long double>(c.hi) >= cbrtl(la));
        }
    }
}

TEST_CASE("exp enclosure") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> ur(-20.0, 20.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = ur(rng);
        RealInterval e = iv_exp(RealInterval(x));
        const long double ex = expl(static_cast<long double>(x));
        CHECK(static_cast<long double>(e.lo) <= ex);
        CHECK(static_cast<long double>(e.hi) >= ex);
        CHECK(e.width() / e.lo < 1e-13);
    }
    RealInterval e0 = iv_exp(RealInterval(0.0));
    CHECK(e0.contains(1.0));
}

TEST_CASE("sin and cos on the sector range") {
    for (double x : {0.01, 0.1, 0.5, 0.714, 1.2, 1.5}) {
        RealInterval s = iv_sin_small(RealInterval(x));
        RealInterval c = iv_cos_small(RealInterval(x));
        CHECK(static_cast<long double>(s.lo) <= sinl(static_cast<long double>(x)));
        CHECK(static_cast<long double>(s.hi) >= sinl(static_cast<long double>(x)));
        CHECK(static_cast<long double>(c.lo) <= cosl(static_cast<long double>(x)));
        CHECK(static_cast<long double>(c.hi) >= cosl(static_cast<long double>(x)));
        CHECK(s.width() < 5e-15);
        CHECK(c.width() < 5e-15);
    }
}

TEST_CASE("rigorous gamma values") {
    // closed forms: Gamma(1) = Gamma(2) = 1, Gamma(3/2) = sqrt(pi)/2
    CHECK(gamma_rigorous(1.0).contains(1.0));
    CHECK(gamma_rigorous(2.0).contains(1.0));
    RealInterval g32 = gamma_rigorous(1.5);
    RealInterval ref = iv_sqrt_pi() / 2.0;
    CHECK(intersects(g32, ref));

    // recurrence consistency: Gamma(x+1) = x Gamma(x) on the twelfth grid
    for (int k = 7; k <= 30; ++k) {
        RealInterval lhs = gamma_twelfth(k + 12);
        RealInterval rhs = (RealInterval(k) / 12.0) * gamma_twelfth(k);
        CHECK(intersects(lhs, rhs));
    }

    // norm constants: G_3 = 1, G_2 = pi/2
    CHECK(g_norm_constant(3.0).contains(1.0));
    RealInterval g2 = g_norm_constant(2.0);
    CHECK(intersects(g2, iv_pi() / 2.0));
    CHECK(g2.width() < 1e-14);

    // the coefficient inside the first-iterate W-bound: eta = 17/3
    RealInterval g173 = g_norm_constant(17.0 / 3.0);
    CHECK(g173.lo > 0.0);
    CHECK(g173.contains(0.61186128232383458));

    // and the 17/6 argument stays finite and positive
    RealInterval g176 = g_norm_constant(17.0 / 6.0);
    CHECK(g176.lo > 0.0);
    CHECK(g176.hi < 10.0);

    CHECK_THROWS_AS(g_norm_constant(1.0), ExponentTooSmall);
}

TEST_CASE("pow3 on real intervals") {
    RealInterval x(8.0);
    RealInterval r = iv_pow3(x, 2); // 8^(2/3) = 4
    CHECK(r.contains(4.0));
    CHECK(r.width() < 1e-13);
    RealInterval rn = iv_pow3(x, -4); // 8^(-4/3) = 1/16
    CHECK(rn.contains(1.0 / 16.0));
}
