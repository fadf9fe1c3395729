#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracles.hpp"
#include "stokes/extended.hpp"

using namespace stokes;
using extended::State;

namespace {

double rel_err(const Cplx& a, const Cplx& b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

// a random state with no consistency constraints at all
State<Cplx> random_free_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    State<Cplx> s;
    s.U = Cplx(-3.0 + ur(rng), 5.0 * ur(rng));
    s.W = 0.1 * Cplx(ur(rng), ur(rng));
    s.X = 0.3 * Cplx(ur(rng), ur(rng));
    s.Y = 0.3 * Cplx(ur(rng), ur(rng));
    s.A = Cplx(1.0 + 0.2 * ur(rng), 0.2 * ur(rng));
    s.B = Cplx(0.5 + 0.3 * ur(rng), 0.4 * ur(rng));
    if (std::abs(s.B) < 0.1) s.B = Cplx(0.4, 0.2);
    return s;
}

} // namespace

TEST_CASE("lift at the tail anchor") {
    const Cplx U0(-2000.0, -7.12);
    State<Cplx> s = extended::lift(U0, inner::State<Cplx>{});
    // J(U0, 0) = 16/(81 U0^2) ~ 5e-8, so A ~ 1 within 1e-7
    CHECK(std::abs(s.A - 1.0) < 1e-7);
    CHECK(std::fabs(std::abs(s.B) - std::pow(std::abs(U0), -1.0 / 3.0)) < 1e-12);
    // round trip: B^{-3} recovers U
    CHECK(rel_err(cbox_inv_pow(s.B, 3), U0) < 1e-12);

    // box mode: lifting the certified-ball-sized box keeps A narrow
    ComplexBox U0b(U0);
    const double rw = 1.1e-9, rxy = 2.8e-5;
    inner::State<ComplexBox> Zb{
        ComplexBox(RealInterval(-rw, rw), RealInterval(-rw, rw)),
        ComplexBox(RealInterval(-rxy, rxy), RealInterval(-rxy, rxy)),
        ComplexBox(RealInterval(-rxy, rxy), RealInterval(-rxy, rxy))};
    State<ComplexBox> sb = extended::lift(U0b, Zb);
    CHECK(sb.A.contains(s.A));
    CHECK(sb.A.width() <= 2.5e-6);
    CHECK(cbox_inv_pow(sb.B, 3).contains(U0));
}

TEST_CASE("Ktilde values and partials") {
    // zero at (W = 0, A = 1)
    auto k0 = extended::eval_Ktilde(Cplx(0.0), Cplx(1.0), Cplx(0.3, -0.8));
    CHECK(std::abs(k0.value) < 1e-15);
    // dKtilde/dA = -B^2/3 exactly
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        State<Cplx> s = random_free_state(rng);
        auto k = extended::eval_Ktilde(s.W, s.A, s.B);
        CHECK(rel_err(k.dA, -s.B * s.B / 3.0) < 1e-14);
        // finite differences on dW, dB
        auto fW = [&](const Cplx& w) { return extended::eval_Ktilde(w, s.A, s.B).value; };
        auto fB = [&](const Cplx& b) { return extended::eval_Ktilde(s.W, s.A, b).value; };
        CHECK(rel_err(k.dW, oracles::fd_derivative(fW, s.W, Cplx(1.0))) < 1e-6);
        CHECK(rel_err(k.dB, oracles::fd_derivative(fB, s.B, Cplx(1.0))) < 1e-6);
    }
}

TEST_CASE("Ktilde equals K on consistent states") {
    oracles::DomainSampler ds(21);
    for (int i = 0; i < 100; ++i) {
        const Cplx U = ds.sample_U(30.0);
        inner::State<Cplx> Z = ds.sample_Z(U);
        State<Cplx> s = extended::lift(U, Z);
        auto kt = extended::eval_Ktilde(s.W, s.A, s.B);
        inner::UPow<Cplx> up(U);
        const Cplx K = inner::eval_K(up, Z);
        CHECK(rel_err(kt.value, K) < 8e-12); // the A-route loses ~2 digits to the (A-1) cancellation
    }
}

TEST_CASE("Jtilde: polynomial values and partials") {
    // (0, 0, 0, B) -> (16/81) B^6
    const Cplx B(0.4, -0.6);
    auto j0 = extended::eval_Jtilde(Cplx(0.0), Cplx(0.0), Cplx(0.0), B);
    const Cplx b2 = B * B;
    CHECK(rel_err(j0.value, (16.0 / 81.0) * b2 * b2 * b2) < 1e-14);

    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        State<Cplx> s = random_free_state(rng);
        auto j = extended::eval_Jtilde(s.W, s.X, s.Y, s.B);
        auto fX = [&](const Cplx& x) { return extended::eval_Jtilde(s.W, x, s.Y, s.B).value; };
        auto fB = [&](const Cplx& b) { return extended::eval_Jtilde(s.W, s.X, s.Y, b).value; };
        auto fW = [&](const Cplx& w) { return extended::eval_Jtilde(w, s.X, s.Y, s.B).value; };
        auto fY = [&](const Cplx& y) { return extended::eval_Jtilde(s.W, s.X, y, s.B).value; };
        CHECK(rel_err(j.dX, oracles::fd_derivative(fX, s.X, Cplx(1.0))) < 1e-7);
        CHECK(rel_err(j.dY, oracles::fd_derivative(fY, s.Y, Cplx(1.0))) < 1e-7);
        CHECK(rel_err(j.dW, oracles::fd_derivative(fW, s.W, Cplx(1.0))) < 1e-7);
        CHECK(rel_err(j.dB, oracles::fd_derivative(fB, s.B, Cplx(1.0))) < 1e-7);
    }
}

TEST_CASE("Jtilde equals J on consistent states") {
    oracles::DomainSampler ds(41);
    for (int i = 0; i < 100; ++i) {
        const Cplx U = ds.sample_U(30.0);
        inner::State<Cplx> Z = ds.sample_Z(U);
        State<Cplx> s = extended::lift(U, Z);
        auto jt = extended::eval_Jtilde(s.W, s.X, s.Y, s.B);
        const Cplx J = inner::eval_J(U, Z);
        CHECK(rel_err(jt.value, J) < 1e-12);
    }
}

TEST_CASE("extended field matches the inner field on consistent states") {
    oracles::DomainSampler ds(51);
    for (int i = 0; i < 1000; ++i) {
        const Cplx U = ds.sample_U(30.0);
        inner::State<Cplx> Z = ds.sample_Z(U);
        State<Cplx> s = extended::lift(U, Z);
        auto dF = extended::eval_F(s);
        auto f = inner::eval_field(U, Z);
        CHECK(rel_err(dF.U, f.dU) < 1e-11);
        CHECK(std::abs(dF.W - f.dZ.W) < 1e-11 * std::max(1.0, std::abs(f.dZ.W)));
        CHECK(rel_err(dF.X, f.dZ.X) < 1e-11);
        CHECK(rel_err(dF.Y, f.dZ.Y) < 1e-11);
    }
}

TEST_CASE("dU at Z = 0 on consistent states") {
    oracles::DomainSampler ds(61);
    for (int i = 0; i < 50; ++i) {
        const Cplx U = ds.sample_U(30.0);
        State<Cplx> s = extended::lift(U, inner::State<Cplx>{});
        auto dF = extended::eval_F(s);
        const Cplx J0 = 16.0 / (81.0 * U * U);
        const Cplx sq = std::sqrt(1.0 + J0);
        const Cplx g = -J0 / (2.0 * sq * sq * sq);
        CHECK(rel_err(dF.U, 1.0 + g) < 1e-12);
    }
}

TEST_CASE("reversing symmetry") {
    std::mt19937_64 rng(71);
    // involution
    for (int i = 0; i < 100; ++i) {
        State<Cplx> s = random_free_state(rng);
        State<Cplx> ss = extended::apply_S(extended::apply_S(s));
        CHECK(std::abs(ss.U - s.U) < 1e-15);
        CHECK(std::abs(ss.B - s.B) < 1e-15);
    }
    // purely imaginary U is fixed in the U slot
    State<Cplx> p = random_free_state(rng);
    p.U = Cplx(0.0, -3.7);
    CHECK(std::abs(extended::apply_S(p).U - p.U) < 1e-15);

    // S o F = -F o S on 1000 random states
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        State<Cplx> s = random_free_state(rng);
        auto lhs = extended::apply_S(extended::eval_F(s));
        auto rhs = extended::eval_F(extended::apply_S(s));
        for (auto [a, b] : {std::pair{lhs.U, rhs.U}, {lhs.W, rhs.W}, {lhs.X, rhs.X},
                            {lhs.Y, rhs.Y}, {lhs.A, rhs.A}, {lhs.B, rhs.B}})
            worst = std::max(worst, std::abs(a + b));
    }
    CHECK(worst <= 1e-12);

    // at an S-fixed point the field is S-antisymmetric componentwise
    State<Cplx> fx;
    fx.U = Cplx(0.0, -2.5);
    fx.W = Cplx(0.37, 0.0);
    fx.X = Cplx(0.0, 0.21);
    fx.Y = Cplx(0.0, -0.11);
    fx.A = Cplx(1.05, 0.0);
    fx.B = Cplx(0.0, 0.8);
    {
        State<Cplx> chk = extended::apply_S(fx);
        REQUIRE(std::abs(chk.U - fx.U) < 1e-15);
        REQUIRE(std::abs(chk.W - fx.W) < 1e-15);
        REQUIRE(std::abs(chk.X - fx.X) < 1e-15);
        REQUIRE(std::abs(chk.B - fx.B) < 1e-15);
    }
    auto f = extended::eval_F(fx);
    auto sf = extended::apply_S(f);
    CHECK(std::abs(sf.U + f.U) < 1e-13);
    CHECK(std::abs(sf.W + f.W) < 1e-13);
    CHECK(std::abs(sf.X + f.X) < 1e-13);
    CHECK(std::abs(sf.Y + f.Y) < 1e-13);
    CHECK(std::abs(sf.A + f.A) < 1e-13);
    CHECK(std::abs(sf.B + f.B) < 1e-13);
}

TEST_CASE("the field never reads U") {
    std::mt19937_64 rng(81);
    for (int i = 0; i < 200; ++i) {
        State<Cplx> s = random_free_state(rng);
        State<Cplx> s2 = s;
        s2.U = Cplx(123.456, -789.0);
        auto f1 = extended::eval_F(s);
        auto f2 = extended::eval_F(s2);
        // bit-identical outputs on every non-U component and on dU itself
        CHECK(std::memcmp(&f1.W, &f2.W, sizeof(Cplx)) == 0);
        CHECK(std::memcmp(&f1.X, &f2.X, sizeof(Cplx)) == 0);
        CHECK(std::memcmp(&f1.Y, &f2.Y, sizeof(Cplx)) == 0);
        CHECK(std::memcmp(&f1.A, &f2.A, sizeof(Cplx)) == 0);
        CHECK(std::memcmp(&f1.B, &f2.B, sizeof(Cplx)) == 0);
        CHECK(std::memcmp(&f1.U, &f2.U, sizeof(Cplx)) == 0);
    }
}

TEST_CASE("splitting bound from the symmetry") {
    // purely imaginary Y: no splitting information
    {
        auto [dy, low] = extended::stable_from_unstable(Cplx(0.0, 0.123));
        CHECK(std::abs(dy) == 0.0);
        CHECK(low == 0.0);
    }
    // the midpoint of the target window
    {
        auto [dy, low] = extended::stable_from_unstable(Cplx(-0.000625, 0.004));
        CHECK(dy.real() == doctest::Approx(-0.00125));
        CHECK(low == doctest::Approx(0.00125));
    }
    // invariant under purely imaginary perturbations
    {
        auto [dy1, l1] = extended::stable_from_unstable(Cplx(-0.0007, 0.1));
        auto [dy2, l2] = extended::stable_from_unstable(Cplx(-0.0007, -3.5));
        CHECK(dy1 == dy2);
        CHECK(l1 == l2);
    }
    // box variant gives a rigorous lower bound
    {
        ComplexBox Y(RealInterval(-0.0007, -0.0006), RealInterval(0.0, 0.1));
        auto [dy, low] = extended::stable_from_unstable(Y);
        CHECK(low.lo >= 0.0012 - 1e-12);
        CHECK(dy.re.contains(-0.0013));
    }
}
