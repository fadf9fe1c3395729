#pragma once

#include <array>

#include "stokes/cbox.hpp"

// The inner system on the graph variables Z = (W, X, Y) over the complex
// base point U: the coupling function J, the Hamiltonian correction K, the
// vector field, and the graph remainder R with its Jacobian.  Everything is
// templated over the scalar: Cplx for point arithmetic, ComplexBox for
// rigorous enclosures.
namespace stokes::inner {

template <class S>
struct State {
    S W{}, X{}, Y{};
};

template <class S>
struct FieldValue {
    S dU{};
    State<S> dZ{};
};

// Rows: components of R; columns: d/dW, d/dX, d/dY.
template <class S>
using Jacobian = std::array<std::array<S, 3>, 3>;

// Fractional powers U^{m/3}, all derived from the single branch value
// U^{-1/3} (cut on [0, +inf), arg U in (0, 2pi)).  One branch decision,
// consistent across every formula.
template <class S>
struct UPow {
    std::array<S, 10> neg; // neg[k] = U^{-k/3}
    S pos1, pos2;          // U^{1/3}, U^{2/3}

    explicit UPow(const S& U) {
        neg[0] = S(1.0);
        neg[1] = cbox_cuberoot_upper(U);
        for (int k = 2; k < 10; ++k) neg[k] = neg[k - 1] * neg[1];
        pos1 = inv(neg[1]);
        pos2 = inv(neg[2]);
    }

    // U^{m/3} for m in [-9, 2]
    const S& p(int m) const {
        if (m <= 0) return neg[static_cast<size_t>(-m)];
        return m == 1 ? pos1 : pos2;
    }
};

template <class S>
S eval_J(const UPow<S>& u, const State<S>& Z) {
    const S& W = Z.W;
    const S& X = Z.X;
    const S& Y = Z.Y;
    return (4.0 / 9.0) * W * W * u.p(-2) - (16.0 / 27.0) * W * u.p(-4) + (16.0 / 81.0) * u.p(-6)
         + (4.0 / 9.0) * (X + Y) * u.p(-3) * (W - (2.0 / 3.0) * u.p(-2))
         - (4.0 / 3.0) * mul_i(X - Y) * u.p(-2)
         - (1.0 / 3.0) * (X * X + Y * Y) * u.p(-4) + (10.0 / 9.0) * X * Y * u.p(-4);
}

template <class S>
S eval_J(const S& U, const State<S>& Z) {
    return eval_J(UPow<S>(U), Z);
}

template <class S>
struct JDerivs {
    S J{};
    S dU{}, dW{}, dX{}, dY{};
    S dUW{}, dUX{}, dUY{}, dWW{}, dWX{}, dWY{}, dXX{}, dXY{}, dYY{};
};

template <class S>
JDerivs<S> eval_J_derivs(const UPow<S>& u, const State<S>& Z) {
    const S& W = Z.W;
    const S& X = Z.X;
    const S& Y = Z.Y;
    JDerivs<S> d;
    d.J = eval_J(u, Z);
    d.dU = -(8.0 / 27.0) * W * W * u.p(-5) + (64.0 / 81.0) * W * u.p(-7) - (32.0 / 81.0) * u.p(-9)
         - (4.0 / 9.0) * (X + Y) * W * u.p(-6) + (40.0 / 81.0) * (X + Y) * u.p(-8)
         + (8.0 / 9.0) * mul_i(X - Y) * u.p(-5)
         + (4.0 / 9.0) * (X * X + Y * Y) * u.p(-7) - (40.0 / 27.0) * X * Y * u.p(-7);
    d.dW = (8.0 / 9.0) * W * u.p(-2) - (16.0 / 27.0) * u.p(-4) + (4.0 / 9.0) * (X + Y) * u.p(-3);
    d.dX = (4.0 / 9.0) * W * u.p(-3) - (8.0 / 27.0) * u.p(-5) - (4.0 / 3.0) * mul_i(S(1.0)) * u.p(-2)
         - (2.0 / 3.0) * X * u.p(-4) + (10.0 / 9.0) * Y * u.p(-4);
    d.dY = (4.0 / 9.0) * W * u.p(-3) - (8.0 / 27.0) * u.p(-5) + (4.0 / 3.0) * mul_i(S(1.0)) * u.p(-2)
         - (2.0 / 3.0) * Y * u.p(-4) + (10.0 / 9.0) * X * u.p(-4);
    d.dUW = -(16.0 / 27.0) * W * u.p(-5) + (64.0 / 81.0) * u.p(-7) - (4.0 / 9.0) * (X + Y) * u.p(-6);
    d.dUX = -(4.0 / 9.0) * W * u.p(-6) + (40.0 / 81.0) * u.p(-8) + (8.0 / 9.0) * mul_i(S(1.0)) * u.p(-5)
          + (8.0 / 9.0) * X * u.p(-7) - (40.0 / 27.0) * Y * u.p(-7);
    d.dUY = -(4.0 / 9.0) * W * u.p(-6) + (40.0 / 81.0) * u.p(-8) - (8.0 / 9.0) * mul_i(S(1.0)) * u.p(-5)
          + (8.0 / 9.0) * Y * u.p(-7) - (40.0 / 27.0) * X * u.p(-7);
    d.dWW = (8.0 / 9.0) * u.p(-2);
    d.dWX = (4.0 / 9.0) * u.p(-3);
    d.dWY = d.dWX;
    d.dXX = -(2.0 / 3.0) * u.p(-4);
    d.dYY = d.dXX;
    d.dXY = (10.0 / 9.0) * u.p(-4);
    return d;
}

template <class S>
JDerivs<S> eval_J_derivs(const S& U, const State<S>& Z) {
    return eval_J_derivs(UPow<S>(U), Z);
}

template <class S>
struct KDerivs {
    S J{};
    S dU{}, dW{}, dX{}, dY{};
    S dUW{}, dUX{}, dUY{}, dWW{}, dWX{}, dWY{}, dXX{}, dXY{}, dYY{};
    S dU_raw{}; // first (cancelling) form of dU, kept for cross-checks
};

// All first and second partial derivatives of K.  dU uses the
// cancellation-free form J / (sqrt(1+J)(1+sqrt(1+J))): the raw form
// subtracts O(1) quantities in the tail and loses the 1e-12 accuracy there.
template <class S>
KDerivs<S> eval_K_derivs(const UPow<S>& u, const State<S>& Z) {
    const JDerivs<S> j = eval_J_derivs(u, Z);
    const S onepJ = S(1.0) + j.J;
    const S sq = cbox_sqrt_principal(onepJ);
    const S invS = inv(sq);
    const S invS3 = invS * invS * invS;
    const S invS5 = invS3 * invS * invS;
    const S& W = Z.W;

    KDerivs<S> k;
    k.J = j.J;
    const S c16 = (1.0 / 6.0) * u.p(-2);
    const S c14 = (1.0 / 4.0) * u.p(-2);
    k.dU = -0.5 * W * W * u.p(-1)
         - (2.0 / 9.0) * u.p(-5) * j.J * inv(sq * (S(1.0) + sq))
         + c16 * j.dU * invS3;
    k.dU_raw = -0.5 * W * W * u.p(-1)
             + (2.0 / 9.0) * u.p(-5) * (invS - S(1.0))
             + c16 * j.dU * invS3;
    k.dW = -1.5 * u.pos2 * W + c16 * j.dW * invS3;
    k.dX = c16 * j.dX * invS3;
    k.dY = c16 * j.dY * invS3;
    k.dUW = -W * u.p(-1) - (1.0 / 9.0) * u.p(-5) * j.dW * invS3 + c16 * j.dUW * invS3
          - c14 * j.dU * j.dW * invS5;
    k.dUX = -(1.0 / 9.0) * u.p(-5) * j.dX * invS3 + c16 * j.dUX * invS3
          - c14 * j.dU * j.dX * invS5;
    k.dUY = -(1.0 / 9.0) * u.p(-5) * j.dY * invS3 + c16 * j.dUY * invS3
          - c14 * j.dU * j.dY * invS5;
    k.dWW = -1.5 * u.pos2 + c16 * j.dWW * invS3 - c14 * j.dW * j.dW * invS5;
    k.dWX = c16 * j.dWX * invS3 - c14 * j.dW * j.dX * invS5;
    k.dWY = c16 * j.dWY * invS3 - c14 * j.dW * j.dY * invS5;
    k.dXX = c16 * j.dXX * invS3 - c14 * j.dX * j.dX * invS5;
    k.dXY = c16 * j.dXY * invS3 - c14 * j.dX * j.dY * invS5;
    k.dYY = c16 * j.dYY * invS3 - c14 * j.dY * j.dY * invS5;
    return k;
}

template <class S>
KDerivs<S> eval_K_derivs(const S& U, const State<S>& Z) {
    return eval_K_derivs(UPow<S>(U), Z);
}

template <class S>
S eval_K(const UPow<S>& u, const State<S>& Z) {
    const S J = eval_J(u, Z);
    const S sq = cbox_sqrt_principal(S(1.0) + J);
    return -0.75 * u.pos2 * Z.W * Z.W
         + (1.0 / 3.0) * u.p(-2) * J * inv(sq * (S(1.0) + sq));
}

template <class S>
S hamiltonian(const S& U, const State<S>& Z) {
    UPow<S> u(U);
    return Z.W + Z.X * Z.Y + eval_K(u, Z);
}

// dU = 1 + dK/dW;  dZ = A Z + (-dK/dU, i dK/dY, -i dK/dX), A = diag(0, i, -i).
template <class S>
FieldValue<S> eval_field(const S& U, const State<S>& Z) {
    const KDerivs<S> k = eval_K_derivs(U, Z);
    FieldValue<S> f;
    f.dU = S(1.0) + k.dW;
    f.dZ.W = -k.dU;
    f.dZ.X = mul_i(Z.X) + mul_i(k.dY);
    f.dZ.Y = -mul_i(Z.Y) - mul_i(k.dX);
    return f;
}

namespace detail {
template <class S>
bool denominator_vanishes(const S& d);
template <>
inline bool denominator_vanishes<Cplx>(const Cplx& d) { return std::abs(d) == 0.0; }
template <>
inline bool denominator_vanishes<ComplexBox>(const ComplexBox& d) { return d.contains_zero(); }
} // namespace detail

// Graph remainder R[Z](U) = (f1, f2 - iXg, f3 + iYg) / (1 + g), g = dK/dW.
template <class S>
State<S> eval_R(const UPow<S>& u, const State<S>& Z) {
    const KDerivs<S> k = eval_K_derivs(u, Z);
    const S denom = S(1.0) + k.dW;
    if (detail::denominator_vanishes(denom))
        throw DenominatorVanishes("eval_R: 1 + g vanishes");
    const S invd = inv(denom);
    State<S> r;
    r.W = -k.dU * invd;
    r.X = mul_i(k.dY - Z.X * k.dW) * invd;
    r.Y = -mul_i(k.dX - Z.Y * k.dW) * invd;
    return r;
}

template <class S>
State<S> eval_R(const S& U, const State<S>& Z) {
    return eval_R(UPow<S>(U), Z);
}

// Quotient-rule closed forms for the nine partials of R in (W, X, Y).
template <class S>
Jacobian<S> eval_R_jacobian(const S& U, const State<S>& Z) {
    const KDerivs<S> k = eval_K_derivs(U, Z);
    const S denom = S(1.0) + k.dW;
    if (detail::denominator_vanishes(denom))
        throw DenominatorVanishes("eval_R_jacobian: 1 + g vanishes");
    const S invd2 = inv(denom * denom);
    const S& X = Z.X;
    const S& Y = Z.Y;
    Jacobian<S> m;
    m[0][0] = -(k.dUW * denom - k.dU * k.dWW) * invd2;
    m[0][1] = -(k.dUX * denom - k.dU * k.dWX) * invd2;
    m[0][2] = -(k.dUY * denom - k.dU * k.dWY) * invd2;
    m[1][0] = mul_i(((k.dWY - X * k.dWW) * denom - (k.dY - X * k.dW) * k.dWW) * invd2);
    m[1][1] = mul_i(((k.dXY - k.dW - X * k.dWX) * denom - (k.dY - X * k.dW) * k.dWX) * invd2);
    m[1][2] = mul_i(((k.dYY - X * k.dWY) * denom - (k.dY - X * k.dW) * k.dWY) * invd2);
    m[2][0] = -mul_i(((k.dWX - Y * k.dWW) * denom - (k.dX - Y * k.dW) * k.dWW) * invd2);
    m[2][1] = -mul_i(((k.dXX - Y * k.dWX) * denom - (k.dX - Y * k.dW) * k.dWX) * invd2);
    m[2][2] = -mul_i(((k.dXY - k.dW - Y * k.dWY) * denom - (k.dX - Y * k.dW) * k.dWY) * invd2);
    return m;
}

// Leading-order Picard seed of the unstable solution, valid deep in the tail.
// Fast-mode initial guess only; rigorous runs start from a certified ball.
template <class S>
State<S> asymptotic_seed(const S& U, double eta_star = 1000.0) {
    if (!(mid_of(U).real() <= -eta_star))
        throw OutsideTail("asymptotic_seed: Re U must be <= -eta_star");
    UPow<S> u(U);
    State<S> z;
    z.W = -(8.0 / 243.0) * u.p(-8);
    z.X = -(2.0 / 9.0) * mul_i(u.p(-4));
    z.Y = (2.0 / 9.0) * mul_i(u.p(-4));
    return z;
}

} // namespace stokes::inner
