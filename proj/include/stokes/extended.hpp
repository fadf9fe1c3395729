#pragma once

#include <array>

#include "stokes/inner.hpp"

// The auxiliary-variable form of the inner system: A stands in for
// 1/sqrt(1+J) and B for U^{-1/3}, which makes the right-hand side polynomial
// except for one 1/B^2.  The field never reads U; U is carried in the state
// only because section detection needs it.
namespace stokes::extended {

template <class S>
struct State {
    S U{}, W{}, X{}, Y{}, A{}, B{};

    std::array<S, 6> as_array() const { return {U, W, X, Y, A, B}; }
    static State from_array(const std::array<S, 6>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
};

template <class S>
using Derivative = State<S>;

// Jtilde(W, X, Y, B): the coupling function with B in place of U^{-1/3}.
template <class S>
struct JtildeValue {
    S value{}, dW{}, dX{}, dY{}, dB{};
};

template <class S>
JtildeValue<S> eval_Jtilde(const S& W, const S& X, const S& Y, const S& B) {
    const S B2 = B * B;
    const S B3 = B2 * B;
    const S B4 = B2 * B2;
    const S B5 = B4 * B;
    const S XpY = X + Y;
    const S XmY = X - Y;
    JtildeValue<S> j;
    j.value = (4.0 / 9.0) * W * W * B2 - (16.0 / 27.0) * W * B4 + (16.0 / 81.0) * B4 * B2
            + (4.0 / 9.0) * XpY * (W * B3 - (2.0 / 3.0) * B5)
            - (4.0 / 3.0) * mul_i(XmY) * B2
            - (1.0 / 3.0) * (X * X + Y * Y) * B4 + (10.0 / 9.0) * X * Y * B4;
    j.dW = (8.0 / 9.0) * W * B2 - (16.0 / 27.0) * B4 + (4.0 / 9.0) * XpY * B3;
    j.dX = (4.0 / 9.0) * (W * B3 - (2.0 / 3.0) * B5) - (4.0 / 3.0) * mul_i(B2)
         - (2.0 / 3.0) * X * B4 + (10.0 / 9.0) * Y * B4;
    j.dY = (4.0 / 9.0) * (W * B3 - (2.0 / 3.0) * B5) + (4.0 / 3.0) * mul_i(B2)
         - (2.0 / 3.0) * Y * B4 + (10.0 / 9.0) * X * B4;
    j.dB = (8.0 / 9.0) * W * W * B - (64.0 / 27.0) * W * B3 + (32.0 / 27.0) * B5
         + (4.0 / 9.0) * XpY * (3.0 * W * B2 - (10.0 / 3.0) * B4)
         - (8.0 / 3.0) * mul_i(XmY) * B
         - (4.0 / 3.0) * (X * X + Y * Y) * B3 + (40.0 / 9.0) * X * Y * B3;
    return j;
}

// Ktilde(W, A, B) = -(3/4) W^2 / B^2 - (1/3) B^2 (A - 1), with partials.
template <class S>
struct KtildeValue {
    S value{}, dW{}, dA{}, dB{};
};

template <class S>
KtildeValue<S> eval_Ktilde(const S& W, const S& A, const S& B) {
    if constexpr (std::is_same_v<S, ComplexBox>) {
        if (B.contains_zero()) throw ZeroInBox("eval_Ktilde: 0 in B");
    }
    const S invB2 = cbox_inv_pow(B, 2);
    const S invB3 = cbox_inv_pow(B, 3);
    const S B2 = B * B;
    KtildeValue<S> k;
    k.value = -0.75 * W * W * invB2 - (1.0 / 3.0) * B2 * (A - S(1.0));
    k.dW = -1.5 * W * invB2;
    k.dA = -(1.0 / 3.0) * B2;
    k.dB = 1.5 * W * W * invB3 - (2.0 / 3.0) * B * (A - S(1.0));
    return k;
}

// The full vector field.  dU = dH/dW + dH/dA dA/dW and so on down the chain;
// dA follows from dA/dx = -(1/2) A^3 dJtilde/dx and dB/dU = -(1/3) B^4.
template <class S>
Derivative<S> eval_F(const State<S>& s) {
    if constexpr (std::is_same_v<S, ComplexBox>) {
        if (s.B.contains_zero()) throw ZeroInBox("eval_F: 0 in B");
    }
    const JtildeValue<S> j = eval_Jtilde(s.W, s.X, s.Y, s.B);
    const S invB2 = cbox_inv_pow(s.B, 2);
    const S A2 = s.A * s.A;
    const S A3 = A2 * s.A;
    const S B2 = s.B * s.B;
    const S B4 = B2 * B2;
    const S B5 = B4 * s.B;
    const S G = (1.0 / 6.0) * B2 * A3;

    Derivative<S> d;
    d.U = S(1.0) - 1.5 * s.W * invB2 + G * j.dW;
    d.W = 0.5 * s.B * s.W * s.W - (2.0 / 9.0) * B5 * (s.A - S(1.0)) + (1.0 / 18.0) * B4 * B2 * A3 * j.dB;
    d.X = mul_i(s.X + G * j.dY);
    d.Y = -mul_i(s.Y + G * j.dX);
    d.B = -(1.0 / 3.0) * B4 * d.U;
    d.A = -0.5 * A3 * (j.dW * d.W + j.dX * d.X + j.dY * d.Y + j.dB * d.B);
    return d;
}

// Reversing symmetry S(U,W,X,Y,A,B) = (-conj U, conj W, -conj X, -conj Y,
// conj A, -conj B); an involution with S o F = -F o S.
template <class S>
State<S> apply_S(const State<S>& s) {
    using stokes::conj;
    using std::conj;
    return {-conj(s.U), conj(s.W), -conj(s.X), -conj(s.Y), conj(s.A), -conj(s.B)};
}

// Lift a graph point (U, Z) to the extended state: A = (1+J)^{-1/2},
// B = U^{-1/3}.
template <class S>
State<S> lift(const S& U, const inner::State<S>& Z) {
    inner::UPow<S> u(U);
    const S J = inner::eval_J(u, Z);
    const S A = inv(cbox_sqrt_principal(S(1.0) + J));
    return {U, Z.W, Z.X, Z.Y, A, u.p(-1)};
}

// Splitting bound at a point on the imaginary axis: the symmetry pairs the
// stable and unstable solutions, so Delta Y(-i rho) = 2 Re Y_u(-i rho) and
// |2 Re Y_u| bounds ||Delta Z|| from below.
inline std::pair<Cplx, double> stable_from_unstable(const Cplx& Yu) {
    const double dy = 2.0 * Yu.real();
    return {Cplx(dy, 0.0), std::fabs(dy)};
}

inline std::pair<ComplexBox, RealInterval> stable_from_unstable(const ComplexBox& Yu) {
    const RealInterval dy = 2.0 * Yu.re;
    RealInterval lower(dy.mig(), dy.mag());
    return {ComplexBox(dy, RealInterval(0.0)), lower};
}

} // namespace stokes::extended
