#pragma once

#include <array>
#include <type_traits>
#include <vector>

#include "stokes/extended.hpp"

namespace stokes::taylor {

using stokes::inv;
using stokes::mul_i;

// First-order jet: value plus derivatives along N seed directions.  Used to
// carry the variational (Jacobian) coefficients through the same recurrences
// as the state.  The field is holomorphic, so complex derivatives suffice.
template <class S, int N>
struct Jet {
    S v{};
    std::array<S, N> d{};

    Jet() = default;
    Jet(double x) : v(x) {} // NOLINT: implicit by design, mirrors scalar literals
    explicit Jet(const S& x) : v(x) {}
};

template <class S, int N>
Jet<S, N> operator+(const Jet<S, N>& a, const Jet<S, N>& b) {
    Jet<S, N> r;
    r.v = a.v + b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
}
template <class S, int N>
Jet<S, N> operator-(const Jet<S, N>& a, const Jet<S, N>& b) {
    Jet<S, N> r;
    r.v = a.v - b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
}
template <class S, int N>
Jet<S, N> operator-(const Jet<S, N>& a) {
    Jet<S, N> r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
}
template <class S, int N>
Jet<S, N> operator*(const Jet<S, N>& a, const Jet<S, N>& b) {
    Jet<S, N> r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.v * b.d[i] + a.d[i] * b.v;
    return r;
}
template <class S, int N>
Jet<S, N> operator*(double s, const Jet<S, N>& a) {
    Jet<S, N> r;
    r.v = s * a.v;
    for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
    return r;
}
template <class S, int N>
Jet<S, N> operator*(const Jet<S, N>& a, double s) { return s * a; }
template <class S, int N>
Jet<S, N> operator+(const Jet<S, N>& a, double s) { Jet<S, N> r = a; r.v = r.v + s; return r; }
template <class S, int N>
Jet<S, N> operator-(const Jet<S, N>& a, double s) { Jet<S, N> r = a; r.v = r.v - s; return r; }
template <class S, int N>
Jet<S, N> operator/(const Jet<S, N>& a, double s) {
    Jet<S, N> r;
    r.v = a.v / s;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] / s;
    return r;
}
template <class S, int N>
Jet<S, N> mul_i(const Jet<S, N>& a) {
    Jet<S, N> r;
    r.v = mul_i(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = mul_i(a.d[i]);
    return r;
}
template <class S, int N>
Jet<S, N> inv(const Jet<S, N>& a) {
    Jet<S, N> r;
    r.v = inv(a.v);
    const S m = -(r.v * r.v);
    for (int i = 0; i < N; ++i) r.d[i] = m * a.d[i];
    return r;
}
template <class S, int N>
Jet<S, N> cbox_inv_pow(const Jet<S, N>& a, int k) {
    // (z^-k)' = -k z^{-k-1} z', k = 2 or 3
    const S iz = inv(a.v);
    const S iz2 = iz * iz;
    Jet<S, N> r;
    if (k == 2) {
        r.v = iz2;
        const S m = -2.0 * (iz2 * iz);
        for (int i = 0; i < N; ++i) r.d[i] = m * a.d[i];
        return r;
    }
    if (k == 3) {
        const S iz3 = iz2 * iz;
        r.v = iz3;
        const S m = -3.0 * (iz3 * iz);
        for (int i = 0; i < N; ++i) r.d[i] = m * a.d[i];
        return r;
    }
    throw OutOfRange("jet cbox_inv_pow supports k = 2, 3");
}

// ---------------------------------------------------------------------------
// Series: std::vector<R> of time-Taylor coefficients.  The k-th coefficient
// of a product is a Cauchy convolution, so advancing the whole recurrence
// order by order costs O(order^2) per operation.

template <class R>
R series_mul_coeff(const std::vector<R>& a, const std::vector<R>& b, int k) {
    R s{};
    for (int j = 0; j <= k; ++j) s = s + a[static_cast<size_t>(j)] * b[static_cast<size_t>(k - j)];
    return s;
}

// w = 1/u given u[0..k] and w[0..k-1]:  w_0 = 1/u_0,
// w_k = -w_0 sum_{j<k} w_j u_{k-j}.
template <class R>
R series_inv_coeff(const std::vector<R>& u, const std::vector<R>& w, int k) {
    if (k == 0) return inv(u[0]);
    R s{};
    for (int j = 0; j < k; ++j) s = s + w[static_cast<size_t>(j)] * u[static_cast<size_t>(k - j)];
    return -(w[0] * s);
}

template <class R>
R poly_eval(const std::vector<R>& c, double h, int upto) {
    R s = c[static_cast<size_t>(upto)];
    for (int k = upto - 1; k >= 0; --k) s = s * h + c[static_cast<size_t>(k)];
    return s;
}

// Horner over an interval time factor (rigorous enclosures over a time range).
inline ComplexBox poly_eval_iv(const std::vector<ComplexBox>& c, const RealInterval& h, int upto) {
    ComplexBox s = c[static_cast<size_t>(upto)];
    for (int k = upto - 1; k >= 0; --k) s = s * h + c[static_cast<size_t>(k)];
    return s;
}

// ---------------------------------------------------------------------------
// The extended vector field as a per-order series program.  Work keeps every
// intermediate series so that order k reuses orders 0..k-1 of everything.

struct ExtField {
    static constexpr int dim = 6;
    static constexpr int inert = 1; // U is carried but never read
    enum { iU = 0, iW = 1, iX = 2, iY = 3, iA = 4, iB = 5 };

    template <class R>
    struct Work {
        std::vector<R> B2, B3, B4, B5, B6, invB2, A2, A3, W2;
        std::vector<R> XpY, XmY, X2, Y2, XY, W2B, WB2, WB3, T1, XpYT, XmYB, X2pY2B3, XYB3;
        std::vector<R> JW, JX, JY, JB, A3JB, G;
        std::vector<R> dU, dW, dX, dY, dA, dB, SUM;
    };

    // Compute coefficient k of the time-derivative of every variable, given
    // state coefficients 0..k.  Appends coefficient k to every intermediate.
    template <class R>
    std::array<R, 6> advance(Work<R>& w, const std::array<std::vector<R>, 6>& x, int k) const {
        const size_t kk = static_cast<size_t>(k);
        const auto& W = x[iW];
        const auto& X = x[iX];
        const auto& Y = x[iY];
        const auto& A = x[iA];
        const auto& B = x[iB];

        w.B2.push_back(series_mul_coeff(B, B, k));
        w.B3.push_back(series_mul_coeff(w.B2, B, k));
        w.B4.push_back(series_mul_coeff(w.B2, w.B2, k));
        w.B5.push_back(series_mul_coeff(w.B4, B, k));
        w.B6.push_back(series_mul_coeff(w.B4, w.B2, k));
        w.invB2.push_back(series_inv_coeff(w.B2, w.invB2, k));
        w.A2.push_back(series_mul_coeff(A, A, k));
        w.A3.push_back(series_mul_coeff(w.A2, A, k));
        w.W2.push_back(series_mul_coeff(W, W, k));
        w.XpY.push_back(X[kk] + Y[kk]);
        w.XmY.push_back(X[kk] - Y[kk]);
        w.X2.push_back(series_mul_coeff(X, X, k));
        w.Y2.push_back(series_mul_coeff(Y, Y, k));
        w.XY.push_back(series_mul_coeff(X, Y, k));
        w.W2B.push_back(series_mul_coeff(w.W2, B, k));
        w.WB2.push_back(series_mul_coeff(W, w.B2, k));
        w.WB3.push_back(series_mul_coeff(W, w.B3, k));
        w.T1.push_back(3.0 * w.WB2[kk] - (10.0 / 3.0) * w.B4[kk]);
        w.XpYT.push_back(series_mul_coeff(w.XpY, w.T1, k));
        w.XmYB.push_back(series_mul_coeff(w.XmY, B, k));
        {
            // (X^2 + Y^2) B^3, convolved from the stored component series
            R s{};
            for (int j = 0; j <= k; ++j)
                s = s + (w.X2[static_cast<size_t>(j)] + w.Y2[static_cast<size_t>(j)])
                        * w.B3[static_cast<size_t>(k - j)];
            w.X2pY2B3.push_back(s);
        }
        w.XYB3.push_back(series_mul_coeff(w.XY, w.B3, k));

        // partials of Jtilde
        w.JW.push_back((8.0 / 9.0) * w.WB2[kk] - (16.0 / 27.0) * w.B4[kk]
                       + (4.0 / 9.0) * series_mul_coeff(w.XpY, w.B3, k));
        w.JX.push_back((4.0 / 9.0) * (w.WB3[kk] - (2.0 / 3.0) * w.B5[kk])
                       - (4.0 / 3.0) * mul_i(w.B2[kk])
                       - (2.0 / 3.0) * series_mul_coeff(X, w.B4, k)
                       + (10.0 / 9.0) * series_mul_coeff(Y, w.B4, k));
        w.JY.push_back((4.0 / 9.0) * (w.WB3[kk] - (2.0 / 3.0) * w.B5[kk])
                       + (4.0 / 3.0) * mul_i(w.B2[kk])
                       - (2.0 / 3.0) * series_mul_coeff(Y, w.B4, k)
                       + (10.0 / 9.0) * series_mul_coeff(X, w.B4, k));
        w.JB.push_back((8.0 / 9.0) * w.W2B[kk] - (64.0 / 27.0) * w.WB3[kk]
                       + (32.0 / 27.0) * w.B5[kk] + (4.0 / 9.0) * w.XpYT[kk]
                       - (8.0 / 3.0) * mul_i(w.XmYB[kk]) - (4.0 / 3.0) * w.X2pY2B3[kk]
                       + (40.0 / 9.0) * w.XYB3[kk]);
        w.G.push_back((1.0 / 6.0) * series_mul_coeff(w.B2, w.A3, k));

        w.dU.push_back(R(k == 0 ? 1.0 : 0.0) - 1.5 * series_mul_coeff(W, w.invB2, k)
                       + series_mul_coeff(w.G, w.JW, k));
        w.A3JB.push_back(series_mul_coeff(w.A3, w.JB, k));
        w.dW.push_back(0.5 * series_mul_coeff(B, w.W2, k)
                       - (2.0 / 9.0) * (series_mul_coeff(w.B5, A, k) - w.B5[kk])
                       + (1.0 / 18.0) * series_mul_coeff(w.B6, w.A3JB, k));
        w.dX.push_back(mul_i(X[kk] + series_mul_coeff(w.G, w.JY, k)));
        w.dY.push_back(-mul_i(Y[kk] + series_mul_coeff(w.G, w.JX, k)));
        w.dB.push_back(-(1.0 / 3.0) * series_mul_coeff(w.B4, w.dU, k));
        w.SUM.push_back(series_mul_coeff(w.JW, w.dW, k) + series_mul_coeff(w.JX, w.dX, k)
                        + series_mul_coeff(w.JY, w.dY, k) + series_mul_coeff(w.JB, w.dB, k));
        w.dA.push_back(-0.5 * series_mul_coeff(w.A3, w.SUM, k));

        return {w.dU[kk], w.dW[kk], w.dX[kk], w.dY[kk], w.dA[kk], w.dB[kk]};
    }

    // Plain (non-series) evaluation for a-priori enclosures and direct use.
    template <class S>
    std::array<S, 6> operator()(const std::array<S, 6>& s) const {
        extended::State<S> st = extended::State<S>::from_array(s);
        extended::Derivative<S> d = extended::eval_F(st);
        return d.as_array();
    }
};

// dz/dt = lambda z, one complex variable; exercises the same machinery with a
// closed-form solution.
struct LinearField {
    static constexpr int dim = 1;
    Cplx lambda{0.0, 1.0};

    template <class R>
    struct Work {
        std::vector<R> d;
    };

    template <class R>
    std::array<R, 1> advance(Work<R>& w, const std::array<std::vector<R>, 1>& x, int k) const {
        R lz = x[0][static_cast<size_t>(k)] * R(lambda.real())
             + mul_i(x[0][static_cast<size_t>(k)]) * R(lambda.imag());
        w.d.push_back(lz);
        return {w.d.back()};
    }

    template <class S>
    std::array<S, 1> operator()(const std::array<S, 1>& s) const {
        return {s[0] * S(lambda.real()) + mul_i(s[0]) * S(lambda.imag())};
    }
};

// Harmonic pair x' = y, y' = -x: a 2x2 linear system with known matrix
// exponential (rotation), the classic wrapping-effect benchmark.
struct HarmonicField {
    static constexpr int dim = 2;

    template <class R>
    struct Work {};

    template <class R>
    std::array<R, 2> advance(Work<R>&, const std::array<std::vector<R>, 2>& x, int k) const {
        return {x[1][static_cast<size_t>(k)], -x[0][static_cast<size_t>(k)]};
    }

    template <class S>
    std::array<S, 2> operator()(const std::array<S, 2>& s) const {
        return {s[1], -s[0]};
    }
};

// dU = 1, everything else frozen: the trivial section-crossing test field.
struct DriftField {
    static constexpr int dim = 6;
    static constexpr int inert = 1;

    template <class R>
    struct Work {};

    template <class R>
    std::array<R, 6> advance(Work<R>&, const std::array<std::vector<R>, 6>&, int k) const {
        std::array<R, 6> d{};
        if (k == 0) d[0] = R(1.0);
        return d;
    }

    template <class S>
    std::array<S, 6> operator()(const std::array<S, 6>&) const {
        std::array<S, 6> d{};
        d[0] = S(1.0);
        return d;
    }
};

// Time-Taylor coefficients of the solution through x0: c_0 = x0,
// c_{k+1} = (field coefficient k) / (k+1).
template <class Field, class R>
std::array<std::vector<R>, Field::dim> ode_coefficients(const Field& f,
                                                        const std::array<R, Field::dim>& x0,
                                                        int order) {
    std::array<std::vector<R>, Field::dim> x;
    for (int i = 0; i < Field::dim; ++i) {
        x[static_cast<size_t>(i)].reserve(static_cast<size_t>(order) + 1);
        x[static_cast<size_t>(i)].push_back(x0[static_cast<size_t>(i)]);
    }
    typename Field::template Work<R> w;
    for (int k = 0; k < order; ++k) {
        std::array<R, Field::dim> dk = f.advance(w, x, k);
        for (int i = 0; i < Field::dim; ++i)
            x[static_cast<size_t>(i)].push_back(dk[static_cast<size_t>(i)] / static_cast<double>(k + 1));
    }
    return x;
}

} // namespace stokes::taylor
