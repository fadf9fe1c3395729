#pragma once

#include <cmath>
#include <complex>

#include "stokes/interval.hpp"

namespace stokes {

using Cplx = std::complex<double>;

// Axis-aligned rectangular complex interval.  Encloses exact complex
// arithmetic; the substrate for every rigorous computation here.
struct ComplexBox {
    RealInterval re;
    RealInterval im;

    ComplexBox() = default;
    explicit ComplexBox(double r) : re(r), im(0.0) {}
    ComplexBox(double r, double i) : re(r), im(i) {}
    ComplexBox(const RealInterval& r, const RealInterval& i) : re(r), im(i) {}
    explicit ComplexBox(const Cplx& z) : re(z.real()), im(z.imag()) {}

    static ComplexBox point(const Cplx& z) { return ComplexBox(z); }

    Cplx mid() const { return {re.mid(), im.mid()}; }
    double width() const { return std::max(re.width(), im.width()); }
    bool contains(const Cplx& z) const { return re.contains(z.real()) && im.contains(z.imag()); }
    bool contains(const ComplexBox& o) const { return re.contains(o.re) && im.contains(o.im); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
};

inline ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) {
    return {a.re + b.re, a.im + b.im};
}
inline ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) {
    return {a.re - b.re, a.im - b.im};
}
inline ComplexBox operator-(const ComplexBox& a) { return {-a.re, -a.im}; }

inline ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline ComplexBox operator*(const ComplexBox& a, const RealInterval& s) { return {a.re * s, a.im * s}; }
inline ComplexBox operator*(const RealInterval& s, const ComplexBox& a) { return a * s; }
inline ComplexBox operator*(const ComplexBox& a, double s) { return {a.re * s, a.im * s}; }
inline ComplexBox operator*(double s, const ComplexBox& a) { return a * s; }
inline ComplexBox operator+(const ComplexBox& a, double s) { return {a.re + s, a.im}; }
inline ComplexBox operator+(double s, const ComplexBox& a) { return a + s; }
inline ComplexBox operator-(const ComplexBox& a, double s) { return {a.re - s, a.im}; }
inline ComplexBox operator-(double s, const ComplexBox& a) { return {s - a.re, -a.im}; }

// Multiplication by i is exact: no rounding.
inline ComplexBox mul_i(const ComplexBox& a) { return {-a.im, a.re}; }
inline Cplx mul_i(const Cplx& a) { return {-a.imag(), a.real()}; }

inline ComplexBox conj(const ComplexBox& a) { return {a.re, -a.im}; }

inline ComplexBox hull(const ComplexBox& a, const ComplexBox& b) {
    return {hull(a.re, b.re), hull(a.im, b.im)};
}

namespace detail {
// sums of squares carry outward-rounding dust below zero; the true value
// cannot, so clamp before taking roots
inline RealInterval nonneg(const RealInterval& a) {
    return {std::max(a.lo, 0.0), std::max(a.hi, 0.0)};
}
} // namespace detail

// sup |z| over the box.
inline RealInterval mag_upper_iv(const ComplexBox& z) {
    RealInterval d = sqr(RealInterval(z.re.mag())) + sqr(RealInterval(z.im.mag()));
    return iv_sqrt(detail::nonneg(d));
}
inline double mag_upper(const ComplexBox& z) { return mag_upper_iv(z).hi; }

// inf |z| over the box (distance from 0 to the rectangle).
inline RealInterval mag_lower_iv(const ComplexBox& z) {
    const double dx = z.re.mig(), dy = z.im.mig();
    RealInterval d = sqr(RealInterval(dx)) + sqr(RealInterval(dy));
    return iv_sqrt(detail::nonneg(d));
}
inline double mag_lower(const ComplexBox& z) { return mag_lower_iv(z).lo; }

// |z|^2 as an interval.
inline RealInterval abs2_iv(const ComplexBox& z) { return detail::nonneg(sqr(z.re) + sqr(z.im)); }

inline ComplexBox inv(const ComplexBox& z) {
    if (z.contains_zero()) throw ZeroInBox("complex box inverse: 0 in box");
    RealInterval d = abs2_iv(z);
    return {z.re / d, -(z.im / d)};
}
inline Cplx inv(const Cplx& z) { return 1.0 / z; }

inline ComplexBox operator/(const ComplexBox& a, const ComplexBox& b) { return a * inv(b); }
inline ComplexBox operator/(const ComplexBox& a, double s) { return {a.re / s, a.im / s}; }

inline ComplexBox cbox_mul(const ComplexBox& a, const ComplexBox& b) { return a * b; }

// z^{-k} for k = 2, 3 by the explicit real/imaginary split:
//   z^-2 = |z|^-4 (a^2 - b^2 - 2abi)
//   z^-3 = |z|^-6 (a(a^2 - 3b^2) + ib(b^2 - 3a^2))
inline ComplexBox cbox_inv_pow(const ComplexBox& z, int k) {
    if (z.contains_zero()) throw ZeroInBox("cbox_inv_pow: 0 in box");
    const RealInterval a = z.re, b = z.im;
    const RealInterval a2 = sqr(a), b2 = sqr(b);
    const RealInterval r2 = a2 + b2;
    if (k == 2) {
        RealInterval d = sqr(r2);
        return {(a2 - b2) / d, -2.0 * (a * b) / d};
    }
    if (k == 3) {
        RealInterval d = sqr(r2) * r2;
        return {a * (a2 - 3.0 * b2) / d, b * (b2 - 3.0 * a2) / d};
    }
    throw OutOfRange("cbox_inv_pow supports k = 2, 3");
}
inline Cplx cbox_inv_pow(const Cplx& z, int k) {
    Cplx w = 1.0 / z;
    return k == 2 ? w * w : w * w * w;
}

// Principal square root of a box off the closed negative real axis.
// Pointwise sqrt(z) = (p, b / (2p)) with p = sqrt((|z| + a)/2) > 0; interval
// evaluation of both expressions encloses all pointwise values.  Boxes that
// hug the cut make the interval (|z| + a)/2 straddle zero and are rejected;
// the intended operand 1 + J stays near 1.
inline ComplexBox cbox_sqrt_principal(const ComplexBox& z) {
    if (z.re.lo <= 0.0 && z.im.contains_zero())
        throw BranchCutIntersect("cbox_sqrt_principal: box meets (-inf, 0]");
    RealInterval m = hull(mag_lower_iv(z), mag_upper_iv(z));
    // right-leaning boxes: p = sqrt((|z| + a)/2), q = b / (2p)
    RealInterval t1 = (m + z.re) * 0.5;
    if (t1.lo > 0.0) {
        RealInterval p = iv_sqrt(t1);
        return {p, z.im / (2.0 * p)};
    }
    // left-leaning boxes: |q| = sqrt((|z| - a)/2) avoids the cancellation;
    // sign(q) = sign(b), constant since the box excludes the cut
    RealInterval t2 = (m - z.re) * 0.5;
    if (t2.lo > 0.0 && !z.im.contains_zero()) {
        RealInterval qa = iv_sqrt(t2);
        RealInterval q = z.im.lo > 0.0 ? qa : -qa;
        return {z.im / (2.0 * q), q};
    }
    throw BranchCutIntersect("cbox_sqrt_principal: box too wide around the branch point");
}
inline Cplx cbox_sqrt_principal(const Cplx& z) { return std::sqrt(z); }

namespace detail {

// Unique root of 3s - 4s^3 = K in (1/2, 1], by interval Newton.  For z in the
// closed left half-plane, s = sin(arg(z)/3) with arg in [pi/2, 3pi/2] lies
// there; the other two roots of the triple-angle cubic sit at or below 1/2.
// Certification: N(S) subset S with 3 - 12 S^2 < 0 proves a unique root in S.
inline RealInterval sin_third_from_sin(RealInterval K, double s_guess) {
    constexpr double kLo = 0.5, kHi = 1.0 + 1e-6;
    K = RealInterval(std::max(K.lo, -1.0), std::min(K.hi, 1.0));
    if (K.lo > K.hi) throw BranchCutIntersect("cube root: inconsistent sine data");
    const double fp_guess = std::fabs(3.0 - 12.0 * s_guess * s_guess);
    const double rad = std::max(1e-8, 2.0 * K.width() / std::max(fp_guess, 0.05));
    RealInterval S(std::max(kLo, s_guess - rad), std::min(kHi, s_guess + rad));
    bool certified = false;
    for (int it = 0; it < 64 && !certified; ++it) {
        RealInterval fp = 3.0 - 12.0 * sqr(S);
        if (fp.hi >= 0.0)
            throw BranchCutIntersect("cube root: argument too close to the sector boundary");
        const double m = S.mid();
        RealInterval mI(m);
        RealInterval fm = 3.0 * mI - 4.0 * (mI * mI * mI) - K;
        RealInterval N = mI - fm / fp;
        if (N.lo >= S.lo && N.hi <= S.hi) {
            certified = true;
            S = N;
            break;
        }
        RealInterval next{std::max(N.lo, S.lo), std::min(N.hi, S.hi)};
        if (next.lo > next.hi || (it % 8 == 7)) {
            // lost or stalled: inflate within the admissible range and retry
            S = RealInterval(std::max(kLo, S.lo - 0.02), std::min(kHi, S.hi + 0.02));
        } else {
            S = next;
        }
    }
    if (!certified) throw BranchCutIntersect("cube root: interval Newton did not certify");
    // polish by intersecting further Newton steps
    for (int j = 0; j < 8; ++j) {
        const double mm = S.mid();
        RealInterval mmI(mm);
        RealInterval f2 = 3.0 * mmI - 4.0 * (mmI * mmI * mmI) - K;
        RealInterval fp = 3.0 - 12.0 * sqr(S);
        if (fp.hi >= 0.0) break;
        RealInterval N2 = mmI - f2 / fp;
        RealInterval nx{std::max(N2.lo, S.lo), std::min(N2.hi, S.hi)};
        if (nx.lo > nx.hi) break;
        S = nx;
    }
    return S;
}

} // namespace detail

// U^{-1/3} on the branch cut along [0, +inf) with arg U in (0, 2pi), so
// arg(U^{-1/3}) in (-2pi/3, 0).  Box mode requires the box in the closed left
// half-plane, away from the origin; there arg/3 in [pi/6, pi/2], so
// cos(arg/3) >= 0 and U^{-1/3} = |U|^{-1/3} (c - i s) with s = sin(arg/3),
// c = sqrt(1 - s^2).
inline ComplexBox cbox_cuberoot_upper(const ComplexBox& z) {
    if (z.re.hi > 0.0 || (z.re.hi == 0.0 && z.im.contains_zero()))
        throw BranchCutIntersect("cbox_cuberoot_upper: box meets [0, +inf)");
    RealInterval m = hull(mag_lower_iv(z), mag_upper_iv(z));
    if (m.lo <= 0.0) throw ZeroInBox("cbox_cuberoot_upper: 0 in box");
    // sin(arg z) = im/|z| has no interior critical point over a rectangle in
    // the left half-plane, so its range is attained at the corners
    RealInterval sinth;
    {
        bool first = true;
        for (double a : {z.re.lo, z.re.hi})
            for (double b : {z.im.lo, z.im.hi}) {
                RealInterval rr = iv_sqrt(detail::nonneg(sqr(RealInterval(a)) + sqr(RealInterval(b))));
                RealInterval v = RealInterval(b) / rr;
                sinth = first ? v : hull(sinth, v);
                first = false;
            }
    }
    const Cplx zm = z.mid();
    double th = std::arg(zm);
    if (th <= 0.0) th += 2.0 * 3.141592653589793;
    const double s_guess = std::sin(th / 3.0);
    RealInterval s = detail::sin_third_from_sin(sinth, s_guess);
    RealInterval one_minus_s2 = 1.0 - sqr(s);
    RealInterval c = iv_sqrt(RealInterval(std::max(one_minus_s2.lo, 0.0),
                                          std::max(one_minus_s2.hi, 0.0)));
    RealInterval r13 = iv_pow3(m, -1);
    return {r13 * c, -(r13 * s)};
}

inline Cplx cbox_cuberoot_upper(const Cplx& z) {
    double th = std::arg(z);
    if (th <= 0.0) th += 2.0 * 3.141592653589793;
    const double r = std::abs(z);
    return std::polar(std::cbrt(1.0 / r), -th / 3.0);
}

// ---- shared scalar helpers for code templated over Cplx / ComplexBox ----

inline double width_of(const Cplx&) { return 0.0; }
inline double width_of(const ComplexBox& z) { return z.width(); }
inline Cplx mid_of(const Cplx& z) { return z; }
inline Cplx mid_of(const ComplexBox& z) { return z.mid(); }
inline ComplexBox widen(const ComplexBox& z, double eps) {
    return {RealInterval(z.re.lo - eps, z.re.hi + eps), RealInterval(z.im.lo - eps, z.im.hi + eps)};
}

} // namespace stokes
