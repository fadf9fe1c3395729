#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "stokes/errors.hpp"

namespace stokes {

// Closed real interval [lo, hi] with outward rounding.
//
// Every operation encloses the exact real result.  Rounding is done by
// next-float perturbation after each native round-to-nearest operation:
// RN(x) is within half an ulp of the exact value, so stepping one float
// down/up gives a valid directed bound on any platform without touching
// the FPU rounding mode.
struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;

    RealInterval() = default;
    explicit RealInterval(double v) : lo(v), hi(v) {}
    RealInterval(double l, double h) : lo(l), hi(h) {}

    static RealInterval point(double v) { return RealInterval(v); }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double rad() const { return 0.5 * (hi - lo); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const RealInterval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    // Largest |x| over the interval.
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    // Smallest |x| over the interval (0 if it straddles zero).
    double mig() const {
        if (contains_zero()) return 0.0;
        return std::min(std::fabs(lo), std::fabs(hi));
    }
};

namespace detail {
inline double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
} // namespace detail

inline RealInterval operator+(const RealInterval& a, const RealInterval& b) {
    return {detail::next_down(a.lo + b.lo), detail::next_up(a.hi + b.hi)};
}

inline RealInterval operator-(const RealInterval& a, const RealInterval& b) {
    return {detail::next_down(a.lo - b.hi), detail::next_up(a.hi - b.lo)};
}

inline RealInterval operator-(const RealInterval& a) { return {-a.hi, -a.lo}; }

inline RealInterval operator*(const RealInterval& a, const RealInterval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    // x - ulp(x)/2 is monotone, so outward-nudging the extreme RN product
    // bounds the extreme exact product.
    const double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    const double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {detail::next_down(lo), detail::next_up(hi)};
}

inline RealInterval operator/(const RealInterval& a, const RealInterval& b) {
    if (b.contains_zero()) throw DivisionByZeroInterval("interval division by interval containing 0");
    const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
    const double lo = std::min(std::min(q1, q2), std::min(q3, q4));
    const double hi = std::max(std::max(q1, q2), std::max(q3, q4));
    return {detail::next_down(lo), detail::next_up(hi)};
}

inline RealInterval operator+(const RealInterval& a, double b) { return a + RealInterval(b); }
inline RealInterval operator+(double a, const RealInterval& b) { return RealInterval(a) + b; }
inline RealInterval operator-(const RealInterval& a, double b) { return a - RealInterval(b); }
inline RealInterval operator-(double a, const RealInterval& b) { return RealInterval(a) - b; }
inline RealInterval operator*(const RealInterval& a, double b) { return a * RealInterval(b); }
inline RealInterval operator*(double a, const RealInterval& b) { return RealInterval(a) * b; }
inline RealInterval operator/(const RealInterval& a, double b) { return a / RealInterval(b); }
inline RealInterval operator/(double a, const RealInterval& b) { return RealInterval(a) / b; }

// Tight square: avoids the dependency blow-up of x*x when x straddles 0.
inline RealInterval sqr(const RealInterval& a) {
    const double m = a.mag(), n = a.mig();
    const double lo = n == 0.0 ? 0.0 : std::max(detail::next_down(n * n), 0.0);
    return {lo, detail::next_up(m * m)};
}

inline RealInterval hull(const RealInterval& a, const RealInterval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline bool intersects(const RealInterval& a, const RealInterval& b) {
    return a.lo <= b.hi && b.lo <= a.hi;
}

inline RealInterval iv_sqrt(const RealInterval& a) {
    if (a.lo < 0.0) throw NegativeArgument("iv_sqrt of interval with negative lower bound");
    // std::sqrt is correctly rounded, one ulp outward is enough.
    const double lo = a.lo == 0.0 ? 0.0 : detail::next_down(std::sqrt(a.lo));
    const double hi = a.hi == 0.0 ? 0.0 : detail::next_up(std::sqrt(a.hi));
    return {std::max(lo, 0.0), hi};
}

namespace detail {
// Verified real cube root of a double: bracket std::cbrt by nudging until y^3 straddles x.
inline double cbrt_down(double x) {
    double y = std::cbrt(x);
    while ((RealInterval(y) * RealInterval(y) * RealInterval(y)).hi > x) y = next_down(y);
    return y;
}
inline double cbrt_up(double x) {
    double y = std::cbrt(x);
    while ((RealInterval(y) * RealInterval(y) * RealInterval(y)).lo < x) y = next_up(y);
    return y;
}
} // namespace detail

// Cube root, monotone over all reals.
inline RealInterval iv_cbrt(const RealInterval& a) {
    return {detail::cbrt_down(a.lo), detail::cbrt_up(a.hi)};
}

// x^(p/3) for x > 0, p integer: integer powers of the verified cube root.
inline RealInterval iv_pow3(const RealInterval& a, int p) {
    if (p == 0) return RealInterval(1.0);
    if (a.lo <= 0.0) throw NegativeArgument("iv_pow3 needs positive interval");
    RealInterval c = iv_cbrt(a);
    RealInterval r(1.0);
    int n = p > 0 ? p : -p;
    for (int i = 0; i < n; ++i) r = r * c;
    if (p < 0) r = 1.0 / r;
    return r;
}

inline RealInterval iv_pow(const RealInterval& a, int n) {
    if (n == 0) return RealInterval(1.0);
    if (n < 0) return 1.0 / iv_pow(a, -n);
    if (n % 2 == 0 && a.contains_zero()) {
        RealInterval h = sqr(a);
        RealInterval r = h;
        for (int i = 2; i < n; i += 2) r = r * h;
        return r;
    }
    RealInterval r = a;
    for (int i = 1; i < n; ++i) r = r * a;
    return r;
}

inline const RealInterval& iv_pi() {
    static const RealInterval v{3.141592653589793, 3.1415926535897936};
    return v;
}

inline const RealInterval& iv_ln2() {
    static const RealInterval v{0.6931471805599453, 0.6931471805599454};
    return v;
}

inline const RealInterval& iv_sqrt_pi() {
    static const RealInterval v{1.7724538509055159, 1.772453850905516};
    return v;
}

namespace detail {
// exp on [-0.5, 0.5] by Taylor with alternating-free remainder bound.
inline RealInterval exp_core(const RealInterval& r) {
    RealInterval s(1.0);
    RealInterval term(1.0);
    for (int j = 1; j <= 17; ++j) {
        term = term * r / static_cast<double>(j);
        s = s + term;
    }
    // |r| <= 0.5 (plus slack): tail <= |r|^18/18! * 1/(1 - |r|/19) < 2^-18/18! * 1.03
    const double tail = 6.3e-21;
    return s + RealInterval(-tail, tail);
}
} // namespace detail

// Rigorous exp for moderate arguments (|x| <= ~700): argument reduction by ln 2.
inline RealInterval iv_exp(const RealInterval& x) {
    auto one_side = [](double v, bool upper) {
        const int k = static_cast<int>(std::nearbyint(v / 0.6931471805599453));
        RealInterval r = RealInterval(v) - static_cast<double>(k) * iv_ln2();
        RealInterval e = detail::exp_core(r);
        const double s = upper ? detail::next_up(std::ldexp(e.hi, k))
                               : detail::next_down(std::ldexp(e.lo, k));
        return s;
    };
    return {std::max(one_side(x.lo, false), 0.0), one_side(x.hi, true)};
}

namespace detail {
// sin/cos on |x| <= 1.6 by alternating Taylor series; remainder bounded by first dropped term.
inline RealInterval sin_point(double x) {
    RealInterval xv(x);
    RealInterval x2 = sqr(xv);
    RealInterval term = xv;
    RealInterval s = term;
    for (int j = 1; j <= 12; ++j) {
        term = term * x2 / static_cast<double>((2 * j) * (2 * j + 1));
        s = (j % 2 == 1) ? s - term : s + term;
    }
    const double tail = 4.0e-21; // 1.55^27/27!
    return s + RealInterval(-tail, tail);
}
inline RealInterval cos_point(double x) {
    RealInterval x2 = sqr(RealInterval(x));
    RealInterval term(1.0);
    RealInterval s = term;
    for (int j = 1; j <= 12; ++j) {
        term = term * x2 / static_cast<double>((2 * j - 1) * (2 * j));
        s = (j % 2 == 1) ? s - term : s + term;
    }
    const double tail = 6.0e-20; // 1.55^26/26!
    return s + RealInterval(-tail, tail);
}
} // namespace detail

// sin on [0, 1.55]: monotone increasing there.
inline RealInterval iv_sin_small(const RealInterval& x) {
    if (x.lo < 0.0 || x.hi > 1.55) throw OutOfRange("iv_sin_small needs [0, 1.55]");
    return {detail::sin_point(x.lo).lo, detail::sin_point(x.hi).hi};
}

// cos on [0, 1.55]: monotone decreasing there.
inline RealInterval iv_cos_small(const RealInterval& x) {
    if (x.lo < 0.0 || x.hi > 1.55) throw OutOfRange("iv_cos_small needs [0, 1.55]");
    return {detail::cos_point(x.hi).lo, detail::cos_point(x.lo).hi};
}

} // namespace stokes
