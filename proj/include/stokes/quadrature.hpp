#pragma once

#include <cmath>

#include "stokes/interval.hpp"

namespace stokes::quadrature {

// The distance-formula constant
//   A = int_0^{(sqrt(2)-1)/2} 2/(1-x) sqrt( x / (3(x+1)(1-4x-4x^2)) ) dx.
//
// The quadratic under the root factors as 1-4x-4x^2 = 4(b-x)(x+c) with
// b = (sqrt(2)-1)/2 and c = (sqrt(2)+1)/2, so the integrand is
// G(x) (b-x)^{-1/2} with the bounded factor
//   G(x) = 2 sqrt(x) / ((1-x) sqrt(12 (x+1)(x+c))).
// Each panel [p,q] is enclosed by G([p,q]) * int_p^q (b-x)^{-1/2} dx, the
// weight integral being 2(sqrt(b-p) - sqrt(b-q)) exactly in interval
// arithmetic.  This is a mean-value enclosure: it handles both the vanishing
// sqrt(x) at the left endpoint and the inverse-sqrt blow-up at the right one.

inline RealInterval endpoint_b() { return (iv_sqrt(RealInterval(2.0)) - 1.0) / 2.0; }

inline RealInterval g_factor(const RealInterval& x) {
    const RealInterval c = (iv_sqrt(RealInterval(2.0)) + 1.0) / 2.0;
    const RealInterval num = 2.0 * iv_sqrt(x);
    const RealInterval den = (1.0 - x) * iv_sqrt(12.0 * (x + 1.0) * (x + c));
    return num / den;
}

// Full integrand, defined for x in [0, b); used by tests.
inline RealInterval integrand(const RealInterval& x) {
    const RealInterval q = 1.0 - 4.0 * x - 4.0 * sqr(x);
    RealInterval arg = x / (3.0 * (x + 1.0) * q);
    arg.lo = std::max(arg.lo, 0.0); // x >= 0, so the true ratio is nonnegative
    RealInterval f = (2.0 / (1.0 - x)) * iv_sqrt(arg);
    f.lo = std::max(f.lo, 0.0);
    return f;
}

inline RealInterval constant_A(int panels = 32000) {
    if (panels < 2) throw QuadratureFailed("constant_A: need at least 2 panels");
    const RealInterval b = endpoint_b();
    RealInterval total(0.0);
    // uniform partition of [0, b] by rationals i/n scaled by b
    RealInterval sq_prev = iv_sqrt(b); // sqrt(b - x_0), x_0 = 0
    for (int i = 0; i < panels; ++i) {
        const RealInterval lo_frac(static_cast<double>(i) / panels);
        const RealInterval hi_frac(static_cast<double>(i + 1) / panels);
        const RealInterval xlo = b * lo_frac;
        const RealInterval xhi = b * hi_frac;
        RealInterval panel = hull(xlo, xhi);
        panel.lo = std::max(panel.lo, 0.0); // the variable never leaves [0, b]
        RealInterval bmx = b - xhi;
        if (bmx.lo < 0.0) bmx = RealInterval(0.0, std::max(bmx.hi, 0.0));
        const RealInterval sq_next = iv_sqrt(bmx);
        const RealInterval weight = 2.0 * (sq_prev - sq_next);
        total = total + g_factor(panel) * weight;
        sq_prev = sq_next;
    }
    if (!(total.lo > 0.0)) throw QuadratureFailed("constant_A: enclosure failed to stay positive");
    return total;
}

} // namespace stokes::quadrature
