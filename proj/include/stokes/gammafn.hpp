#pragma once

#include <cmath>

#include "stokes/interval.hpp"

namespace stokes {

// Gamma(k/12) for k = 12..24, outward double brackets of high-precision
// reference values (verified against the recurrence and reflection checks in
// the test suite).  Everything else on the twelfth-integer grid follows from
// Gamma(x+1) = x Gamma(x).
inline RealInterval gamma_twelfth_base(int k) {
    struct P { double lo, hi; };
    static constexpr P table[13] = {
        {1.0, 1.0},                                        // 12/12
        {0.9582856821728325, 0.9582856821728326},          // 13/12
        {0.9277193336300391, 0.9277193336300392},          // 14/12
        {0.906402477055477, 0.9064024770554772},           // 15/12
        {0.8929795115692492, 0.8929795115692493},          // 16/12
        {0.8864821077509257, 0.8864821077509258},          // 17/12
        {0.8862269254527579, 0.886226925452758},           // 18/12
        {0.891747031634148, 0.8917470316341481},           // 19/12
        {0.9027452929509335, 0.9027452929509336},          // 20/12
        {0.9190625268488832, 0.9190625268488833},          // 21/12
        {0.9406558582567716, 0.9406558582567717},          // 22/12
        {0.9675843510790108, 0.9675843510790109},          // 23/12
        {1.0, 1.0},                                        // 24/12
    };
    if (k < 12 || k > 24) throw OutOfRange("gamma_twelfth_base: k outside 12..24");
    return {table[k - 12].lo, table[k - 12].hi};
}

// Rigorous Gamma(k/12) for any positive k, via the recurrence.
inline RealInterval gamma_twelfth(int k) {
    if (k <= 0) throw OutOfRange("gamma_twelfth needs a positive argument");
    RealInterval shift(1.0);
    while (k > 24) {
        k -= 12;
        shift = shift * (RealInterval(static_cast<double>(k)) / 12.0);
    }
    RealInterval down(1.0);
    while (k < 12) {
        down = down * (RealInterval(static_cast<double>(k)) / 12.0);
        k += 12;
    }
    return shift * gamma_twelfth_base(k) / down;
}

// Rigorous Gamma at x = k/12 given as a double (k recovered by rounding).
inline RealInterval gamma_rigorous(double x) {
    const double kd = x * 12.0;
    const long k = std::lround(kd);
    if (k <= 0 || std::fabs(kd - static_cast<double>(k)) > 1e-9)
        throw OutOfRange("gamma_rigorous supports positive multiples of 1/12");
    return gamma_twelfth(static_cast<int>(k));
}

// Norm constant of the neutral rows of the left-inverse integral operator:
//   G_eta = sqrt(pi) Gamma((eta-1)/2) / (2 Gamma(eta/2)),  eta > 1.
inline RealInterval g_norm_constant(double etaexp) {
    if (!(etaexp > 1.0)) throw ExponentTooSmall("g_norm_constant needs etaexp > 1");
    return iv_sqrt_pi() * gamma_rigorous((etaexp - 1.0) / 2.0) / (2.0 * gamma_rigorous(etaexp / 2.0));
}

} // namespace stokes
