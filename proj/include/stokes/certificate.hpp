#pragma once

#include <array>
#include <optional>
#include <string>

#include "stokes/gammafn.hpp"
#include "stokes/interval.hpp"

// Rigorous evaluation of the contraction certificate for the graph fixed
// point: the zeta / xi / eta / nu cascades, the Lipschitz constant L of the
// fixed-point operator, and the self-mapping margins g1, g2.  All numbers are
// intervals; verdicts use directed endpoints only.
namespace stokes::certificate {

struct Params {
    double kappa = 6.24;   // domain offset; when eta is set the estimates use eta instead
    double gamma = 0.5;    // sector half-angle, in (0, arctan(sqrt(3)/2))
    double rho1 = 38.0;    // W-ball factor, in (1, 60)
    double rho2 = 1.9;     // X/Y-ball factor, in (1, 3)
    std::optional<double> eta{}; // tail cutoff for the deep-tail variant, >= kappa

    double effective_kappa() const { return eta ? *eta : kappa; }
};

enum class Verdict { Certified, Failed };

struct Report {
    Params params;
    RealInterval alpha0, beta0;
    std::array<RealInterval, 5> zeta;
    RealInterval C1_0, C23_0;
    std::array<RealInterval, 6> xi;
    std::array<RealInterval, 10> etac; // eta_0 .. eta_9
    std::array<RealInterval, 6> nu;    // nu_0 .. nu_5
    std::array<RealInterval, 5> nutilde; // nutilde_1 .. nutilde_5
    RealInterval L;
    RealInterval g1, g2;
    RealInterval b1_tilde, b2_tilde;
    Verdict verdict = Verdict::Failed;
    std::string failure_reason;
};

struct ZetaValues {
    std::array<RealInterval, 5> zeta;
    RealInterval C1_0, C23_0;
};

// zeta_0..zeta_4 and the induced remainder constants C_1^0, C_{2,3}^0.
// Gates: zeta_0 < 2, zeta_2 < 8, zeta_4 < 16 must hold on interval bounds.
inline ZetaValues zeta_cascade(double kappa) {
    if (!(kappa >= 1.0)) throw OutOfRange("zeta_cascade needs kappa >= 1");
    const RealInterval k(kappa);
    const RealInterval k2 = sqr(k);
    const RealInterval q = 16.0 / (81.0 * k2);           // |J(U,0)| bound on the domain
    const RealInterval sp = iv_sqrt(1.0 + q);
    const RealInterval sm = iv_sqrt(1.0 - q);

    ZetaValues z;
    z.zeta[0] = q * (1.0 + 3.0 * sp);
    z.zeta[1] = (16.0 / 81.0) * (1.0 + 3.0 * sp);
    z.zeta[2] = q * (6.0 * sp + 8.0 + 128.0 / (81.0 * k2));
    z.zeta[3] = (16.0 / 81.0) * (3.0 / (2.0 * sm) + 6.0 * sp + 6.0 + 128.0 / (81.0 * k2));
    z.zeta[4] = (32.0 / (81.0 * k2))
              * (10.0 + 256.0 / (81.0 * k2) + 512.0 / (2187.0 * sqr(k2))
                 + sp * (12.0 + 368.0 / (81.0 * k2) + 3584.0 / (6561.0 * sqr(k2))));

    if (!(z.zeta[0].hi < 2.0)) throw DenominatorNonpositive("zeta_0 >= 2");
    if (!(z.zeta[2].hi < 8.0)) throw DenominatorNonpositive("zeta_2 >= 8");
    if (!(z.zeta[4].hi < 16.0)) throw DenominatorNonpositive("zeta_4 >= 16");

    z.C23_0 = z.zeta[1] / (2.0 - z.zeta[0]);
    z.C1_0 = z.zeta[3] / (8.0 - z.zeta[2]) + (16.0 / 81.0) / (2.0 - z.zeta[0])
           + (16.0 / (81.0 * k2)) * z.zeta[3] / (16.0 - z.zeta[4]);
    return z;
}

// First-iterate bounds: |F_1[0]| <= alpha0 |U|^{-8/3}, |F_j[0]| <= beta0 |U|^{-4/3}.
inline std::pair<RealInterval, RealInterval> alpha_beta0(double kappa) {
    const ZetaValues z = zeta_cascade(kappa);
    const RealInterval k(kappa);
    const RealInterval k2 = sqr(k);
    const RealInterval alpha0 =
        RealInterval(8.0) / 243.0
        + (32.0 * iv_sqrt_pi() * gamma_rigorous(7.0 / 3.0)) / (729.0 * gamma_rigorous(17.0 / 6.0))
          * z.C1_0 / k2;
    const RealInterval beta0 =
        RealInterval(2.0) / 9.0
        + (14.0 * iv_sqrt_pi() * gamma_rigorous(2.0 / 3.0)) / (81.0 * gamma_rigorous(7.0 / 6.0))
        + ((iv_sqrt_pi() * gamma_rigorous(7.0 / 6.0)) / (9.0 * gamma_rigorous(5.0 / 3.0)) / k
           + (2.0 * iv_sqrt_pi() * gamma_rigorous(5.0 / 3.0)) / (81.0 * gamma_rigorous(13.0 / 6.0)) / k2)
          * z.C23_0;
    return {alpha0, beta0};
}

struct CascadeValues {
    std::array<RealInterval, 6> xi;
    std::array<RealInterval, 10> etac;
    std::array<RealInterval, 6> nu;
};

// xi (bounds on J and its derivatives over the ball), eta (bounds on the
// derivatives of K) and nu (bounds on the derivatives of R).  alpha, beta are
// the ball radii rho1*alpha0, rho2*beta0.  Gates: xi_0/k^2 < 1, eta_2/k^2 < 1.
inline CascadeValues xi_eta_nu_cascade(double kappa, const RealInterval& alpha,
                                       const RealInterval& beta) {
    const RealInterval k(kappa);
    const RealInterval k2 = sqr(k);
    const RealInterval k3 = k2 * k;
    const RealInterval k4 = sqr(k2);

    CascadeValues c;
    auto& xi = c.xi;
    xi[0] = (16.0 + 216.0 * beta) / 81.0 + 16.0 * beta / (27.0 * k) + (16.0 * alpha + 48.0 * sqr(beta)) / (27.0 * k2)
          + 8.0 * alpha * beta / (9.0 * k3) + 4.0 * sqr(alpha) / (9.0 * k4);
    xi[1] = (32.0 + 144.0 * beta) / 81.0 + 80.0 * beta / (81.0 * k) + (64.0 * alpha + 192.0 * sqr(beta)) / (81.0 * k2)
          + 8.0 * alpha * beta / (9.0 * k3) + 8.0 * sqr(alpha) / (27.0 * k4);
    xi[2] = RealInterval(16.0) / 27.0 + 8.0 * beta / (9.0 * k) + 8.0 * alpha / (9.0 * k2);
    xi[3] = RealInterval(4.0) / 3.0 + 8.0 / (27.0 * k) + 16.0 * beta / (9.0 * k2) + 4.0 * alpha / (9.0 * k3);
    xi[4] = RealInterval(64.0) / 81.0 + 8.0 * beta / (9.0 * k) + 16.0 * alpha / (27.0 * k2);
    xi[5] = RealInterval(8.0) / 9.0 + 40.0 / (81.0 * k) + 64.0 * beta / (27.0 * k2) + 4.0 * alpha / (9.0 * k3);

    const RealInterval xi0k2 = xi[0] / k2;
    if (!(xi0k2.hi < 1.0)) throw GateFailed("xi_0 / kappa^2 < 1");

    auto& e = c.etac;
    e[0] = iv_sqrt(1.0 - xi0k2);
    const RealInterval e0_3 = e[0] * sqr(e[0]);
    const RealInterval e0_5 = e0_3 * sqr(e[0]);
    const RealInterval denom4 = 4.0 - xi[0] / (e[0] * k2);
    if (!(denom4.lo > 0.0)) throw GateFailed("4 - xi_0/(eta_0 kappa^2) > 0");
    e[1] = 4.0 * xi[0] / (9.0 * e[0] * denom4) + xi[1] / (6.0 * e0_3) + sqr(alpha) / (2.0 * k2);
    e[2] = 1.5 * alpha + xi[2] / (6.0 * e0_3);
    e[3] = xi[3] / (6.0 * e0_3);
    e[4] = alpha + xi[2] / (9.0 * e0_3) + xi[4] / (6.0 * e0_3) + xi[1] * xi[2] / (4.0 * e0_5 * k2);
    e[5] = xi[3] / (9.0 * e0_3) + xi[5] / (6.0 * e0_3) + xi[1] * xi[3] / (4.0 * e0_5 * k2);
    e[6] = RealInterval(1.5) + 4.0 / (27.0 * e0_3 * k2) + sqr(xi[2]) / (4.0 * e0_5 * k4);
    e[7] = 2.0 / (27.0 * e0_3) + xi[2] * xi[3] / (4.0 * e0_5 * k);
    e[8] = 5.0 / (27.0 * e0_3) + sqr(xi[3]) / (4.0 * e0_5);
    e[9] = 1.0 / (9.0 * e0_3) + sqr(xi[3]) / (4.0 * e0_5);

    const RealInterval eta2k2 = e[2] / k2;
    if (!(eta2k2.hi < 1.0)) throw GateFailed("eta_2 / kappa^2 < 1");

    auto& n = c.nu;
    n[0] = sqr(1.0 - eta2k2);
    n[1] = e[4] / n[0] + e[2] * e[4] / (n[0] * k2) + e[1] * e[6] / n[0];
    n[2] = e[5] / n[0] + e[2] * e[5] / (n[0] * k2) + e[1] * e[7] / (n[0] * k3);
    n[3] = e[7] / (n[0] * k) + e[2] * e[7] / (n[0] * k3) + beta * e[6] / n[0]
         + 2.0 * beta * e[2] * e[6] / (n[0] * k2) + e[3] * e[6] / n[0];
    n[4] = e[8] / n[0] + e[2] * e[8] / (n[0] * k2) + e[2] / n[0] + sqr(e[2]) / (n[0] * k2)
         + beta * e[7] / (n[0] * k) + 2.0 * beta * e[2] * e[7] / (n[0] * k3) + e[3] * e[7] / (n[0] * k);
    n[5] = e[9] / n[0] + e[2] * e[9] / (n[0] * k2) + beta * e[7] / (n[0] * k)
         + 2.0 * beta * e[2] * e[7] / (n[0] * k3) + e[3] * e[7] / (n[0] * k);
    return c;
}

// Enclosure of 1 / (sin(gamma) cos(gamma)^{4/3}).
inline RealInterval sector_factor(double gamma) {
    const RealInterval g(gamma);
    const RealInterval sg = iv_sin_small(g);
    const RealInterval cg = iv_cos_small(g);
    if (!(sg.lo > 0.0) || !(cg.lo > 0.0)) throw OutOfRange("sector_factor: gamma out of range");
    return 1.0 / (sg * iv_pow3(cg, 4));
}

// gamma must satisfy 0 < gamma < arctan(sqrt(3)/2), checked algebraically as
// 2 sin(gamma) < sqrt(3) cos(gamma).
inline void check_gamma(double gamma) {
    if (!(gamma > 0.0)) throw OutOfRange("gamma must be positive");
    const RealInterval g(gamma);
    const RealInterval lhs = 2.0 * iv_sin_small(g);
    const RealInterval rhs = iv_sqrt(RealInterval(3.0)) * iv_cos_small(g);
    if (!(lhs.hi < rhs.lo)) throw OutOfRange("gamma must be below arctan(sqrt(3)/2)");
}

inline void check_params(const Params& p) {
    if (!(p.kappa >= 3.0)) throw OutOfRange("kappa must be >= 3");
    if (!(p.rho1 > 1.0 && p.rho1 < 60.0)) throw OutOfRange("rho1 must lie in (1, 60)");
    if (!(p.rho2 > 1.0 && p.rho2 < 3.0)) throw OutOfRange("rho2 must lie in (1, 3)");
    if (p.eta && !(*p.eta >= p.kappa)) throw OutOfRange("eta must be >= kappa");
    check_gamma(p.gamma);
}

// Full certificate: one pass computes every constant; L and g1/g2 are derived
// from that same pass.  With eta set, all kappa-dependent estimates are
// evaluated at eta (the deep-tail domain keeps |U| >= eta).
inline Report certify(const Params& p) {
    check_params(p);
    const double k = p.effective_kappa();

    Report r;
    r.params = p;
    const ZetaValues z = zeta_cascade(k);
    r.zeta = z.zeta;
    r.C1_0 = z.C1_0;
    r.C23_0 = z.C23_0;
    auto [a0, b0] = alpha_beta0(k);
    r.alpha0 = a0;
    r.beta0 = b0;
    r.b1_tilde = RealInterval(p.rho1) * a0;
    r.b2_tilde = RealInterval(p.rho2) * b0;

    const RealInterval alpha = r.b1_tilde, beta = r.b2_tilde;
    const CascadeValues c = xi_eta_nu_cascade(k, alpha, beta);
    r.xi = c.xi;
    r.etac = c.etac;
    r.nu = c.nu;

    const RealInterval cW = iv_sqrt_pi() * gamma_rigorous(4.0 / 3.0) / (2.0 * gamma_rigorous(11.0 / 6.0));
    const RealInterval f = sector_factor(p.gamma);
    r.nutilde[0] = r.nu[1] * cW;
    r.nutilde[1] = r.nu[2] * cW;
    r.nutilde[2] = r.nu[3] * f;
    r.nutilde[3] = r.nu[4] * f;
    r.nutilde[4] = r.nu[5] * f;

    const RealInterval k2 = sqr(RealInterval(k));
    const RealInterval L1 = r.nutilde[0] / k2 + 2.0 * r.nutilde[1];
    const RealInterval L2 = (r.nutilde[2] + r.nutilde[3] + r.nutilde[4]) / k2;
    r.L = RealInterval(std::max(L1.lo, L2.lo), std::max(L1.hi, L2.hi)); // interval max

    r.g1 = (RealInterval(p.rho1) - 1.0 - r.nutilde[0] / k2 * p.rho1) * a0
         - 2.0 * r.nutilde[1] * p.rho2 * b0;
    r.g2 = (RealInterval(p.rho2) - 1.0 - (r.nutilde[3] + r.nutilde[4]) / k2 * p.rho2) * b0
         - r.nutilde[2] / k2 * p.rho1 * a0;

    if (r.L.hi < 1.0 && r.g1.lo >= 0.0 && r.g2.lo >= 0.0) {
        r.verdict = Verdict::Certified;
    } else {
        r.verdict = Verdict::Failed;
        if (!(r.L.hi < 1.0)) r.failure_reason = "L >= 1";
        else if (!(r.g1.lo >= 0.0)) r.failure_reason = "g1 < 0";
        else r.failure_reason = "g2 < 0";
    }
    return r;
}

// Lipschitz constant and the nutilde factors alone (narrow entry point;
// certify computes them too).
inline std::pair<std::array<RealInterval, 5>, RealInterval> lipschitz_L(const Params& p) {
    Report r = certify(p);
    return {r.nutilde, r.L};
}

inline std::pair<RealInterval, RealInterval> wellposedness(const Params& p) {
    Report r = certify(p);
    return {r.g1, r.g2};
}

// Deep-tail scan: smallest rho2 on a 0.01 grid (rho1 = 20 rho2) whose
// certificate at |U| >= eta is Certified; the ball radii b~ shrink with rho2.
inline Report scan_tail(double eta, double gamma, double target_b1 = 0.7,
                        double target_b2 = 0.71) {
    Params p;
    p.kappa = 6.24;
    p.gamma = gamma;
    p.eta = eta;
    for (int i = 1; i < 200; ++i) {
        const double rho2 = 1.0 + 0.01 * i;
        if (!(rho2 < 3.0)) break;
        const double rho1 = 20.0 * rho2;
        if (!(rho1 < 60.0)) break;
        p.rho1 = rho1;
        p.rho2 = rho2;
        Report r;
        try {
            r = certify(p);
        } catch (const GateFailed&) {
            continue;
        }
        if (r.verdict == Verdict::Certified && r.b1_tilde.hi <= target_b1
            && r.b2_tilde.hi <= target_b2)
            return r;
    }
    throw NotCertified("scan_tail: no certified (rho1, rho2) with the requested ball bounds");
}

// rho(kappa, gamma) = kappa / cos(gamma): how deep the sector domain reaches
// on the imaginary axis.
inline RealInterval rho_reach(double kappa, double gamma) {
    return RealInterval(kappa) / iv_cos_small(RealInterval(gamma));
}

} // namespace stokes::certificate
