#pragma once

#include <vector>

#include "stokes/certificate.hpp"
#include "stokes/integrator.hpp"
#include "stokes/quadrature.hpp"

// End-to-end runs: certified initial enclosure deep in the tail, transport to
// the section {Re U = 0}, and the splitting-constant estimate.
namespace stokes::pipeline {

struct InitialSet {
    Cplx U0;
    double eta_star = 1000.0;
    double rho0 = 7.12;
    RealInterval b1_tilde, b2_tilde;
    RealInterval w_radius, xy_radius;
    std::array<ComplexBox, 6> boxes; // (U, W, X, Y, A, B)
    certificate::Report cert;
};

// Build the certified initial enclosure at U0 = re_u0 - i rho0: ball radii
// from a fresh deep-tail certificate, lifted to the auxiliary variables.
inline InitialSet make_initial_set(double eta_star = 1000.0, double rho0 = 7.12,
                                   double re_u0 = -2000.0, double gamma = 0.5) {
    if (!(re_u0 <= -eta_star))
        throw NotCertified("initial set: Re U0 must be <= -eta_star (outside the certified tail)");
    const RealInterval reach = certificate::rho_reach(6.24, gamma);
    if (!(rho0 >= reach.hi))
        throw NotCertified("initial set: rho0 below the sector reach rho(kappa*, gamma)");

    InitialSet s;
    s.U0 = Cplx(re_u0, -rho0);
    s.eta_star = eta_star;
    s.rho0 = rho0;
    s.cert = certificate::scan_tail(eta_star, gamma);
    s.b1_tilde = s.cert.b1_tilde;
    s.b2_tilde = s.cert.b2_tilde;

    const ComplexBox U0box(s.U0);
    const RealInterval absU = hull(mag_lower_iv(U0box), mag_upper_iv(U0box));
    s.w_radius = s.b1_tilde * iv_pow3(absU, -8);
    s.xy_radius = s.b2_tilde * iv_pow3(absU, -4);

    const double rw = s.w_radius.hi, rxy = s.xy_radius.hi;
    inner::State<ComplexBox> Z;
    Z.W = ComplexBox(RealInterval(-rw, rw), RealInterval(-rw, rw));
    Z.X = ComplexBox(RealInterval(-rxy, rxy), RealInterval(-rxy, rxy));
    Z.Y = ComplexBox(RealInterval(-rxy, rxy), RealInterval(-rxy, rxy));
    extended::State<ComplexBox> lifted = extended::lift(U0box, Z);
    s.boxes = {lifted.U, lifted.W, lifted.X, lifted.Y, lifted.A, lifted.B};
    return s;
}

enum class SeedKind { Midpoint, Asymptotic };

inline std::array<Cplx, 6> fast_initial_state(const Cplx& U0, SeedKind kind) {
    inner::State<Cplx> Z{};
    if (kind == SeedKind::Asymptotic) Z = inner::asymptotic_seed(U0);
    extended::State<Cplx> s = extended::lift(U0, Z);
    return s.as_array();
}

struct StokesEstimate {
    double rho = 0.0;            // crossing ordinate (-Im U at the section)
    Cplx deltaY{};
    double theta_rho = 0.0;      // |2 Re Y| e^rho
};

inline StokesEstimate theta_from_crossing(const integrator::SectionCrossing& sc) {
    StokesEstimate e;
    const Cplx Y = sc.Y_at_section.mid();
    e.rho = -sc.U_at_section.mid().imag();
    auto [dy, lower] = extended::stable_from_unstable(Y);
    e.deltaY = dy;
    e.theta_rho = lower * std::exp(e.rho);
    return e;
}

inline integrator::SectionCrossing fast_crossing(const Cplx& U0, SeedKind kind,
                                                 const integrator::Config& cfg,
                                                 std::vector<integrator::TrajectoryRecord>* dump = nullptr) {
    integrator::FastIntegrator<taylor::ExtField> fi({}, cfg);
    fi.set_state(0.0, fast_initial_state(U0, kind));
    fi.keep_history(false);
    return integrator::integrate_to_section_fast(fi, cfg, dump);
}

// Richardson extrapolation in 1/rho: polynomial through (1/rho_i, theta_i)
// evaluated at 0.
inline double richardson_extrapolate(const std::vector<StokesEstimate>& es) {
    const size_t n = es.size();
    if (n < 2) throw OutOfRange("richardson_extrapolate needs at least two estimates");
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = 1.0 / es[i].rho;
        y[i] = es[i].theta_rho;
    }
    double out = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double li = 1.0;
        for (size_t j = 0; j < n; ++j)
            if (j != i) li *= (0.0 - x[j]) / (x[i] - x[j]);
        out += y[i] * li;
    }
    return out;
}

} // namespace stokes::pipeline
