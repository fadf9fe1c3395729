#pragma once

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <vector>

#include "stokes/linalg.hpp"
#include "stokes/taylor.hpp"

namespace stokes::integrator {

enum class Mode { Rigorous, Fast };

struct Config {
    int order = 20;          // Taylor order (>= 2)
    double h_init = 0.25;
    double h_min = 1e-6;
    double h_max = 1.0;
    double tol = 1e-13;      // fast mode error-per-step target
    Mode mode = Mode::Fast;
    long max_steps = 100000;
    int bisections = 8;      // crossing refinement depth
    std::optional<double> guard_im_below{}; // require Im U < this along the run
};

// ---------------------------------------------------------------------------
// Fast mode: point Taylor steps with proportional step control and dense
// output.  Bitwise deterministic for fixed config.

template <class Field>
class FastIntegrator {
public:
    static constexpr int CD = Field::dim;
    using StateArr = std::array<Cplx, CD>;

    struct Step {
        double t0 = 0.0;
        double h = 0.0;
        std::array<std::vector<Cplx>, CD> coeffs;
    };

    FastIntegrator(Field f, Config c) : field_(f), cfg_(c) {
        if (cfg_.order < 2) throw OutOfRange("Taylor order must be >= 2");
    }

    void set_state(double t, const StateArr& x) {
        t_ = t;
        x_ = x;
        steps_.clear();
    }

    double time() const { return t_; }
    const StateArr& state() const { return x_; }
    const std::vector<Step>& steps() const { return steps_; }
    void keep_history(bool k) { keep_history_ = k; }

    // One accepted step; returns the step size used.
    double step_once(double h_cap = 0.0) {
        auto coeffs = taylor::ode_coefficients(field_, x_, cfg_.order);
        double h = propose_h(coeffs);
        if (h_cap > 0.0) h = std::min(h, h_cap);
        if (h < cfg_.h_min) throw StepUnderflow("fast step below h_min");
        Step st{t_, h, std::move(coeffs)};
        for (int i = 0; i < CD; ++i)
            x_[static_cast<size_t>(i)] = taylor::poly_eval(st.coeffs[static_cast<size_t>(i)], h, cfg_.order);
        t_ += h;
        if (keep_history_) steps_.push_back(std::move(st));
        else last_step_ = std::move(st);
        return h;
    }

    const Step& last_step() const { return keep_history_ ? steps_.back() : last_step_; }

    StateArr eval_step(const Step& s, double tau) const {
        StateArr r;
        for (int i = 0; i < CD; ++i)
            r[static_cast<size_t>(i)] = taylor::poly_eval(s.coeffs[static_cast<size_t>(i)], tau, cfg_.order);
        return r;
    }

private:
    double propose_h(const std::array<std::vector<Cplx>, CD>& c) const {
        double scale = 1.0;
        for (int i = 0; i < CD; ++i) scale = std::max(scale, std::abs(c[static_cast<size_t>(i)][0]));
        auto tail_norm = [&](int k) {
            double m = 0.0;
            for (int i = 0; i < CD; ++i)
                m = std::max(m, std::abs(c[static_cast<size_t>(i)][static_cast<size_t>(k)]));
            return m;
        };
        const double target = cfg_.tol * scale;
        double h = cfg_.h_max;
        for (int k : {cfg_.order - 1, cfg_.order}) {
            const double nk = tail_norm(k);
            if (nk > 0.0)
                h = std::min(h, 0.9 * std::pow(target / nk, 1.0 / static_cast<double>(k)));
        }
        return std::max(h, cfg_.h_min);
    }

    Field field_;
    Config cfg_;
    double t_ = 0.0;
    StateArr x_{};
    bool keep_history_ = true;
    std::vector<Step> steps_;
    Step last_step_;
};

// ---------------------------------------------------------------------------
// Rigorous mode: interval Taylor with a Lohner doubleton set representation
//   X_active = c + C [r0] + Q [r]
// over the active variables; Q is re-orthogonalized each step (QR) to control
// wrapping, C transports the initial box exactly through the midpoint
// Jacobian, and the Lagrange remainder comes from order+1 coefficients over
// an a-priori enclosure of the step.
//
// Fields may declare `static constexpr int inert = k`: the first k variables
// are carried but never read by the field (their Jacobian columns vanish).
// They are transported affinely outside the doubleton, so their accumulated
// width never wraps into the active block.  The extended system carries U
// this way: only section detection needs it.

namespace detail {
template <class F, class = void>
struct inert_count {
    static constexpr int value = 0;
};
template <class F>
struct inert_count<F, std::void_t<decltype(F::inert)>> {
    static constexpr int value = F::inert;
};
} // namespace detail

template <class Field>
class LohnerIntegrator {
public:
    static constexpr int CD = Field::dim;
    static constexpr int NI = detail::inert_count<Field>::value; // inert prefix
    static constexpr int AD = CD - NI;                           // active complex dim
    static constexpr int RD = 2 * AD;
    using JetT = taylor::Jet<ComplexBox, AD>;
    using BoxArr = std::array<ComplexBox, CD>;
    template <int D> using DMat = linalg::DMat<D>;
    template <int D> using DVec = linalg::DVec<D>;
    template <int D> using IMat = linalg::IMat<D>;
    template <int D> using IVec = linalg::IVec<D>;

    struct Rep {
        double t = 0.0;
        DVec<2 * CD> c{};                // centers of every variable
        DMat<RD> C{};                    // initial-box transport (active block)
        IVec<RD> r0{};
        DMat<RD> Q{};
        IVec<RD> r{};
        std::array<ComplexBox, CD> ext{}; // 0-centered displacement of inert vars
    };

    LohnerIntegrator(Field f, Config c) : field_(f), cfg_(c), h_cur_(c.h_init) {}

    void set_initial(double t, const BoxArr& x0) {
        rep_ = Rep{};
        rep_.t = t;
        for (int i = 0; i < CD; ++i) {
            const Cplx m = x0[static_cast<size_t>(i)].mid();
            rep_.c[static_cast<size_t>(2 * i)] = m.real();
            rep_.c[static_cast<size_t>(2 * i + 1)] = m.imag();
            if (i < NI) {
                rep_.ext[static_cast<size_t>(i)] =
                    ComplexBox(x0[static_cast<size_t>(i)].re - RealInterval(m.real()),
                               x0[static_cast<size_t>(i)].im - RealInterval(m.imag()));
            } else {
                const int a = i - NI;
                rep_.r0[static_cast<size_t>(2 * a)] =
                    x0[static_cast<size_t>(i)].re - RealInterval(m.real());
                rep_.r0[static_cast<size_t>(2 * a + 1)] =
                    x0[static_cast<size_t>(i)].im - RealInterval(m.imag());
            }
        }
        rep_.C = linalg::identity<RD>();
        rep_.Q = linalg::identity<RD>();
        h_cur_ = cfg_.h_init;
    }

    const Rep& rep() const { return rep_; }
    double time() const { return rep_.t; }

    static IVec<RD> active_disp(const Rep& rp) {
        IVec<RD> d = linalg::mat_vec<RD>(rp.C, rp.r0);
        IVec<RD> qr = linalg::mat_vec<RD>(rp.Q, rp.r);
        for (int i = 0; i < RD; ++i)
            d[static_cast<size_t>(i)] = d[static_cast<size_t>(i)] + qr[static_cast<size_t>(i)];
        return d;
    }

    static BoxArr hull_of(const Rep& rp) {
        IVec<RD> d = active_disp(rp);
        BoxArr b;
        for (int i = 0; i < CD; ++i) {
            const RealInterval cr(rp.c[static_cast<size_t>(2 * i)]);
            const RealInterval ci(rp.c[static_cast<size_t>(2 * i + 1)]);
            if (i < NI) {
                b[static_cast<size_t>(i)] = ComplexBox(cr + rp.ext[static_cast<size_t>(i)].re,
                                                       ci + rp.ext[static_cast<size_t>(i)].im);
            } else {
                const int a = i - NI;
                b[static_cast<size_t>(i)] = ComplexBox(cr + d[static_cast<size_t>(2 * a)],
                                                       ci + d[static_cast<size_t>(2 * a + 1)]);
            }
        }
        return b;
    }

    BoxArr hull() const { return hull_of(rep_); }

    // component widths, in the (re, im) interleaved order
    std::array<RealInterval, 2 * CD> hull_real() const {
        BoxArr b = hull();
        std::array<RealInterval, 2 * CD> v;
        for (int i = 0; i < CD; ++i) {
            v[static_cast<size_t>(2 * i)] = b[static_cast<size_t>(i)].re;
            v[static_cast<size_t>(2 * i + 1)] = b[static_cast<size_t>(i)].im;
        }
        return v;
    }

    double max_width() const {
        double w = 0.0;
        for (const auto& b : hull()) w = std::max(w, b.width());
        return w;
    }

    // Data saved per accepted step, enough to re-evaluate the set at any
    // intermediate time (section refinement and containment checks).
    struct StepData {
        double t0 = 0.0, h = 0.0;
        std::array<std::vector<ComplexBox>, CD> center;
        std::array<std::array<std::vector<ComplexBox>, AD>, CD> vjet; // d x_i / d a0_j
        BoxArr rem_state{};
        std::array<std::array<ComplexBox, AD>, CD> rem_var{};
        Rep pre;
    };

    const StepData& last_step() const { return last_; }

    // Advance by one accepted step (halving h on enclosure failures).
    double step_once() {
        double h = h_cur_;
        for (;;) {
            if (h < cfg_.h_min) throw StepUnderflow("rigorous step below h_min");
            if (try_step(h)) break;
            h *= 0.5;
        }
        h_cur_ = std::min(h * 1.2, cfg_.h_max);
        return h;
    }

    // Set enclosure at time t0 + tau for tau inside the last accepted step.
    BoxArr eval_last(const RealInterval& tau) const {
        const int N = cfg_.order;
        IVec<RD> base = active_disp(last_.pre);
        RealInterval taup(1.0);
        for (int k = 0; k <= N; ++k) taup = taup * tau;

        BoxArr out;
        for (int i = 0; i < CD; ++i) {
            ComplexBox v = taylor::poly_eval_iv(last_.center[static_cast<size_t>(i)], tau, N)
                         + last_.rem_state[static_cast<size_t>(i)] * taup;
            for (int j = 0; j < AD; ++j) {
                ComplexBox jij =
                    taylor::poly_eval_iv(last_.vjet[static_cast<size_t>(i)][static_cast<size_t>(j)], tau, N)
                    + last_.rem_var[static_cast<size_t>(i)][static_cast<size_t>(j)] * taup;
                ComplexBox dx0(base[static_cast<size_t>(2 * j)], base[static_cast<size_t>(2 * j + 1)]);
                v = v + jij * dx0;
            }
            if (i < NI) v = v + last_.pre.ext[static_cast<size_t>(i)];
            out[static_cast<size_t>(i)] = v;
        }
        return out;
    }

private:
    static bool contained(const BoxArr& a, const BoxArr& b) {
        for (int i = 0; i < CD; ++i)
            if (!b[static_cast<size_t>(i)].contains(a[static_cast<size_t>(i)])) return false;
        return true;
    }

    static BoxArr inflate(const BoxArr& a, double rel, double abs) {
        BoxArr r;
        for (int i = 0; i < CD; ++i) {
            const ComplexBox& z = a[static_cast<size_t>(i)];
            const double wr = rel * z.re.width() + abs;
            const double wi = rel * z.im.width() + abs;
            r[static_cast<size_t>(i)] = ComplexBox(RealInterval(z.re.lo - wr, z.re.hi + wr),
                                                   RealInterval(z.im.lo - wi, z.im.hi + wi));
        }
        return r;
    }

    // First-order enclosure of the flow of H over [0, h]: a box C with
    // H + [0,h] F(C) inside C.  Each iterate re-anchors on the fresh Picard
    // image (the image, not the stale candidate, carries the right widths).
    std::optional<BoxArr> apriori(const BoxArr& H, double h) const {
        const RealInterval th(0.0, h);
        BoxArr cand = inflate(H, 0.01, 1e-16);
        for (int it = 0; it < 15; ++it) {
            std::array<ComplexBox, CD> fc;
            try {
                fc = field_(cand);
            } catch (const Error&) {
                return std::nullopt; // candidate left the field's domain
            }
            BoxArr img;
            for (int i = 0; i < CD; ++i)
                img[static_cast<size_t>(i)] = H[static_cast<size_t>(i)] + th * fc[static_cast<size_t>(i)];
            if (contained(img, cand)) return cand;
            cand = inflate(img, 0.1 + 0.1 * it, 1e-16);
        }
        return std::nullopt;
    }

    // Rough enclosure of the variational matrix over the step:
    // M with I + [0,h] DF(E) M inside M (rows: all variables, columns: active).
    std::optional<std::array<std::array<ComplexBox, AD>, CD>>
    rough_variational(const BoxArr& E, double h) const {
        std::array<JetT, CD> je;
        for (int i = 0; i < CD; ++i) {
            je[static_cast<size_t>(i)] = JetT(E[static_cast<size_t>(i)]);
            if (i >= NI) je[static_cast<size_t>(i)].d[static_cast<size_t>(i - NI)] = ComplexBox(1.0);
        }
        std::array<JetT, CD> fj;
        try {
            fj = field_(je);
        } catch (const Error&) {
            return std::nullopt;
        }
        // DF[i][m] = d f_i / d x_{NI+m}
        std::array<std::array<ComplexBox, AD>, CD> DF;
        for (int i = 0; i < CD; ++i)
            for (int m = 0; m < AD; ++m)
                DF[static_cast<size_t>(i)][static_cast<size_t>(m)] = fj[static_cast<size_t>(i)].d[static_cast<size_t>(m)];

        std::array<std::array<ComplexBox, AD>, CD> M{};
        for (int i = NI; i < CD; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(i - NI)] = ComplexBox(1.0);
        const RealInterval th(0.0, h);
        for (int it = 0; it < 20; ++it) {
            std::array<std::array<ComplexBox, AD>, CD> M2{};
            bool inside = true;
            for (int i = 0; i < CD; ++i)
                for (int j = 0; j < AD; ++j) {
                    ComplexBox s = (i - NI == j && i >= NI) ? ComplexBox(1.0) : ComplexBox(0.0);
                    ComplexBox acc(0.0);
                    for (int m = 0; m < AD; ++m)
                        acc = acc + DF[static_cast<size_t>(i)][static_cast<size_t>(m)]
                                  * M[static_cast<size_t>(m + NI)][static_cast<size_t>(j)];
                    s = s + th * acc;
                    M2[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
                    if (!M[static_cast<size_t>(i)][static_cast<size_t>(j)].contains(s)) inside = false;
                }
            if (inside) return M2;
            for (int i = 0; i < CD; ++i)
                for (int j = 0; j < AD; ++j) {
                    const ComplexBox& m = M2[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    M[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        widen(m, (0.05 + 0.1 * it) * m.width() + 1e-15);
                }
        }
        return std::nullopt;
    }

    bool try_step(double h) {
        const int N = cfg_.order;
        const BoxArr H = hull();
        auto Eopt = apriori(H, h);
        if (!Eopt) { if (getenv("STOKES_DEBUG")) fprintf(stderr, "apriori fail h=%g\n", h); return false; }
        const BoxArr& E = *Eopt;
        auto Vrough = rough_variational(E, h);
        if (!Vrough) { if (getenv("STOKES_DEBUG")) fprintf(stderr, "rough fail h=%g\n", h); return false; }

        // center coefficients (point start, interval arithmetic)
        std::array<ComplexBox, CD> c0;
        for (int i = 0; i < CD; ++i)
            c0[static_cast<size_t>(i)] = ComplexBox(Cplx(rep_.c[static_cast<size_t>(2 * i)],
                                                         rep_.c[static_cast<size_t>(2 * i + 1)]));
        auto center = taylor::ode_coefficients(field_, c0, N);

        // set-Jacobian coefficients: value = hull, jets = identity on actives
        std::array<JetT, CD> s0;
        for (int i = 0; i < CD; ++i) {
            s0[static_cast<size_t>(i)] = JetT(H[static_cast<size_t>(i)]);
            if (i >= NI) s0[static_cast<size_t>(i)].d[static_cast<size_t>(i - NI)] = ComplexBox(1.0);
        }
        auto setjet = taylor::ode_coefficients(field_, s0, N);

        // remainder coefficients: value over the enclosure, jets over the
        // rough variational enclosure
        std::array<JetT, CD> e0;
        for (int i = 0; i < CD; ++i) {
            e0[static_cast<size_t>(i)] = JetT(E[static_cast<size_t>(i)]);
            for (int j = 0; j < AD; ++j)
                e0[static_cast<size_t>(i)].d[static_cast<size_t>(j)] =
                    (*Vrough)[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        auto erun = taylor::ode_coefficients(field_, e0, N + 1);

        StepData sd;
        sd.t0 = rep_.t;
        sd.h = h;
        sd.pre = rep_;
        RealInterval hpow(1.0);
        for (int k = 0; k <= N; ++k) hpow = hpow * RealInterval(h);

        std::array<ComplexBox, CD> Tc;
        std::array<std::array<ComplexBox, AD>, CD> Jc;
        for (int i = 0; i < CD; ++i) {
            sd.center[static_cast<size_t>(i)] = center[static_cast<size_t>(i)];
            sd.rem_state[static_cast<size_t>(i)] = erun[static_cast<size_t>(i)][static_cast<size_t>(N + 1)].v;
            Tc[static_cast<size_t>(i)] = taylor::poly_eval_iv(center[static_cast<size_t>(i)], RealInterval(h), N)
                                       + sd.rem_state[static_cast<size_t>(i)] * hpow;
            for (int j = 0; j < AD; ++j) {
                std::vector<ComplexBox> col(static_cast<size_t>(N) + 1);
                for (int k = 0; k <= N; ++k)
                    col[static_cast<size_t>(k)] = setjet[static_cast<size_t>(i)][static_cast<size_t>(k)].d[static_cast<size_t>(j)];
                sd.vjet[static_cast<size_t>(i)][static_cast<size_t>(j)] = col;
                sd.rem_var[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    erun[static_cast<size_t>(i)][static_cast<size_t>(N + 1)].d[static_cast<size_t>(j)];
                Jc[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    taylor::poly_eval_iv(col, RealInterval(h), N)
                    + sd.rem_var[static_cast<size_t>(i)][static_cast<size_t>(j)] * hpow;
            }
        }

        // realify the active block of the Jacobian
        IMat<RD> JI;
        for (int i = 0; i < AD; ++i)
            for (int j = 0; j < AD; ++j) {
                const ComplexBox& z = Jc[static_cast<size_t>(i + NI)][static_cast<size_t>(j)];
                JI[static_cast<size_t>((2 * i) * RD + 2 * j)] = z.re;
                JI[static_cast<size_t>((2 * i) * RD + 2 * j + 1)] = -z.im;
                JI[static_cast<size_t>((2 * i + 1) * RD + 2 * j)] = z.im;
                JI[static_cast<size_t>((2 * i + 1) * RD + 2 * j + 1)] = z.re;
            }

        // doubleton transport of the active block
        IMat<RD> JC = linalg::mat_mul<RD>(JI, linalg::to_interval<RD>(rep_.C));
        IMat<RD> JQ = linalg::mat_mul<RD>(JI, linalg::to_interval<RD>(rep_.Q));
        DMat<RD> Cn = linalg::midpoint<RD>(JC);
        IVec<RD> e1 = linalg::mat_vec<RD>(linalg::sub<RD>(JC, Cn), rep_.r0);
        DMat<RD> Qn = linalg::qr_q<RD>(linalg::midpoint<RD>(JQ));

        Rep nr;
        nr.t = rep_.t + h;
        nr.C = Cn;
        nr.Q = Qn;
        nr.r0 = rep_.r0;
        for (int i = 0; i < CD; ++i) {
            const Cplx m = Tc[static_cast<size_t>(i)].mid();
            nr.c[static_cast<size_t>(2 * i)] = m.real();
            nr.c[static_cast<size_t>(2 * i + 1)] = m.imag();
        }
        IVec<RD> delta;
        for (int i = 0; i < AD; ++i) {
            delta[static_cast<size_t>(2 * i)] =
                Tc[static_cast<size_t>(i + NI)].re - RealInterval(nr.c[static_cast<size_t>(2 * (i + NI))]);
            delta[static_cast<size_t>(2 * i + 1)] =
                Tc[static_cast<size_t>(i + NI)].im - RealInterval(nr.c[static_cast<size_t>(2 * (i + NI) + 1)]);
        }
        for (int i = 0; i < RD; ++i)
            delta[static_cast<size_t>(i)] = delta[static_cast<size_t>(i)] + e1[static_cast<size_t>(i)];

        try {
            linalg::ISolver<RD> solver(Qn);
            IMat<RD> QinvJQ = solver.solve_mat(JQ);
            IVec<RD> rn = linalg::mat_vec<RD>(QinvJQ, rep_.r);
            IVec<RD> extra = solver.solve(delta);
            for (int i = 0; i < RD; ++i)
                rn[static_cast<size_t>(i)] = rn[static_cast<size_t>(i)] + extra[static_cast<size_t>(i)];
            nr.r = rn;
        } catch (const EnclosureFailed&) {
            if (getenv("STOKES_DEBUG")) fprintf(stderr, "solver fail h=%g\n", h);
            return false;
        }

        // inert rows: affine transport, identity in their own initial value
        if (NI > 0) {
            IVec<RD> disp = active_disp(rep_);
            for (int i = 0; i < NI; ++i) {
                ComplexBox u = Tc[static_cast<size_t>(i)] + rep_.ext[static_cast<size_t>(i)];
                for (int j = 0; j < AD; ++j) {
                    ComplexBox dx0(disp[static_cast<size_t>(2 * j)], disp[static_cast<size_t>(2 * j + 1)]);
                    u = u + Jc[static_cast<size_t>(i)][static_cast<size_t>(j)] * dx0;
                }
                const Cplx m = u.mid();
                nr.c[static_cast<size_t>(2 * i)] = m.real();
                nr.c[static_cast<size_t>(2 * i + 1)] = m.imag();
                nr.ext[static_cast<size_t>(i)] =
                    ComplexBox(u.re - RealInterval(m.real()), u.im - RealInterval(m.imag()));
            }
        }

        last_ = std::move(sd);
        rep_ = nr;
        return true;
    }

    Field field_;
    Config cfg_;
    double h_cur_;
    Rep rep_;
    StepData last_;
};

// ---------------------------------------------------------------------------
// Section crossing at {Re U = 0} (variable 0), for fields flowing with
// dU ~ 1.  Bolzano witnesses: the pre state has Re U < 0 surely, the post
// state Re U > 0 surely; the crossing enclosure is the union over the
// bracketing time range.

struct SectionCrossing {
    RealInterval t_cross;
    ComplexBox U_at_section;
    ComplexBox W_at_section, X_at_section, Y_at_section;
    ComplexBox A_at_section, B_at_section;
    RealInterval reY_interval;
    // Bolzano witness pair
    ComplexBox U_before, U_after;
};

struct TrajectoryRecord {
    double t;
    std::array<Cplx, 6> mid;
    std::array<double, 12> widths; // zero in fast mode
};

template <class Field>
SectionCrossing integrate_to_section_fast(FastIntegrator<Field>& fi, const Config& cfg,
                                          std::vector<TrajectoryRecord>* dump = nullptr) {
    static_assert(Field::dim == 6, "section crossing expects the 6-variable system");
    if (fi.state()[0].real() >= 0.0) throw NoCrossing("initial state already past the section");
    long n = 0;
    auto record = [&]() {
        if (!dump) return;
        TrajectoryRecord r;
        r.t = fi.time();
        for (int i = 0; i < 6; ++i) r.mid[static_cast<size_t>(i)] = fi.state()[static_cast<size_t>(i)];
        r.widths.fill(0.0);
        dump->push_back(r);
    };
    record();
    while (fi.state()[0].real() < 0.0) {
        if (++n > cfg.max_steps) throw MaxStepsExceeded("no section crossing before max_steps");
        fi.step_once();
        if (cfg.guard_im_below && !(fi.state()[0].imag() < *cfg.guard_im_below))
            throw DomainGuardViolated("Im U reached the guard line");
        record();
    }
    const auto& st = fi.last_step();
    auto pre = fi.eval_step(st, 0.0);
    auto post = fi.eval_step(st, st.h);
    // Newton on Re U(tau) with bisection fallback
    double lo = 0.0, hi = st.h;
    double tau = st.h * (-pre[0].real()) / (post[0].real() - pre[0].real());
    for (int it = 0; it < 80; ++it) {
        auto s = fi.eval_step(st, tau);
        const double f = s[0].real();
        if (std::fabs(f) < 1e-14) break;
        if (f < 0.0) lo = tau;
        else hi = tau;
        // derivative of Re U from the stored polynomial
        Cplx d{};
        for (int k = cfg.order; k >= 1; --k)
            d = d * tau + static_cast<double>(k) * st.coeffs[0][static_cast<size_t>(k)];
        const double dre = d.real();
        double next = tau - f / dre;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        tau = next;
    }
    auto s = fi.eval_step(st, tau);
    SectionCrossing sc;
    sc.t_cross = RealInterval(st.t0 + tau);
    sc.U_at_section = ComplexBox(s[0]);
    sc.W_at_section = ComplexBox(s[1]);
    sc.X_at_section = ComplexBox(s[2]);
    sc.Y_at_section = ComplexBox(s[3]);
    sc.A_at_section = ComplexBox(s[4]);
    sc.B_at_section = ComplexBox(s[5]);
    sc.reY_interval = RealInterval(s[3].real());
    sc.U_before = ComplexBox(pre[0]);
    sc.U_after = ComplexBox(post[0]);
    return sc;
}

template <class Field>
SectionCrossing integrate_to_section_rigorous(LohnerIntegrator<Field>& li, const Config& cfg,
                                              std::vector<TrajectoryRecord>* dump = nullptr) {
    static_assert(Field::dim == 6, "section crossing expects the 6-variable system");
    auto record = [&]() {
        if (!dump) return;
        auto hr = li.hull_real();
        TrajectoryRecord r;
        r.t = li.time();
        for (int i = 0; i < 6; ++i)
            r.mid[static_cast<size_t>(i)] = Cplx(hr[static_cast<size_t>(2 * i)].mid(),
                                                 hr[static_cast<size_t>(2 * i + 1)].mid());
        for (int i = 0; i < 12; ++i) r.widths[static_cast<size_t>(i)] = hr[static_cast<size_t>(i)].width();
        dump->push_back(r);
    };
    auto guard_check = [&]() {
        if (!cfg.guard_im_below) return;
        auto hr = li.hull_real();
        if (!(hr[1].hi < *cfg.guard_im_below))
            throw DomainGuardViolated("Im U reached the guard line");
    };
    record();
    auto pre_hull = li.hull();
    if (!(pre_hull[0].re.hi < 0.0)) throw NoCrossing("initial enclosure not strictly left of the section");
    long n = 0;
    for (;;) {
        if (++n > cfg.max_steps) throw MaxStepsExceeded("no section crossing before max_steps");
        auto before = li.hull();
        li.step_once();
        guard_check();
        record();
        auto after = li.hull();
        if (after[0].re.lo > 0.0) {
            if (!(before[0].re.hi < 0.0))
                throw EnclosureFailed("section straddle without a strict Bolzano pair");
            // refine the bracket inside the last step by bisection
            const double h = li.last_step().h;
            double t1 = 0.0, t2 = h;
            for (int it = 0; it < cfg.bisections; ++it) {
                const double m1 = t1 + (t2 - t1) / 3.0;
                auto s1 = li.eval_last(RealInterval(m1));
                if (s1[0].re.hi < 0.0) { t1 = m1; continue; }
                const double m2 = t2 - (t2 - t1) / 3.0;
                auto s2 = li.eval_last(RealInterval(m2));
                if (s2[0].re.lo > 0.0) { t2 = m2; continue; }
                break;
            }
            auto sc_box = li.eval_last(RealInterval(t1, t2));
            SectionCrossing sc;
            sc.t_cross = RealInterval(li.last_step().t0 + t1, li.last_step().t0 + t2);
            sc.U_at_section = sc_box[0];
            sc.W_at_section = sc_box[1];
            sc.X_at_section = sc_box[2];
            sc.Y_at_section = sc_box[3];
            sc.A_at_section = sc_box[4];
            sc.B_at_section = sc_box[5];
            sc.reY_interval = sc_box[3].re;
            sc.U_before = before[0];
            sc.U_after = after[0];
            return sc;
        }
        if (!(after[0].re.hi < 0.0)) {
            // straddling the section at a step end: shrink the step cap and retry is
            // not available here; treat as crossing with the bracket over this step
            const double h = li.last_step().h;
            auto sc_box = li.eval_last(RealInterval(0.0, h));
            SectionCrossing sc;
            sc.t_cross = RealInterval(li.last_step().t0, li.last_step().t0 + h);
            sc.U_at_section = sc_box[0];
            sc.W_at_section = sc_box[1];
            sc.X_at_section = sc_box[2];
            sc.Y_at_section = sc_box[3];
            sc.A_at_section = sc_box[4];
            sc.B_at_section = sc_box[5];
            sc.reY_interval = sc_box[3].re;
            sc.U_before = before[0];
            sc.U_after = after[0];
            if (!(before[0].re.hi < 0.0))
                throw EnclosureFailed("section straddle without a strict Bolzano pair");
            // keep stepping until surely past, so the witness pair is strict
            li.step_once();
            guard_check();
            record();
            auto post = li.hull();
            if (!(post[0].re.lo > 0.0))
                throw EnclosureFailed("could not establish a strict post-section witness");
            sc.U_after = post[0];
            // widen the crossing data with the extra step's range
            auto extra = li.eval_last(RealInterval(0.0, li.last_step().h));
            sc.U_at_section = hull(sc.U_at_section, extra[0]);
            sc.W_at_section = hull(sc.W_at_section, extra[1]);
            sc.X_at_section = hull(sc.X_at_section, extra[2]);
            sc.Y_at_section = hull(sc.Y_at_section, extra[3]);
            sc.A_at_section = hull(sc.A_at_section, extra[4]);
            sc.B_at_section = hull(sc.B_at_section, extra[5]);
            sc.reY_interval = hull(sc.reY_interval, extra[3].re);
            sc.t_cross = hull(sc.t_cross, RealInterval(li.last_step().t0, li.last_step().t0 + li.last_step().h));
            return sc;
        }
    }
}

} // namespace stokes::integrator
