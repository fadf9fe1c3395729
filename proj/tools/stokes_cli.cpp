// Command-line driver: contraction certificates, certified initial sets,
// transport to the section {Re U = 0}, splitting-constant estimates, the
// distance-formula constant, and consolidated reports.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stokes/pipeline.hpp"
#include "stokes/report.hpp"

using namespace stokes;
using report::Json;

namespace {

int thread_count() {
    if (const char* env = std::getenv("STOKES_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void write_out(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(path);
        f << j.dump(2) << "\n";
    }
}

Json config_json(const certificate::Params& p) {
    Json j;
    j["kappa"] = p.kappa;
    j["gamma"] = p.gamma;
    j["rho1"] = p.rho1;
    j["rho2"] = p.rho2;
    if (p.eta) j["eta"] = *p.eta;
    return j;
}

Json certificate_json(const certificate::Report& r) {
    Json j;
    j["params"] = config_json(r.params);
    j["config_hash"] = report::git_blob_hash(config_json(r.params).dump());
    j["alpha0"] = report::to_json(r.alpha0);
    j["beta0"] = report::to_json(r.beta0);
    for (int i = 0; i < 5; ++i) j["zeta" + std::to_string(i)] = report::to_json(r.zeta[static_cast<size_t>(i)]);
    j["C1_0"] = report::to_json(r.C1_0);
    j["C23_0"] = report::to_json(r.C23_0);
    for (int i = 0; i < 6; ++i) j["xi" + std::to_string(i)] = report::to_json(r.xi[static_cast<size_t>(i)]);
    for (int i = 0; i < 10; ++i) j["eta" + std::to_string(i)] = report::to_json(r.etac[static_cast<size_t>(i)]);
    for (int i = 0; i < 6; ++i) j["nu" + std::to_string(i)] = report::to_json(r.nu[static_cast<size_t>(i)]);
    for (int i = 1; i <= 5; ++i) j["nutilde" + std::to_string(i)] = report::to_json(r.nutilde[static_cast<size_t>(i - 1)]);
    j["L"] = report::to_json(r.L);
    j["g1"] = report::to_json(r.g1);
    j["g2"] = report::to_json(r.g2);
    j["b1_tilde"] = report::to_json(r.b1_tilde);
    j["b2_tilde"] = report::to_json(r.b2_tilde);
    j["verdict"] = r.verdict == certificate::Verdict::Certified ? "Certified" : "Failed";
    if (!r.failure_reason.empty()) j["failure_reason"] = r.failure_reason;
    return j;
}

Json crossing_json(const integrator::SectionCrossing& sc) {
    Json j;
    j["t_cross"] = report::to_json(sc.t_cross);
    j["U_at_section"] = report::to_json(sc.U_at_section);
    j["W_at_section"] = report::to_json(sc.W_at_section);
    j["X_at_section"] = report::to_json(sc.X_at_section);
    j["Y_at_section"] = report::to_json(sc.Y_at_section);
    j["reY_interval"] = report::to_json(sc.reY_interval);
    j["U_before"] = report::to_json(sc.U_before);
    j["U_after"] = report::to_json(sc.U_after);
    auto [dy, low] = extended::stable_from_unstable(sc.Y_at_section);
    j["deltaY"] = report::to_json(dy);
    j["deltaZ_lower_bound"] = report::to_json(low);
    return j;
}

void dump_csv(const std::vector<integrator::TrajectoryRecord>& recs, const std::string& path,
              bool widths) {
    std::ofstream f(path);
    f << "t,re_U,im_U,re_W,im_W,re_X,im_X,re_Y,im_Y,re_A,im_A,re_B,im_B";
    if (widths) {
        const char* names[6] = {"U", "W", "X", "Y", "A", "B"};
        for (auto* n : names) f << ",w_re_" << n << ",w_im_" << n;
    }
    f << "\n";
    f.precision(17);
    for (const auto& r : recs) {
        f << r.t;
        for (int i = 0; i < 6; ++i)
            f << "," << r.mid[static_cast<size_t>(i)].real() << ","
              << r.mid[static_cast<size_t>(i)].imag();
        if (widths)
            for (int i = 0; i < 12; ++i) f << "," << r.widths[static_cast<size_t>(i)];
        f << "\n";
    }
}

struct CrossingOptions {
    std::string mode = "fast";
    std::string seed = "asymptotic";
    double re_u0 = -2000.0;
    double rho0 = 7.12;
    double eta_star = 1000.0;
    double gamma = 0.5;
    int order = 20;
    double tol = 1e-13;
    double h0 = 0.5;
    double hmax = 0.9;
    long max_steps = 100000;
    bool domain_guard = false;
    std::string out;
    std::string dump;
};

integrator::Config make_config(const CrossingOptions& o) {
    integrator::Config cfg;
    cfg.order = o.order;
    cfg.tol = o.tol;
    cfg.h_init = o.h0;
    cfg.h_max = o.hmax;
    cfg.max_steps = o.max_steps;
    cfg.mode = o.mode == "rigorous" ? integrator::Mode::Rigorous : integrator::Mode::Fast;
    if (o.domain_guard) cfg.guard_im_below = -o.rho0;
    return cfg;
}

Json crossing_config_json(const CrossingOptions& o) {
    Json j;
    j["mode"] = o.mode;
    j["seed"] = o.seed;
    j["re_u0"] = o.re_u0;
    j["rho0"] = o.rho0;
    j["eta_star"] = o.eta_star;
    j["gamma"] = o.gamma;
    j["order"] = o.order;
    j["tol"] = o.tol;
    j["h0"] = o.h0;
    j["hmax"] = o.hmax;
    j["domain_guard"] = o.domain_guard;
    return j;
}

// Run one crossing (fast or rigorous) and report it.
Json run_crossing(const CrossingOptions& o) {
    integrator::Config cfg = make_config(o);
    std::vector<integrator::TrajectoryRecord> recs;
    std::vector<integrator::TrajectoryRecord>* recp = o.dump.empty() ? nullptr : &recs;
    Json j;
    j["config"] = crossing_config_json(o);
    j["config_hash"] = report::git_blob_hash(crossing_config_json(o).dump());
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.mode == integrator::Mode::Fast) {
        const Cplx U0(o.re_u0, -o.rho0);
        auto kind = o.seed == "midpoint" ? pipeline::SeedKind::Midpoint : pipeline::SeedKind::Asymptotic;
        auto sc = pipeline::fast_crossing(U0, kind, cfg, recp);
        j["crossing"] = crossing_json(sc);
        auto est = pipeline::theta_from_crossing(sc);
        j["theta_rho"] = est.theta_rho;
        j["rho"] = est.rho;
    } else {
        auto iset = pipeline::make_initial_set(o.eta_star, o.rho0, o.re_u0, o.gamma);
        integrator::LohnerIntegrator<taylor::ExtField> li({}, cfg);
        li.set_initial(0.0, iset.boxes);
        auto sc = integrator::integrate_to_section_rigorous(li, cfg, recp);
        j["crossing"] = crossing_json(sc);
        j["b1_tilde"] = report::to_json(iset.b1_tilde);
        j["b2_tilde"] = report::to_json(iset.b2_tilde);
    }
    j["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!o.dump.empty()) dump_csv(recs, o.dump, cfg.mode == integrator::Mode::Rigorous);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"validated transport of the inner-equation unstable solution to the section Re U = 0"};
    app.require_subcommand(1);

    // ---- certify ----
    certificate::Params cp;
    bool scan_rho2 = false;
    double eta_in = 0.0;
    std::string cert_out;
    auto* certify = app.add_subcommand("certify", "evaluate the contraction certificate");
    certify->add_option("--kappa", cp.kappa, "domain offset kappa");
    certify->add_option("--gamma", cp.gamma, "sector angle gamma");
    certify->add_option("--rho1", cp.rho1, "W ball factor");
    certify->add_option("--rho2", cp.rho2, "X/Y ball factor");
    certify->add_option("--eta", eta_in, "deep-tail cutoff (evaluates the cascade at eta)");
    certify->add_flag("--scan-rho2", scan_rho2, "scan rho2 for the smallest certified tail ball");
    certify->add_option("--out", cert_out, "report path (stdout otherwise)");

    // ---- initial-set ----
    double is_eta = 1000.0, is_rho0 = 7.12, is_reu0 = -2000.0, is_gamma = 0.5;
    std::string is_out;
    auto* initial = app.add_subcommand("initial-set", "build the certified initial enclosure");
    initial->add_option("--eta-star", is_eta, "tail cutoff");
    initial->add_option("--rho0", is_rho0, "initial ordinate (Im U0 = -rho0)");
    initial->add_option("--re-u0", is_reu0, "initial abscissa Re U0");
    initial->add_option("--gamma", is_gamma, "sector angle");
    initial->add_option("--out", is_out, "report path");

    // ---- crossing ----
    CrossingOptions co;
    auto* crossing = app.add_subcommand("crossing", "integrate to the section Re U = 0");
    crossing->add_option("--mode", co.mode, "fast | rigorous")->check(CLI::IsMember({"fast", "rigorous"}));
    crossing->add_option("--seed", co.seed, "midpoint | asymptotic")->check(CLI::IsMember({"midpoint", "asymptotic"}));
    crossing->add_option("--re-u0", co.re_u0, "initial abscissa");
    crossing->add_option("--rho0", co.rho0, "initial ordinate");
    crossing->add_option("--eta-star", co.eta_star, "tail cutoff (rigorous mode)");
    crossing->add_option("--gamma", co.gamma, "sector angle");
    crossing->add_option("--order", co.order, "Taylor order");
    crossing->add_option("--tol", co.tol, "fast-mode local tolerance");
    crossing->add_option("--h0", co.h0, "initial step");
    crossing->add_option("--hmax", co.hmax, "step cap");
    crossing->add_option("--max-steps", co.max_steps, "step budget");
    crossing->add_flag("--domain-guard", co.domain_guard, "require Im U < -rho0 along the run");
    crossing->add_option("--out", co.out, "report path");
    crossing->add_option("--dump", co.dump, "trajectory CSV path");

    // ---- stokes ----
    std::string rho_list = "7.12,8,9";
    CrossingOptions so;
    std::string stokes_out;
    auto* stokes_cmd = app.add_subcommand("stokes", "sweep crossings and estimate the splitting constant");
    stokes_cmd->add_option("--rho-list", rho_list, "comma-separated starting ordinates");
    stokes_cmd->add_option("--order", so.order, "Taylor order");
    stokes_cmd->add_option("--tol", so.tol, "fast-mode local tolerance");
    stokes_cmd->add_option("--out", stokes_out, "report path");

    // ---- constant-a ----
    int panels = 32000;
    std::string ca_out;
    auto* constant_a = app.add_subcommand("constant-a", "rigorous enclosure of the distance-formula constant");
    constant_a->add_option("--panels", panels, "quadrature panels");
    constant_a->add_option("--out", ca_out, "report path");

    // ---- report ----
    std::vector<std::string> run_files;
    std::string rep_out;
    auto* report_cmd = app.add_subcommand("report", "merge run reports into one document");
    report_cmd->add_option("--runs", run_files, "report files to merge");
    report_cmd->add_option("--out", rep_out, "output path");

    // ---- verify ----
    bool full = false;
    std::string ver_out;
    auto* verify = app.add_subcommand("verify", "run the whole evidence chain");
    verify->add_flag("--full", full, "attempt the full rigorous run to the section");
    verify->add_option("--out", ver_out, "report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*certify) {
            if (scan_rho2) {
                const double eta = eta_in > 0.0 ? eta_in : 1000.0;
                certificate::Report r = certificate::scan_tail(eta, cp.gamma);
                Json j = certificate_json(r);
                write_out(j, cert_out);
                std::cout << "verdict: Certified  b1~=" << r.b1_tilde.hi << "  b2~=" << r.b2_tilde.hi
                          << "\n";
                return 0;
            }
            if (eta_in > 0.0) cp.eta = eta_in;
            certificate::Report r = certificate::certify(cp);
            write_out(certificate_json(r), cert_out);
            if (r.verdict == certificate::Verdict::Certified) {
                std::cout << "verdict: Certified  L=[" << r.L.lo << "," << r.L.hi << "]\n";
                return 0;
            }
            std::cout << "verdict: Failed (" << r.failure_reason << ")  g1=[" << r.g1.lo << ","
                      << r.g1.hi << "] g2=[" << r.g2.lo << "," << r.g2.hi << "]\n";
            return 1;
        }

        if (*initial) {
            auto s = pipeline::make_initial_set(is_eta, is_rho0, is_reu0, is_gamma);
            Json j;
            Json cfg;
            cfg["eta_star"] = is_eta;
            cfg["rho0"] = is_rho0;
            cfg["re_u0"] = is_reu0;
            cfg["gamma"] = is_gamma;
            j["config"] = cfg;
            j["config_hash"] = report::git_blob_hash(cfg.dump());
            j["b1_tilde"] = report::to_json(s.b1_tilde);
            j["b2_tilde"] = report::to_json(s.b2_tilde);
            j["w_radius"] = report::to_json(s.w_radius);
            j["xy_radius"] = report::to_json(s.xy_radius);
            const char* names[6] = {"U", "W", "X", "Y", "A", "B"};
            for (int i = 0; i < 6; ++i)
                j[std::string("box_") + names[i]] = report::to_json(s.boxes[static_cast<size_t>(i)]);
            write_out(j, is_out);
            return 0;
        }

        if (*crossing) {
            Json j = run_crossing(co);
            write_out(j, co.out);
            const auto& ry = j["crossing"]["reY_interval"];
            std::cout << "Re Y at section: [" << ry["lo"].get<double>() << ", "
                      << ry["hi"].get<double>() << "]\n";
            return 0;
        }

        if (*stokes_cmd) {
            std::vector<double> rhos;
            {
                std::string item;
                std::istringstream ss(rho_list);
                while (std::getline(ss, item, ',')) rhos.push_back(std::stod(item));
            }
            std::vector<pipeline::StokesEstimate> ests(rhos.size());
            integrator::Config cfg;
            cfg.order = so.order;
            cfg.tol = so.tol;
            cfg.h_max = so.hmax;
            auto work = [&](size_t i) {
                auto sc = pipeline::fast_crossing(Cplx(-2000.0, -rhos[i]),
                                                  pipeline::SeedKind::Asymptotic, cfg);
                ests[i] = pipeline::theta_from_crossing(sc);
            };
            const int nthreads = thread_count();
            if (nthreads > 1 && rhos.size() > 1) {
                std::vector<std::thread> pool;
                std::atomic<size_t> next{0};
                for (int t = 0; t < nthreads; ++t)
                    pool.emplace_back([&]() {
                        for (size_t i = next.fetch_add(1); i < rhos.size(); i = next.fetch_add(1))
                            work(i);
                    });
                for (auto& th : pool) th.join();
            } else {
                for (size_t i = 0; i < rhos.size(); ++i) work(i);
            }
            Json j;
            Json cfgj;
            cfgj["rho_list"] = rho_list;
            cfgj["order"] = so.order;
            cfgj["tol"] = so.tol;
            j["config"] = cfgj;
            j["config_hash"] = report::git_blob_hash(cfgj.dump());
            Json arr = Json::array();
            for (const auto& e : ests) {
                Json je;
                je["rho"] = e.rho;
                je["deltaY"] = report::to_json(e.deltaY);
                je["theta_rho"] = e.theta_rho;
                arr.push_back(je);
            }
            j["estimates"] = arr;
            if (ests.size() >= 2) j["extrapolated_theta"] = pipeline::richardson_extrapolate(ests);
            write_out(j, stokes_out);
            for (const auto& e : ests)
                std::cout << "rho=" << e.rho << "  theta_rho=" << e.theta_rho << "\n";
            if (ests.size() >= 2)
                std::cout << "extrapolated theta: " << pipeline::richardson_extrapolate(ests) << "\n";
            return 0;
        }

        if (*constant_a) {
            RealInterval A = quadrature::constant_A(panels);
            Json j;
            j["panels"] = panels;
            j["A"] = report::to_json(A);
            j["width"] = A.width();
            write_out(j, ca_out);
            std::cout << "A in [" << A.lo << ", " << A.hi << "]  width " << A.width() << "\n";
            return 0;
        }

        if (*report_cmd) {
            Json merged;
            merged["runs"] = Json::array();
            for (const auto& path : run_files) {
                std::ifstream f(path);
                if (!f) throw MissingRun("missing run file: " + path);
                Json j;
                f >> j;
                merged["runs"].push_back(Json{{"file", path}, {"report", j}});
            }
            write_out(merged, rep_out);
            return 0;
        }

        if (*verify) {
            Json j;
            bool cert_ok = false, tail_ok = false, crossing_neg = false;
            bool rigorous_full = false;

            certificate::Params p;
            p.kappa = 6.24;
            p.gamma = 0.5;
            p.rho1 = 38.0;
            p.rho2 = 1.9;
            certificate::Report rc = certificate::certify(p);
            cert_ok = rc.verdict == certificate::Verdict::Certified;
            j["contraction_certificate"] = certificate_json(rc);

            certificate::Report rt = certificate::scan_tail(1000.0, 0.5);
            tail_ok = rt.verdict == certificate::Verdict::Certified && rt.b1_tilde.hi <= 0.7
                   && rt.b2_tilde.hi <= 0.71;
            j["tail_certificate"] = certificate_json(rt);

            if (full) {
                CrossingOptions o;
                o.mode = "rigorous";
                Json cj = run_crossing(o);
                j["rigorous_crossing"] = cj;
                const double hi = cj["crossing"]["reY_interval"]["hi"].get<double>();
                crossing_neg = hi < 0.0;
                rigorous_full = true;
            } else {
                // rigorous leg plus a fast crossing, with the leg-only caveat
                auto iset = pipeline::make_initial_set();
                integrator::Config rcfg;
                rcfg.order = 20;
                rcfg.h_init = 0.5;
                rcfg.h_max = 0.9;
                integrator::LohnerIntegrator<taylor::ExtField> li({}, rcfg);
                li.set_initial(0.0, iset.boxes);
                const double w0 = li.max_width();
                while (li.hull()[0].re.hi < -1900.0) li.step_once();
                Json leg;
                leg["width_initial"] = w0;
                leg["width_final"] = li.max_width();
                leg["growth"] = li.max_width() / w0;
                j["rigorous_leg"] = leg;

                CrossingOptions o;
                Json cj = run_crossing(o);
                j["fast_crossing"] = cj;
                const double hi = cj["crossing"]["reY_interval"]["hi"].get<double>();
                crossing_neg = hi < 0.0;
                j["caveat"] = "rigorous-leg-only: the section value is fast-mode, not interval-validated";
            }

            j["contraction_certified"] = cert_ok;
            j["tail_certified"] = tail_ok;
            j["crossing_reY_negative"] = crossing_neg;
            j["rigorous_full_run"] = rigorous_full;
            const bool verdict = cert_ok && tail_ok && crossing_neg;
            j["verdict"] = verdict ? "splitting-nonzero" : "not-established";
            write_out(j, ver_out);
            std::cout << "verdict: " << (verdict ? "splitting-nonzero" : "not-established")
                      << (rigorous_full ? " (fully rigorous crossing)" : " (rigorous-leg-only caveat)")
                      << "\n";
            return verdict ? 0 : 1;
        }
    } catch (const OutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const GateFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
