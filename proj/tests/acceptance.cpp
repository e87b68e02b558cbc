// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include "canard/hopf.hpp"
#include "canard/lyapunov.hpp"
#include "canard/model.hpp"
#include "canard/multilinear.hpp"
#include "canard/oracle.hpp"
#include "canard/prediction.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

using namespace canard;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct VdpAtHopf {
    hopf::HopfPoint h;
    lyapunov::Report rep;
    double eps;
};

VdpAtHopf vdp_pipeline(double eps, double half_bracket) {
    model::SystemModel m = model::builtin_vdp();
    hopf::HopfPoint h =
        hopf::locate_hopf(m, {{"eps", eps}}, -half_bracket, half_bracket, Vec::Zero(2));
    lyapunov::Report rep = lyapunov::full_report(m.bind({{"eps", eps}, {"lambda", h.lambda}}), h);
    return {h, rep, eps};
}

// --- criterion 1: vdp Hopf point ---
void criterion_1() {
    Timer t;
    model::SystemModel m = model::builtin_vdp();
    hopf::HopfPoint h = hopf::locate_hopf(m, {{"eps", 0.05}}, -0.2, 0.2, Vec::Zero(2));
    const double dt = t.seconds();
    const bool pass = std::abs(h.lambda) <= 1e-8 && std::abs(h.omega0 - 0.223607) <= 1e-4 &&
                      dt < 1.0;
    report(1, pass,
           fmt("vdp Hopf point: lambda_H = %.3e (<=1e-8), omega0 = %.7f (|d| = %.2e <= 1e-4), "
               "%.2fs (< 1s)",
               h.lambda, h.omega0, std::abs(h.omega0 - 0.223607), dt));
}

// --- criterion 2: vdp Lyapunov coefficient ---
void criterion_2() {
    Timer t;
    VdpAtHopf v = vdp_pipeline(0.05, 0.2);
    const double dt = t.seconds();
    const bool pass = std::abs(v.rep.l1_mc - 0.4762) <= 0.010 && dt < 1.0;
    report(2, pass,
           fmt("vdp l1_mc = %.6f (|d| = %.2e <= 0.010), %.2fs (< 1s)", v.rep.l1_mc,
               std::abs(v.rep.l1_mc - 0.4762), dt));
}

// --- criterion 3: vdp predictions ---
void criterion_3() {
    VdpAtHopf v = vdp_pipeline(0.05, 0.2);
    const double K_mc = prediction::k_from_l1(prediction::Route::mc, v.rep.l1_mc, 0.05, v.h.omega0);
    prediction::CanardPrediction mc =
        prediction::predict_lambda_c(v.h.lambda, K_mc, 0.05, prediction::Route::mc);
    prediction::CanardPrediction an =
        prediction::predict_lambda_c(v.h.lambda, 0.125, 0.05, prediction::Route::analytic);
    const bool id_exact = (mc.lambda_c == mc.lambda_H - mc.K * mc.epsilon) &&
                          (an.lambda_c == an.lambda_H - an.K * an.epsilon);
    const bool pass = std::abs(mc.lambda_c - (-0.0060)) <= 0.0003 &&
                      std::abs(an.lambda_c - (-0.00625)) <= 1e-10 && id_exact;
    report(3, pass,
           fmt("vdp lambda_c(mc) = %.6f (+-3e-4 around -0.0060), lambda_c(analytic) = %.6f "
               "(= -0.00625), identity exact: %s",
               mc.lambda_c, an.lambda_c, id_exact ? "yes" : "no"));
}

// --- criterion 4: vdp oracle ---
double g_vdp_lambda_star = 0.0;  // reused by criterion 9
void criterion_4() {
    Timer t;
    model::SystemModel m = model::builtin_vdp();
    oracle::IntegratorSettings set;  // spec defaults 1e-12 / 1e-14
    oracle::OracleResult r =
        oracle::bisect_canard(m, 0.05, -0.01, -0.001, 1e-9, set, oracle::vdp_exit_geometry(0.05));
    g_vdp_lambda_star = r.lambda_star;
    const double dt = t.seconds();
    const bool pass = std::abs(r.lambda_star - (-0.006509)) <= 5e-5 && dt < 60.0;
    report(4, pass,
           fmt("vdp oracle lambda_c* = %.7f (|d| = %.2e <= 5e-5 around -0.006509), %.1fs (< 60s)",
               r.lambda_star, std::abs(r.lambda_star - (-0.006509)), dt));
}

// --- criteria 5 and 6: FHN Table reproduction and convergence order ---
void criteria_5_6() {
    Timer t;
    model::SystemModel m = model::builtin_fhn();
    const std::vector<double> eps_list{1e-2, 5e-3, 1e-3, 5e-4};
    const double pred_expect[4] = {0.06308, 0.05629, 0.05196, 0.05150};
    const double obs_expect[4] = {0.0582046, 0.0545535, 0.0517585, 0.0514108};

    oracle::SweepOptions opts;
    opts.hopf_lo = 0.045;
    opts.hopf_hi = 0.10;
    opts.lambda_tol = 1e-6;
    opts.hopf_scan_steps = 80;
    Vec guess(3);
    guess << 0.05, 0.0, 0.05;
    opts.equilibrium_guess = guess;
    oracle::SweepResult sw = oracle::sweep_epsilon(m, eps_list, opts);
    const double dt = t.seconds();

    bool pass5 = dt < 600.0;
    std::string detail = "FHN Table: ";
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const auto& row = sw.rows[i];
        if (!row.ok) {
            pass5 = false;
            detail += fmt("eps=%g FAILED(%s) ", eps_list[i], row.error.c_str());
            continue;
        }
        const double dp = std::abs(row.lambda_c_pred - pred_expect[i]);
        const double dobs = std::abs(row.lambda_c_obs - obs_expect[i]);
        pass5 = pass5 && dp <= 1e-3 && dobs <= 1e-3;
        detail += fmt("eps=%g pred %.5f (d=%.1e) obs %.7f (d=%.1e); ", eps_list[i],
                      row.lambda_c_pred, dp, row.lambda_c_obs, dobs);
    }
    detail += fmt("%.0fs (< 600s)", dt);
    report(5, pass5, detail);

    const bool have_slope = sw.error_slope.has_value();
    const double slope = have_slope ? *sw.error_slope : 0.0;
    report(6, have_slope && slope >= 1.2 && slope <= 1.8,
           fmt("convergence order: log-log error slope = %.3f (in [1.2, 1.8])", slope));
}

// --- criterion 7: K-route concordance on vdp ---
void criterion_7() {
    bool pass = true;
    std::string detail = "vdp K routes: ";
    const struct {
        double eps, half, lo, hi;
    } cases[2] = {{0.05, 0.2, 0.10, 0.15}, {0.001, 0.015, 0.120, 0.130}};
    for (const auto& c : cases) {
        VdpAtHopf v = vdp_pipeline(c.eps, c.half);
        const double Ks[4] = {
            prediction::k_from_l1(prediction::Route::gh, *v.rep.l1_gh, c.eps, v.h.omega0),
            prediction::k_from_l1(prediction::Route::clw, *v.rep.l1_clw, c.eps, v.h.omega0),
            prediction::k_from_l1(prediction::Route::mc, v.rep.l1_mc, c.eps, v.h.omega0),
            prediction::k_from_l1(prediction::Route::ku, v.rep.l1_ku, c.eps, v.h.omega0)};
        detail += fmt("eps=%g [gh %.4f clw %.4f mc %.4f ku %.4f] ", c.eps, Ks[0], Ks[1], Ks[2],
                      Ks[3]);
        for (double K : Ks) pass = pass && K >= c.lo && K <= c.hi;
    }
    report(7, pass, detail + "(bands [0.10,0.15] and [0.120,0.130])");
}

// --- criterion 8: property bundle ---
void criterion_8() {
    bool pass = true;
    std::string detail;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // B/C symmetry and multilinearity on vdp at the canard point.
    {
        model::SystemModel m = model::builtin_vdp();
        multilinear::ExpansionPoint at(m.bind({{"lambda", 0.0}, {"eps", 0.05}}).rhs,
                                       Vec::Zero(2));
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            Vec a(2), b(2), c(2);
            a << u(rng), u(rng);
            b << u(rng), u(rng);
            c << u(rng), u(rng);
            worst = std::max(worst,
                             (multilinear::bilinear_B(at, a, b) - multilinear::bilinear_B(at, b, a))
                                 .norm());
            worst = std::max(worst, (multilinear::trilinear_C(at, a, b, c) -
                                     multilinear::trilinear_C(at, c, a, b))
                                        .norm());
            const double al = 1.0 + u(rng);
            worst = std::max(worst, (multilinear::bilinear_B(at, al * a, b) -
                                     al * multilinear::bilinear_B(at, a, b))
                                        .norm());
        }
        pass = pass && worst <= 1e-8;
        detail += fmt("B/C sym+lin %.1e; ", worst);
    }

    // FD vs analytic Jacobian on both built-ins.
    {
        double worst = 0.0;
        for (model::SystemModel m : {model::builtin_vdp(), model::builtin_fhn()}) {
            model::BoundSystem s = m.bind();
            for (int t = 0; t < 20; ++t) {
                Vec z(m.dim());
                for (int k = 0; k < m.dim(); ++k) z[k] = 2.0 * u(rng);
                Mat d = linalg::jacobian(s, z, linalg::JacobianScheme::central_fd()) -
                        linalg::jacobian(s, z, linalg::JacobianScheme::analytic());
                worst = std::max(worst, d.cwiseAbs().maxCoeff());
            }
        }
        pass = pass && worst <= 1e-7;
        detail += fmt("FD-vs-analytic %.1e; ", worst);
    }

    // Eigen residuals on random matrices.
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const int n = 2 + int(rng() % 7);
            Mat M(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) M(i, j) = u(rng);
            for (const auto& pr : linalg::eigen_small(M))
                worst = std::max(worst,
                                 (M * pr.vector - pr.value * pr.vector).norm() / M.norm());
        }
        pass = pass && worst <= 1e-10;
        detail += fmt("eig resid %.1e; ", worst);
    }

    // vdp full report: phase invariance, planar equivalence, mc product,
    // sign concordance.
    {
        VdpAtHopf v = vdp_pipeline(0.05, 0.2);
        model::SystemModel m = model::builtin_vdp();
        multilinear::ExpansionPoint at(m.bind({{"eps", 0.05}, {"lambda", v.h.lambda}}).rhs,
                                       v.h.eq.z);
        double worst_phase = 0.0;
        for (int t = 0; t < 20; ++t) {
            const Complex rot = std::exp(Complex(0.0, 2.0 * M_PI * (t + 1) / 21.0));
            const double l1 = lyapunov::l1_kuznetsov(v.h.eq.jacobian, v.h.omega0,
                                                     (rot * v.h.q).eval(), (rot * v.h.p).eval(), at);
            worst_phase = std::max(worst_phase, std::abs(l1 - v.rep.l1_ku));
        }
        pass = pass && worst_phase <= 1e-10;
        const double planar_diff = std::abs(*v.rep.l1_planar - v.rep.l1_ku);
        pass = pass && planar_diff <= 1e-10;
        const bool product_exact = v.rep.l1_mc == v.h.omega0 * v.rep.l1_ku;
        pass = pass && product_exact;
        const bool signs = (v.rep.l1_ku > 0) && (v.rep.l1_mc > 0) && (*v.rep.l1_gh > 0) &&
                           (*v.rep.l1_clw > 0) && (*v.rep.l1_pe > 0);
        pass = pass && signs;
        detail += fmt("phase %.1e; planar %.1e; mc=w*ku %s; signs %s; ", worst_phase, planar_diff,
                      product_exact ? "exact" : "BROKEN", signs ? "ok" : "BROKEN");
    }

    // Synthetic cubic normal form: l1_gh = a.
    {
        double worst = 0.0;
        for (double a : {-2.0, -1.0, 1.0, 2.0}) {
            Mat M(2, 2);
            M << 0.0, -1.0, 1.0, 0.0;
            auto rhs = [a](const Vec& z) -> Vec {
                const double r2 = z[0] * z[0] + z[1] * z[1];
                Vec f(2);
                f << -z[1] + a * z[0] * r2, z[0] + a * z[1] * r2;
                return f;
            };
            auto [q, p] = hopf::hopf_eigenvectors(M, 1.0);
            lyapunov::PlanarSystemAtHopf planar(
                M,
                [a](const Eigen::Vector2d& z) -> Eigen::Vector2d {
                    const double r2 = z[0] * z[0] + z[1] * z[1];
                    return {a * z[0] * r2, a * z[1] * r2};
                },
                1.0);
            const double gh = lyapunov::l1_gh(lyapunov::jordan_transform_planar(planar, q));
            worst = std::max(worst, std::abs(gh - a));
            (void)rhs;
        }
        pass = pass && worst <= 1e-6;
        detail += fmt("cubic l1_gh-a %.1e; ", worst);
    }

    // Parser round-trip and precedence.
    {
        const std::set<std::string> vars{"x", "y"};
        bool parser_ok = true;
        for (int t = 0; t < 100; ++t) {
            const double x = 3.0 * u(rng), y = 3.0 * u(rng);
            expr::Ast a = expr::parse("x^2 + x^3/3 - y", vars);
            expr::Ast b = expr::parse(expr::to_string(a), vars);
            const double va = expr::eval(a, {{"x", x}, {"y", y}});
            const double vb = expr::eval(b, {{"x", x}, {"y", y}});
            parser_ok = parser_ok && std::abs(va - vb) <= 1e-14 * std::max(1.0, std::abs(va));
        }
        parser_ok = parser_ok && expr::eval(expr::parse("2+3*4", {}), {}) == 14.0;
        parser_ok = parser_ok &&
                    expr::eval(expr::parse("-x^2", vars), {{"x", 2.0}}) == -4.0;
        parser_ok = parser_ok && expr::eval(expr::parse("2^3^2", {}), {}) == 512.0;
        pass = pass && parser_ok;
        detail += fmt("parser %s", parser_ok ? "ok" : "BROKEN");
    }

    report(8, pass, "property suite: " + detail);
}

// --- criterion 9: oracle robustness ---
void criterion_9() {
    model::SystemModel m = model::builtin_vdp();
    const double base = g_vdp_lambda_star;
    bool pass = true;
    std::string detail = fmt("base %.7f; ", base);

    {  // halved integrator tolerances
        oracle::IntegratorSettings set;
        set.rtol = 0.5e-12;
        set.atol = 0.5e-14;
        oracle::OracleResult r = oracle::bisect_canard(m, 0.05, -0.01, -0.001, 1e-9, set,
                                                       oracle::vdp_exit_geometry(0.05));
        const double d = std::abs(r.lambda_star - base);
        pass = pass && d <= 1e-4;
        detail += fmt("halved tols d = %.2e; ", d);
    }
    {  // seed moved 10% along the attracting branch
        oracle::IntegratorSettings set;
        oracle::OracleResult r = oracle::bisect_canard(
            m, 0.05, -0.01, -0.001, 1e-9, set, oracle::vdp_exit_geometry(0.05, -1.1));
        const double d = std::abs(r.lambda_star - base);
        pass = pass && d <= 1e-4;
        detail += fmt("seed -1.1 d = %.2e; ", d);
    }
    {  // sections moved 20%
        oracle::IntegratorSettings set;
        oracle::OracleResult r = oracle::bisect_canard(
            m, 0.05, -0.01, -0.001, 1e-9, set, oracle::vdp_exit_geometry(0.05, -1.0, -1.2, 0.8));
        const double d = std::abs(r.lambda_star - base);
        pass = pass && d <= 1e-4;
        detail += fmt("sections +-20%% d = %.2e", d);
    }
    report(9, pass, detail + " (all <= 1e-4)");
}

}  // namespace

int main() {
    Timer total;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("%d criterion(s) failed; total %.0fs\n", g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
