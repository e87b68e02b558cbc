#include "canard/prediction.hpp"

#include <cmath>

namespace canard::prediction {

const char* route_name(Route r) {
    switch (r) {
        case Route::analytic: return "analytic";
        case Route::ku: return "ku";
        case Route::mc: return "mc";
        case Route::gh: return "gh";
        case Route::clw: return "clw";
        case Route::pe: return "pe";
    }
    return "?";
}

double k_from_l1(Route route, double l1, double eps, double omega0) {
    if (!(eps > 0.0)) throw Error("k_from_l1: eps must be positive");
    switch (route) {
        case Route::ku: return l1 * std::sqrt(eps) / 4.0;
        case Route::mc:
            if (!(omega0 > 0.0)) throw Error("k_from_l1: mc route needs omega0 > 0");
            return l1 * std::sqrt(eps) / (4.0 * omega0);
        case Route::gh: return l1;
        case Route::clw: return l1;
        case Route::pe:
            if (!(omega0 > 0.0)) throw Error("k_from_l1: pe route needs omega0 > 0");
            return l1 * 64.0 * omega0 / (3.0 * M_PI);
        case Route::analytic: break;
    }
    throw Error("k_from_l1: unknown convention");
}

CanardPrediction predict_lambda_c(double lambda_H, double K, double eps, Route route) {
    if (!(eps > 0.0)) throw Error("predict_lambda_c: eps must be positive");
    CanardPrediction p;
    p.lambda_H = lambda_H;
    p.K = K;
    p.epsilon = eps;
    p.lambda_c = lambda_H - K * eps;
    p.route = route;
    return p;
}

NormalFormCoeffs normal_form_constants(const std::array<HFunc, 6>& h, double fd_step) {
    auto dx = [&](int i) {
        const HFunc& f = h[static_cast<std::size_t>(i)];
        const double v = (f(fd_step, 0, 0, 0) - f(-fd_step, 0, 0, 0)) / (2.0 * fd_step);
        if (!std::isfinite(v))
            throw EvalError("normal_form_constants: h" + std::to_string(i + 1) +
                            " produced a non-finite derivative");
        return v;
    };
    NormalFormCoeffs c{};
    c.a1 = dx(2);  // (h3)_x
    c.a2 = dx(0);  // (h1)_x
    c.a3 = dx(1);  // (h2)_x
    c.a4 = dx(3);  // (h4)_x
    c.a5 = dx(5);  // (h6)_x
    c.A = -c.a2 + 3.0 * c.a3 - 2.0 * c.a4 - 2.0 * c.a5;
    c.K = c.A / 8.0;
    return c;
}

std::pair<double, double> analytic_predictions(const NormalFormCoeffs& c, double eps) {
    if (!(eps > 0.0)) throw Error("analytic_predictions: eps must be positive");
    const double lambda_H = -(c.a1 + c.a5) / 2.0 * eps;
    const double lambda_c = -((c.a1 + c.a5) / 2.0 + c.A / 8.0) * eps;
    return {lambda_H, lambda_c};
}

CanardPointReport check_canard_point(const model::SystemModel& m, const Vec& point, double lambda,
                                     double fd_step, double zero_tol, double nonzero_tol) {
    if (m.dim() != 2)
        throw Error("check_canard_point: expects a planar model (fast first component)");
    const std::string& lam_name = m.bifurcation_param();
    const std::string& eps_name = m.epsilon_param();

    // Fast component f evaluated at eps = 0.
    auto f_at = [&](double x, double y, double lam) {
        Params p{{lam_name, lam}, {eps_name, 0.0}};
        Vec z(2);
        z << x, y;
        return m.bind(p).rhs(z)[0];
    };
    // Slow RHS with the leading eps factor removed: the y'-component is
    // eps*g(x,y,lambda,eps), so g at eps=0 is its eps-derivative there.
    auto g_at = [&](double x, double y, double lam) {
        const double he = 1e-7;
        Vec z(2);
        z << x, y;
        Params pp{{lam_name, lam}, {eps_name, he}};
        Params pm{{lam_name, lam}, {eps_name, -he}};
        return (m.bind(pp).rhs(z)[1] - m.bind(pm).rhs(z)[1]) / (2.0 * he);
    };

    const double x0 = point[0], y0 = point[1], h = fd_step;
    const double f0 = f_at(x0, y0, lambda);
    const double fx = (f_at(x0 + h, y0, lambda) - f_at(x0 - h, y0, lambda)) / (2 * h);
    const double fxx =
        (f_at(x0 + h, y0, lambda) - 2 * f0 + f_at(x0 - h, y0, lambda)) / (h * h);
    const double fy = (f_at(x0, y0 + h, lambda) - f_at(x0, y0 - h, lambda)) / (2 * h);
    const double g0 = g_at(x0, y0, lambda);
    const double gx = (g_at(x0 + h, y0, lambda) - g_at(x0 - h, y0, lambda)) / (2 * h);
    const double glam = (g_at(x0, y0, lambda + h) - g_at(x0, y0, lambda - h)) / (2 * h);

    CanardPointReport rep;
    auto add = [&](const char* name, double value, bool want_zero) {
        ConditionCheck c{name, value, want_zero, false};
        c.pass = want_zero ? std::abs(value) <= zero_tol : std::abs(value) >= nonzero_tol;
        rep.conditions.push_back(c);
    };
    add("f", f0, true);
    add("f_x", fx, true);
    add("f_xx", fxx, false);
    add("f_y", fy, false);
    add("g", g0, true);
    add("g_x", gx, false);
    add("g_lambda", glam, false);
    rep.all_pass = true;
    for (const auto& c : rep.conditions) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

}  // namespace canard::prediction
