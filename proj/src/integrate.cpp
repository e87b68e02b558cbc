#include "canard/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace canard::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat (error estimate weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    double t0 = 0.0, h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const {
        const double theta = (t - t0) / h, th1 = 1.0 - theta;
        return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
    }
};

}  // namespace

Result integrate(const std::function<Vec(double, const Vec&)>& f, double t0, const Vec& y0,
                 double t1, const Settings& settings, std::span<const Section> sections) {
    Result res;
    res.t = t0;
    res.y = y0;
    if (t1 == t0) return res;

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = (settings.max_step > 0.0) ? std::min(settings.max_step, span) : span;
    const int n = static_cast<int>(y0.size());

    auto rhs = [&](double t, const Vec& y) {
        ++res.stats.n_rhs;
        return f(t, y);
    };

    double t = t0;
    Vec y = y0;
    Vec k1 = rhs(t, y);

    // Section values at the current point; crossings are judged between
    // consecutive accepted steps.
    std::vector<double> gval(sections.size());
    for (std::size_t i = 0; i < sections.size(); ++i) gval[i] = sections[i].g(t, y);

    // Initial step: conservative power-law guess from the first derivative.
    double h;
    if (settings.initial_step > 0.0) {
        h = std::min(settings.initial_step, hmax);
    } else {
        const double d0 = y.norm(), d1n = k1.norm();
        h = (d1n > 1e-10) ? 0.01 * std::max(d0, 1.0) / d1n : 1e-6;
        h = std::min({h, hmax, 1e-2 * span});
        h = std::max(h, 1e-10 * span);
    }

    if (settings.record) {
        res.ts.push_back(t);
        res.ys.push_back(y);
    }

    constexpr double safety = 0.9, beta = 0.04, expo = 0.2 - beta * 0.75;
    constexpr double fac_min = 0.2, fac_max = 10.0;
    double err_old = 1e-4;
    Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), yerr(n);

    for (long long step = 0; step < settings.max_steps; ++step) {
        bool last = false;
        if ((t + dir * h * 1.01 - t1) * dir >= 0.0) {
            h = std::abs(t1 - t);
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            res.status = Status::step_underflow;
            res.t = t;
            res.y = y;
            return res;
        }
        const double hs = dir * h;

        k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
        k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = rhs(t + hs, y5);  // FSAL
        yerr = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        bool finite = y5.allFinite();
        if (finite) {
            for (int i = 0; i < n; ++i) {
                const double sc =
                    settings.atol + settings.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double q = yerr[i] / sc;
                err += q * q;
            }
            err = std::sqrt(err / n);
        } else {
            err = 1e10;
        }

        if (err <= 1.0) {
            ++res.stats.n_accepted;
            const double t_new = last ? t1 : t + hs;

            // Event check on this step via the dense interpolant.
            int fired = -1;
            double t_hit = 0.0;
            DenseStep dense;
            bool dense_ready = false;
            for (std::size_t i = 0; i < sections.size(); ++i) {
                const double g_new = sections[i].g(t_new, y5);
                const double g_old = gval[i];
                const bool crossed = (g_old < 0.0 && g_new > 0.0) || (g_old > 0.0 && g_new < 0.0);
                const int want = sections[i].direction;
                const bool dir_ok =
                    want == 0 || (want > 0 && g_new > g_old) || (want < 0 && g_new < g_old);
                if (!crossed || !dir_ok) {
                    gval[i] = g_new;
                    continue;
                }
                if (!dense_ready) {
                    const Vec ydiff = y5 - y;
                    const Vec bspl = hs * k1 - ydiff;
                    dense.t0 = t;
                    dense.h = t_new - t;
                    dense.r1 = y;
                    dense.r2 = ydiff;
                    dense.r3 = bspl;
                    dense.r4 = ydiff - hs * k7 - bspl;
                    dense.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                    dense_ready = true;
                }
                // Bisection on the interpolant down to 1e-12 * max(1,|t|).
                double ta = t, tb = t_new, ga = g_old;
                const double ttol = 1e-12 * std::max(1.0, std::max(std::abs(ta), std::abs(tb)));
                while (std::abs(tb - ta) > ttol) {
                    const double tm = 0.5 * (ta + tb);
                    const double gm = sections[i].g(tm, dense.eval(tm));
                    if ((gm < 0.0) == (ga < 0.0)) {
                        ta = tm;
                        ga = gm;
                    } else {
                        tb = tm;
                    }
                }
                const double tc = 0.5 * (ta + tb);
                if (fired < 0 || (tc - t_hit) * dir < 0.0) {
                    fired = static_cast<int>(i);
                    t_hit = tc;
                }
                gval[i] = g_new;
            }
            if (fired >= 0) {
                res.status = Status::event;
                res.event_index = fired;
                res.t = t_hit;
                res.y = dense.eval(t_hit);
                if (settings.record) {
                    res.ts.push_back(res.t);
                    res.ys.push_back(res.y);
                }
                return res;
            }

            t = t_new;
            y = y5;
            k1 = k7;
            if (settings.record) {
                res.ts.push_back(t);
                res.ys.push_back(y);
            }
            if (y.cwiseAbs().maxCoeff() > settings.blowup_norm) {
                res.status = Status::blowup;
                res.t = t;
                res.y = y;
                return res;
            }
            if (last) {
                res.status = Status::reached_end;
                res.t = t1;
                res.y = y;
                return res;
            }
            err = std::max(err, 1e-32);
            double fac = std::pow(err, expo) * std::pow(err_old, -beta);
            fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
            h = std::min(h / fac, hmax);
            err_old = std::max(err, 1e-4);
        } else {
            ++res.stats.n_rejected;
            const double fac = std::min(1.0 / fac_min, std::pow(err, expo) / safety);
            h = h / fac;
        }
    }
    res.status = Status::step_budget;
    res.t = t;
    res.y = y;
    return res;
}

}  // namespace canard::ode
