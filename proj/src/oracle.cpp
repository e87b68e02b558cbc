#include "canard/oracle.hpp"

#include "canard/hopf.hpp"
#include "canard/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace canard::oracle {

const char* side_name(ExitSide s) { return s == ExitSide::left ? "Left" : "Right"; }

ExitGeometry vdp_exit_geometry(double eps, double seed_x, double left, double right) {
    if (!(left < right)) throw OracleError("vdp_exit_geometry: sections on the same side");
    ExitGeometry g;
    g.seed = [seed_x](const Params&) {
        Vec z(2);
        z << seed_x, seed_x * seed_x + seed_x * seed_x * seed_x / 3.0;
        return z;
    };
    g.section_state = 0;
    g.left_value = left;
    g.left_direction = -1;
    g.right_value = right;
    g.right_direction = +1;
    g.settle_time = 10.0 / std::sqrt(eps);
    g.classify_time = 60.0 / eps;
    g.reverse_time = false;
    // Below the explosion the trajectory turns back over the fold and
    // spirals inside the repelling cycle without reaching x = -1.
    g.timeout_side = ExitSide::left;
    return g;
}

ExitGeometry fhn_exit_geometry(double eps, double seed_x1, double left_offset,
                               double right_offset) {
    // Folds of the cubic x1(x1-1)(0.1-x1): roots of its derivative.
    const double disc = std::sqrt(2.2 * 2.2 - 1.2);
    const double x_lo = (2.2 - disc) / 6.0, x_hi = (2.2 + disc) / 6.0;
    const double width = x_hi - x_lo;
    ExitGeometry g;
    g.seed = [seed_x1](const Params& p) {
        Vec z(3);
        z << seed_x1, 0.0, seed_x1 * (seed_x1 - 1.0) * (0.1 - seed_x1) + p.at("I");
        return z;
    };
    g.section_state = 0;
    g.left_value = x_lo - left_offset * width;
    g.left_direction = -1;
    g.right_value = x_lo + right_offset * width;
    g.right_direction = +1;
    g.settle_time = 10.0 / std::sqrt(eps);
    g.classify_time = 40.0 / eps;
    g.reverse_time = true;
    g.timeout_side = ExitSide::right;
    return g;
}

ExitGeometry default_exit_geometry(const model::SystemModel& m, double eps) {
    if (m.name() == "vdp") return vdp_exit_geometry(eps);
    if (m.name() == "fhn") return fhn_exit_geometry(eps);
    throw OracleError("no default exit geometry for model '" + m.name() +
                      "'; supply one explicitly");
}

Classification classify_exit(const model::SystemModel& m, const Params& params,
                             const IntegratorSettings& settings, const ExitGeometry& geometry) {
    if (!(geometry.left_value < geometry.right_value))
        throw OracleError("classify_exit: left section must lie left of the right section");
    if (!geometry.seed) throw OracleError("classify_exit: geometry has no seed");

    Params p = m.params_with(params);
    model::BoundSystem sys = m.bind(p);
    const double sign = geometry.reverse_time ? -1.0 : 1.0;
    auto rhs = [&sys, sign](double, const Vec& y) { return (sign * sys.rhs(y)).eval(); };

    const Vec z0 = geometry.seed(p);
    const int coord = geometry.section_state;
    if (coord < 0 || coord >= sys.n) throw OracleError("classify_exit: bad section coordinate");

    ode::Section sections[2];
    sections[0].g = [coord, v = geometry.left_value](double, const Vec& y) { return y[coord] - v; };
    sections[0].direction = geometry.left_direction;
    sections[1].g = [coord, v = geometry.right_value](double, const Vec& y) { return y[coord] - v; };
    sections[1].direction = geometry.right_direction;

    ode::Settings is;
    is.rtol = settings.rtol;
    is.atol = settings.atol;
    is.max_step = settings.max_step;
    is.max_steps = settings.max_steps;
    is.blowup_norm = settings.blowup_norm;
    is.record = settings.record;
    const double budget = (settings.max_time > 0.0)
                              ? settings.max_time
                              : geometry.settle_time + geometry.classify_time;

    ode::Result r = ode::integrate(rhs, 0.0, z0, budget, is, sections);

    Classification c;
    c.stats = r.stats;
    c.t_exit = r.t;
    c.ts = std::move(r.ts);
    c.ys = std::move(r.ys);
    switch (r.status) {
        case ode::Status::event:
            c.side = (r.event_index == 0) ? ExitSide::left : ExitSide::right;
            return c;
        case ode::Status::reached_end:
        case ode::Status::step_budget:
            if (geometry.timeout_side) {
                c.side = *geometry.timeout_side;
                c.by_timeout = true;
                return c;
            }
            throw OracleError("classify_exit: no section hit within budget (Undecided) at " +
                              m.bifurcation_param() + " = " +
                              std::to_string(p.at(m.bifurcation_param())));
        case ode::Status::blowup:
            // A blow-up beyond the sections is still a definite exit side.
            if (r.y[coord] > geometry.right_value) {
                c.side = ExitSide::right;
                return c;
            }
            if (r.y[coord] < geometry.left_value) {
                c.side = ExitSide::left;
                return c;
            }
            throw IntegrationError("classify_exit: state blow-up away from the exit sections");
        case ode::Status::step_underflow:
            throw IntegrationError("classify_exit: step size underflow (stiffness?)");
    }
    throw IntegrationError("classify_exit: unreachable");
}

OracleResult bisect_canard(const model::SystemModel& m, double eps, double lambda_lo,
                           double lambda_hi, double lambda_tol,
                           const IntegratorSettings& settings, const ExitGeometry& geometry) {
    if (!(lambda_lo < lambda_hi)) throw OracleError("bisect_canard: need lambda_lo < lambda_hi");
    if (!(lambda_tol > 0.0)) throw OracleError("bisect_canard: lambda_tol must be positive");

    OracleResult out;
    auto classify = [&](double lam) {
        Params p{{m.bifurcation_param(), lam}, {m.epsilon_param(), eps}};
        Classification c = classify_exit(m, p, settings, geometry);
        out.trace.push_back(TraceEntry{lam, c.side, c.by_timeout});
        out.stats.n_rhs += c.stats.n_rhs;
        out.stats.n_accepted += c.stats.n_accepted;
        out.stats.n_rejected += c.stats.n_rejected;
        return c.side;
    };

    double lo = lambda_lo, hi = lambda_hi;
    const ExitSide side_lo = classify(lo);
    const ExitSide side_hi = classify(hi);
    if (side_lo == side_hi)
        throw OracleError(std::string("bisect_canard: both endpoints classify ") +
                          side_name(side_lo) + "; widen or move the bracket");

    while (hi - lo > lambda_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // resolution floor
        const ExitSide s = classify(mid);
        if (s == side_lo)
            lo = mid;
        else
            hi = mid;
    }

    // The exit side must be monotone in lambda across everything probed.
    std::vector<TraceEntry> sorted = out.trace;
    std::sort(sorted.begin(), sorted.end(),
              [](const TraceEntry& a, const TraceEntry& b) { return a.lambda < b.lambda; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].side == side_hi && sorted[i + 1].side == side_lo)
            throw OracleError("bisect_canard: classification is not monotone in " +
                              m.bifurcation_param() + " (flip-flop near " +
                              std::to_string(sorted[i].lambda) + ")");
    }

    out.lambda_lo = lo;
    out.lambda_hi = hi;
    out.lambda_star = 0.5 * (lo + hi);
    out.lo_side = side_lo;
    out.hi_side = side_hi;
    return out;
}

PipelineResult predict_canard(const model::SystemModel& m, double eps, double hopf_lo,
                              double hopf_hi, const Vec& guess, int scan_steps) {
    Params base{{m.epsilon_param(), eps}};
    Vec g0 = guess.size() ? guess : Vec::Zero(m.dim());

    // Continuation pre-scan: find adjacent lambda values where the complex
    // pair exists and Re changes sign, then hand that sub-bracket to the
    // bisection. Keeps the caller's bracket forgiving.
    auto branch = hopf::continue_equilibrium(m, base, hopf_lo, hopf_hi, scan_steps, g0);
    double lo = hopf_lo, hi = hopf_hi;
    bool found = false;
    std::optional<double> prev_re;
    double prev_lam = hopf_lo;
    Vec warm = g0;
    for (const auto& bp : branch) {
        std::optional<double> re;
        double max_im = 0.0;
        for (const auto& mu : bp.eigenvalues) max_im = std::max(max_im, std::abs(mu.imag()));
        if (max_im > 1e-12) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& mu : bp.eigenvalues)
                if (std::abs(mu.imag()) > 1e-12) best = std::max(best, mu.real());
            re = best;
        }
        if (prev_re && re && (*prev_re < 0.0) != (*re < 0.0)) {
            lo = prev_lam;
            hi = bp.lambda;
            warm = bp.eq.z;
            found = true;
            break;
        }
        prev_re = re;
        prev_lam = bp.lambda;
        if (re) warm = bp.eq.z;
    }
    if (!found)
        throw NoHopfError("predict_canard: no Hopf sign change of the complex pair in [" +
                          std::to_string(hopf_lo) + ", " + std::to_string(hopf_hi) + "]");

    hopf::HopfPoint hp = hopf::locate_hopf(m, base, lo, hi, warm);
    model::BoundSystem sys = m.bind(Params{{m.epsilon_param(), eps},
                                           {m.bifurcation_param(), hp.lambda}});
    lyapunov::Report rep = lyapunov::full_report(sys, hp);

    PipelineResult pr;
    pr.lambda_H = hp.lambda;
    pr.omega0 = hp.omega0;
    pr.l1_ku = rep.l1_ku;
    pr.l1_mc = rep.l1_mc;
    pr.l1_gh = rep.l1_gh;
    pr.l1_clw = rep.l1_clw;
    pr.l1_pe = rep.l1_pe;
    pr.l1_planar = rep.l1_planar;
    pr.hopf_point = hp;
    pr.lyapunov_report = rep;
    // Planar systems get the direct K route; higher dimensions use the
    // dimension-general MatCont relation.
    if (m.dim() == 2 && rep.l1_gh) {
        pr.route = prediction::Route::gh;
        pr.K = prediction::k_from_l1(pr.route, *rep.l1_gh, eps, hp.omega0);
    } else {
        pr.route = prediction::Route::mc;
        pr.K = prediction::k_from_l1(pr.route, rep.l1_mc, eps, hp.omega0);
    }
    pr.lambda_c_pred = prediction::predict_lambda_c(hp.lambda, pr.K, eps, pr.route).lambda_c;
    return pr;
}

namespace {

SweepRow sweep_row(const model::SystemModel& m, double eps, const SweepOptions& opts) {
    SweepRow row;
    row.eps = eps;
    try {
        PipelineResult pr =
            predict_canard(m, eps, opts.hopf_lo, opts.hopf_hi, opts.equilibrium_guess,
                           opts.hopf_scan_steps);
        row.lambda_H = pr.lambda_H;
        row.omega0 = pr.omega0;
        row.l1_mc = pr.l1_mc;
        row.K = pr.K;
        row.route = pr.route;
        row.lambda_c_pred = pr.lambda_c_pred;

        double lo, hi;
        if (opts.oracle_bracket) {
            lo = opts.oracle_bracket->first;
            hi = opts.oracle_bracket->second;
        } else {
            // Bracket around the prediction, biased away from the Hopf
            // point where the exit side is guaranteed to flip back.
            const double d = pr.lambda_H - pr.lambda_c_pred;  // = K*eps
            lo = pr.lambda_H - 3.0 * d;
            hi = pr.lambda_H - 0.4 * d;
            if (lo > hi) std::swap(lo, hi);
        }
        ExitGeometry geom = default_exit_geometry(m, eps);
        OracleResult orc =
            bisect_canard(m, eps, lo, hi, opts.lambda_tol, opts.integrator, geom);
        row.lambda_c_obs = orc.lambda_star;
        row.abs_err = std::abs(row.lambda_c_pred - row.lambda_c_obs);
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.ok = false;
    }
    return row;
}

}  // namespace

SweepResult sweep_epsilon(const model::SystemModel& m, const std::vector<double>& eps_list,
                          const SweepOptions& opts) {
    SweepResult result;
    result.rows.resize(eps_list.size());
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            result.rows[i] = sweep_row(m, eps_list[i], opts);
    } else {
        std::vector<std::future<SweepRow>> futs;
        futs.reserve(eps_list.size());
        for (double eps : eps_list)
            futs.push_back(std::async(std::launch::async, sweep_row, std::cref(m), eps,
                                      std::cref(opts)));
        for (std::size_t i = 0; i < futs.size(); ++i) result.rows[i] = futs[i].get();
    }

    // Log-log regression of |pred - obs| against eps over the good rows.
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : result.rows)
        if (row.ok && row.abs_err > 0.0) pts.emplace_back(std::log(row.eps), std::log(row.abs_err));
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        result.error_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return result;
}

}  // namespace canard::oracle
