#pragma once

#include "canard/hopf.hpp"
#include "canard/integrate.hpp"
#include "canard/lyapunov.hpp"
#include "canard/model.hpp"
#include "canard/prediction.hpp"
#include "canard/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace canard::oracle {

struct IntegratorSettings {
    double rtol = 1e-12;
    double atol = 1e-14;
    double max_step = 0.0;
    double max_time = 0.0;  // 0: geometry supplies a budget
    long long max_steps = 10'000'000;
    double blowup_norm = 1e6;
    bool record = false;
};

enum class ExitSide { left, right };
const char* side_name(ExitSide s);

/// Geometry of one classification experiment: where to start, which state
/// coordinate the exit sections cut, and how long to integrate. When
/// `timeout_side` is set, exhausting the time budget classifies to that
/// side (used where one outcome is "stays in the fold region"); otherwise
/// a timeout is an error.
struct ExitGeometry {
    std::function<Vec(const Params&)> seed;
    int section_state = 0;
    double left_value = 0.0;
    int left_direction = -1;
    double right_value = 0.0;
    int right_direction = +1;
    double settle_time = 0.0;   // transient allowance folded into the budget
    double classify_time = 0.0; // post-transient budget
    bool reverse_time = false;
    std::optional<ExitSide> timeout_side;
};

/// Time-reversed van der Pol: seed on the attracting middle branch of the
/// critical parabola, exits at x = +-1.
ExitGeometry vdp_exit_geometry(double eps, double seed_x = -1.0, double left = -1.0,
                               double right = 1.0);

/// FitzHugh-Nagumo: integrate backward in time (the middle branch of the
/// cubic is then attracting), seed on it, and watch for the jump off the
/// lower fold (left) versus the turn back over it (right, or by timeout
/// when the trajectory locks onto the nearby cycle).
ExitGeometry fhn_exit_geometry(double eps, double seed_x1 = 0.35, double left_offset = 0.75,
                               double right_offset = 0.25);

ExitGeometry default_exit_geometry(const model::SystemModel& m, double eps);

struct Classification {
    ExitSide side = ExitSide::left;
    bool by_timeout = false;
    double t_exit = 0.0;
    ode::Stats stats;
    std::vector<double> ts;  // recorded when IntegratorSettings::record
    std::vector<Vec> ys;
};

Classification classify_exit(const model::SystemModel& m, const Params& params,
                             const IntegratorSettings& settings, const ExitGeometry& geometry);

struct TraceEntry {
    double lambda = 0.0;
    ExitSide side = ExitSide::left;
    bool by_timeout = false;
};

struct OracleResult {
    double lambda_lo = 0.0, lambda_hi = 0.0;
    double lambda_star = 0.0;  // bracket midpoint
    ExitSide lo_side = ExitSide::left, hi_side = ExitSide::right;
    std::vector<TraceEntry> trace;
    ode::Stats stats;
};

/// Bisection of the bifurcation parameter on the exit side. Endpoints must
/// classify to opposite sides; the trace is checked for monotonicity.
OracleResult bisect_canard(const model::SystemModel& m, double eps, double lambda_lo,
                           double lambda_hi, double lambda_tol,
                           const IntegratorSettings& settings, const ExitGeometry& geometry);

struct SweepRow {
    double eps = 0.0;
    double lambda_H = 0.0, omega0 = 0.0, l1_mc = 0.0, K = 0.0;
    double lambda_c_pred = 0.0, lambda_c_obs = 0.0, abs_err = 0.0;
    prediction::Route route = prediction::Route::mc;
    std::string error;  // empty on success
    bool ok = false;
};

struct SweepOptions {
    double hopf_lo = 0.0, hopf_hi = 0.0;  // Hopf-search bracket (required)
    Vec equilibrium_guess;                // empty: zeros
    std::optional<std::pair<double, double>> oracle_bracket;  // applied to every row
    double lambda_tol = 1e-9;
    int hopf_scan_steps = 60;
    int jobs = 1;
    IntegratorSettings integrator;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> error_slope;  // log-log fit of |pred - obs| vs eps
};

/// Full pipeline (Hopf -> Lyapunov -> prediction -> oracle) per epsilon.
/// Rows that fail record the error and the sweep continues.
SweepResult sweep_epsilon(const model::SystemModel& m, const std::vector<double>& eps_list,
                          const SweepOptions& opts);

/// Convenience for one epsilon: locate the Hopf point inside [hopf_lo,
/// hopf_hi] (with a continuation pre-scan to find the sign change) and
/// return the prediction for the requested route.
struct PipelineResult {
    double lambda_H = 0.0, omega0 = 0.0;
    double l1_ku = 0.0, l1_mc = 0.0;
    std::optional<double> l1_gh, l1_clw, l1_pe, l1_planar;
    double K = 0.0;
    prediction::Route route = prediction::Route::mc;
    double lambda_c_pred = 0.0;
    hopf::HopfPoint hopf_point;
    lyapunov::Report lyapunov_report;
};

PipelineResult predict_canard(const model::SystemModel& m, double eps, double hopf_lo,
                              double hopf_hi, const Vec& guess, int scan_steps = 60);

}  // namespace canard::oracle
