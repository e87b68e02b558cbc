#pragma once

#include "canard/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace canard::ode {

struct Settings {
    double rtol = 1e-12;
    double atol = 1e-14;
    double max_step = 0.0;       // 0: no cap beyond the interval length
    double initial_step = 0.0;   // 0: automatic
    long long max_steps = 10'000'000;
    double blowup_norm = 1e6;    // sup-norm guard on the state
    bool record = false;         // keep (t, y) at accepted steps
};

/// Scalar section g(t, y); a crossing fires when g changes sign across an
/// accepted step in the requested direction (+1 up, -1 down, 0 any).
/// Crossings are strict: a step that starts exactly on the section does
/// not fire until g has left zero.
struct Section {
    std::function<double(double, const Vec&)> g;
    int direction = 0;
};

enum class Status { reached_end, event, blowup, step_underflow, step_budget };

struct Stats {
    long long n_rhs = 0, n_accepted = 0, n_rejected = 0;
};

struct Result {
    Status status = Status::reached_end;
    double t = 0.0;
    Vec y;
    int event_index = -1;  // which section fired (status == event)
    Stats stats;
    std::vector<double> ts;   // recorded trajectory (Settings::record)
    std::vector<Vec> ys;
};

/// Adaptive Dormand-Prince 5(4) with PI step-size control and a 4th-order
/// continuous extension used for event localization (|t| refined to
/// 1e-12 * max(1, |t|)). Integrates forward or backward (t1 < t0).
Result integrate(const std::function<Vec(double, const Vec&)>& f, double t0, const Vec& y0,
                 double t1, const Settings& settings = {}, std::span<const Section> sections = {});

}  // namespace canard::ode
