#pragma once

#include "canard/model.hpp"
#include "canard/types.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace canard::prediction {

/// Which Lyapunov convention (or the analytic normal form) produced K.
enum class Route { analytic, ku, mc, gh, clw, pe };

const char* route_name(Route r);

/// Canard constant from a first Lyapunov coefficient:
///   ku:  K = l1 * sqrt(eps) / 4
///   mc:  K = l1 * sqrt(eps) / (4 omega0)
///   gh:  K = l1
///   clw: K = l1
///   pe:  K = l1 * 64 omega0 / (3 pi)   (informational; see README)
double k_from_l1(Route route, double l1, double eps, double omega0);

struct CanardPrediction {
    double lambda_H = 0.0;
    double K = 0.0;
    double epsilon = 0.0;
    double lambda_c = 0.0;  // lambda_H - K*epsilon, exactly
    Route route = Route::mc;
    static constexpr const char* error_order = "O(eps^(3/2))";
};

CanardPrediction predict_lambda_c(double lambda_H, double K, double eps, Route route);

/// Coefficients of the canard-point normal form
///   x' = -y h1 + x^2 h2 + eps h3,  y' = eps (x h4 - lambda h5 + y h6)
/// read off as x-derivatives of the h_i at the origin.
struct NormalFormCoeffs {
    double a1, a2, a3, a4, a5;  // a1=(h3)_x, a2=(h1)_x, a3=(h2)_x, a4=(h4)_x, a5=(h6)_x
    double A;                   // -a2 + 3 a3 - 2 a4 - 2 a5
    double K;                   // A / 8
};

using HFunc = std::function<double(double x, double y, double lambda, double eps)>;

/// a_i by central differences in x at (0,0,0,0); A and K by their exact
/// defining formulas.
NormalFormCoeffs normal_form_constants(const std::array<HFunc, 6>& h,
                                       double fd_step = 6.055454452393343e-06);

/// Leading-order normal-form predictions:
///   lambda_H = -(a1+a5)/2 * eps,  lambda_c = -((a1+a5)/2 + A/8) * eps.
std::pair<double, double> analytic_predictions(const NormalFormCoeffs& c, double eps);

/// One nondegeneracy condition with its measured value and verdict.
struct ConditionCheck {
    std::string name;
    double value = 0.0;
    bool want_zero = false;
    bool pass = false;
};

struct CanardPointReport {
    std::vector<ConditionCheck> conditions;
    bool all_pass = false;
};

/// Fold and canard-point conditions for a planar fast-slow model at
/// `point` with the given bifurcation-parameter value, estimated by
/// central differences at eps = 0:
///   f = 0, f_x = 0, f_xx != 0, f_y != 0   (fold)
///   g = 0, g_x != 0, g_lambda != 0        (canard point; g is the slow
///                                          RHS with the leading eps
///                                          factor removed)
CanardPointReport check_canard_point(const model::SystemModel& m, const Vec& point, double lambda,
                                     double fd_step = 1e-6, double zero_tol = 1e-8,
                                     double nonzero_tol = 1e-6);

}  // namespace canard::prediction
