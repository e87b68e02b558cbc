#pragma once

#include "canard/types.hpp"

#include <functional>

namespace canard::multilinear {

/// Equilibrium of a system together with the RHS to differentiate there.
/// Construction verifies ||rhs(z0)|| <= 1e-10.
struct ExpansionPoint {
    std::function<Vec(const Vec&)> rhs;
    Vec z0;

    ExpansionPoint(std::function<Vec(const Vec&)> rhs_, Vec z0_);
    int dim() const { return static_cast<int>(z0.size()); }
};

/// Finite-difference steps for the second/third derivative forms. The
/// defaults balance truncation against rounding for central stencils of
/// the respective order; both scale internally by max(1, ||z0||).
struct Steps {
    double h2 = 1.2207031250000000e-04;  // eps_machine^(1/4)
    double h3 = 7.4009597974823566e-04;  // eps_machine^(1/5)
    bool richardson = false;             // one (h, h/2) extrapolation level
};

/// Symmetric bilinear form B(u,v): second derivative of the RHS at z0.
/// Exact (to rounding) for polynomial RHS of degree <= 3; the linear part
/// cancels in the central stencil and never contaminates the result.
Vec bilinear_B(const ExpansionPoint& at, const Vec& u, const Vec& v, const Steps& steps = {});

/// Symmetric trilinear form C(u,v,w): third derivative of the RHS at z0.
/// Exact (to rounding) for polynomial RHS of degree <= 4.
Vec trilinear_C(const ExpansionPoint& at, const Vec& u, const Vec& v, const Vec& w,
                const Steps& steps = {});

/// Complex arguments, expanded over real/imaginary parts by multilinearity
/// (the RHS itself is only ever evaluated at real points).
CVec bilinear_B(const ExpansionPoint& at, const CVec& u, const CVec& v, const Steps& steps = {});
CVec trilinear_C(const ExpansionPoint& at, const CVec& u, const CVec& v, const CVec& w,
                 const Steps& steps = {});

}  // namespace canard::multilinear
