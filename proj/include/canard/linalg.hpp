#pragma once

#include "canard/model.hpp"
#include "canard/types.hpp"

#include <optional>
#include <vector>

namespace canard::linalg {

/// Derivative scheme for jacobian(). `analytic` requires the system to
/// carry an analytic Jacobian; `central_fd` uses central differences with
/// per-column step h*max(1, |state_j|).
struct JacobianScheme {
    enum class Kind { analytic, central_fd } kind = Kind::central_fd;
    double h = 6.055454452393343e-06;  // cbrt(machine epsilon)

    static JacobianScheme analytic() { return {Kind::analytic, 0.0}; }
    static JacobianScheme central_fd(double step = 6.055454452393343e-06) {
        return {Kind::central_fd, step};
    }
};

Mat jacobian(const model::BoundSystem& sys, const Vec& state,
             const JacobianScheme& scheme = {});

struct EigenPair {
    Complex value;
    CVec vector;
};

/// All eigenpairs of a small (n <= 16) real matrix. Complex pairs come out
/// conjugate-consistent. Residual contract: ||M v - mu v|| <= 1e-10 ||M||.
std::vector<EigenPair> eigen_small(const Mat& M);

/// Solve (shift*I - M) x = rhs. Note the sign: with shift = 0 this returns
/// -M^{-1} rhs. Throws SingularSystemError when the shifted matrix is
/// singular to working precision (e.g. 2*i*omega0 resonance).
CVec solve_complex_shifted(const Mat& M, Complex shift, const CVec& rhs);

}  // namespace canard::linalg
