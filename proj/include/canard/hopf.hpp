#pragma once

#include "canard/linalg.hpp"
#include "canard/model.hpp"
#include "canard/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace canard::hopf {

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
};

struct Equilibrium {
    Vec z;
    double residual = 0.0;
    Mat jacobian;
};

/// Damped Newton iteration for F(z) = 0 from `guess`; steps are halved
/// while the residual fails to decrease.
Equilibrium find_equilibrium(const model::BoundSystem& sys, const Vec& guess,
                             const NewtonOptions& opts = {});

struct BranchPoint {
    double lambda;
    Equilibrium eq;
    std::vector<Complex> eigenvalues;
};

/// Natural-parameter continuation of the equilibrium over
/// [lo, hi] in the model's bifurcation parameter, warm-starting each
/// solve from the previous point. `steps` intervals (steps+1 points);
/// lo == hi degenerates to a single point.
std::vector<BranchPoint> continue_equilibrium(const model::SystemModel& m, const Params& params,
                                              double lo, double hi, int steps, const Vec& guess,
                                              const NewtonOptions& opts = {});

struct HopfPoint {
    double lambda = 0.0;
    Equilibrium eq;
    double omega0 = 0.0;
    CVec q, p;
    double d_re_d_lambda = 0.0;  // transversality estimate across the final bracket
};

struct HopfOptions {
    double tol = 1e-10;  // |Re mu| at acceptance
    int max_iter = 200;
    NewtonOptions newton{};
};

/// Real part and frequency of the complex-conjugate eigenvalue pair with
/// the largest real part; nullopt when the spectrum is purely real.
std::optional<std::pair<double, double>> complex_pair_re_omega(const Mat& J);

/// Bisection (with secant acceleration) on Re of the tracked complex pair
/// over [lo, hi]. Requires a sign change; a probe whose spectrum has no
/// complex pair aborts with NoHopfError (real crossing / bad bracket).
HopfPoint locate_hopf(const model::SystemModel& m, const Params& params, double lo, double hi,
                      const Vec& guess, const HopfOptions& opts = {});

/// Right/left eigenvectors for the pair (i*omega0, -i*omega0):
/// q with conj(q)^T q = 1, phase fixed so the largest-modulus component is
/// real and positive; p from J^T with conj(p)^T q = 1.
std::pair<CVec, CVec> hopf_eigenvectors(const Mat& J, double omega0);

}  // namespace canard::hopf
