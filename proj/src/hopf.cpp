#include "canard/hopf.hpp"

#include <Eigen/LU>

#include <cmath>

namespace canard::hopf {

namespace {

Mat system_jacobian(const model::BoundSystem& sys, const Vec& z) {
    if (sys.jac) return linalg::jacobian(sys, z, linalg::JacobianScheme::analytic());
    return linalg::jacobian(sys, z, linalg::JacobianScheme::central_fd());
}

}  // namespace

Equilibrium find_equilibrium(const model::BoundSystem& sys, const Vec& guess,
                             const NewtonOptions& opts) {
    if (!guess.allFinite()) throw Error("find_equilibrium: non-finite guess");
    Vec z = guess;
    Vec F = sys.rhs(z);
    double res = F.norm();
    for (int it = 0; it < opts.max_iter; ++it) {
        if (res <= opts.tol) {
            return Equilibrium{z, res, system_jacobian(sys, z)};
        }
        Mat J = system_jacobian(sys, z);
        Eigen::PartialPivLU<Mat> lu(J);
        Vec dz = lu.solve(-F);
        if (!dz.allFinite())
            throw SingularSystemError("find_equilibrium: singular Jacobian during iteration");
        // Damped update: halve the step until the residual decreases.
        double step = 1.0;
        Vec z_new;
        double res_new = 0.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            z_new = z + step * dz;
            Vec F_new = sys.rhs(z_new);
            res_new = F_new.norm();
            if (std::isfinite(res_new) && res_new < res) {
                z = z_new;
                F = std::move(F_new);
                res = res_new;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Full-precision stall: accept the tiny step only if already
            // essentially converged, otherwise report failure.
            if (res <= 1e3 * opts.tol) return Equilibrium{z, res, system_jacobian(sys, z)};
            throw ConvergenceError("find_equilibrium: residual stalled at " + std::to_string(res));
        }
    }
    if (res <= opts.tol) return Equilibrium{z, res, system_jacobian(sys, z)};
    throw ConvergenceError("find_equilibrium: no convergence after " +
                           std::to_string(opts.max_iter) + " iterations (residual " +
                           std::to_string(res) + ")");
}

std::vector<BranchPoint> continue_equilibrium(const model::SystemModel& m, const Params& params,
                                              double lo, double hi, int steps, const Vec& guess,
                                              const NewtonOptions& opts) {
    if (lo > hi) throw Error("continue_equilibrium: lo > hi");
    const int npts = (lo == hi) ? 1 : steps + 1;
    std::vector<BranchPoint> branch;
    branch.reserve(static_cast<std::size_t>(npts));
    Vec z = guess;
    for (int i = 0; i < npts; ++i) {
        const double lam = (npts == 1) ? lo : lo + (hi - lo) * i / steps;
        Params p = params;
        p[m.bifurcation_param()] = lam;
        model::BoundSystem sys = m.bind(p);
        Equilibrium eq;
        try {
            eq = find_equilibrium(sys, z, opts);
        } catch (const Error& e) {
            throw ConvergenceError("continuation failed at " + m.bifurcation_param() + " = " +
                                   std::to_string(lam) + ": " + e.what());
        }
        z = eq.z;
        std::vector<Complex> eigs;
        for (const auto& pr : linalg::eigen_small(eq.jacobian)) eigs.push_back(pr.value);
        branch.push_back(BranchPoint{lam, std::move(eq), std::move(eigs)});
    }
    return branch;
}

std::optional<std::pair<double, double>> complex_pair_re_omega(const Mat& J) {
    auto pairs = linalg::eigen_small(J);
    const double imag_floor = 1e-12 * std::max(1.0, J.norm());
    std::optional<std::pair<double, double>> best;
    for (const auto& pr : pairs) {
        if (std::abs(pr.value.imag()) <= imag_floor) continue;
        if (!best || pr.value.real() > best->first)
            best = std::make_pair(pr.value.real(), std::abs(pr.value.imag()));
    }
    return best;
}

HopfPoint locate_hopf(const model::SystemModel& m, const Params& params, double lo, double hi,
                      const Vec& guess, const HopfOptions& opts) {
    if (!(lo < hi)) throw Error("locate_hopf: need lo < hi");
    Vec warm = guess;

    auto probe = [&](double lam) -> std::pair<double, Equilibrium> {
        Params p = params;
        p[m.bifurcation_param()] = lam;
        Equilibrium eq = find_equilibrium(m.bind(p), warm, opts.newton);
        warm = eq.z;
        auto pair = complex_pair_re_omega(eq.jacobian);
        if (!pair)
            throw NoHopfError("locate_hopf: spectrum at " + m.bifurcation_param() + " = " +
                              std::to_string(lam) +
                              " has no complex pair (real eigenvalue crossing?)");
        return {pair->first, std::move(eq)};
    };

    auto [re_lo, eq_lo] = probe(lo);
    auto [re_hi, eq_hi] = probe(hi);
    if (re_lo == 0.0 || re_hi == 0.0) {
        // An endpoint is already on the bifurcation; fall through with it.
    } else if ((re_lo < 0.0) == (re_hi < 0.0)) {
        throw NoHopfError("locate_hopf: no sign change of Re(mu) over [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "] (Re = " + std::to_string(re_lo) + ", " +
                          std::to_string(re_hi) + ")");
    }
    double mid = 0.5 * (lo + hi), re_mid = re_lo;
    Equilibrium eq_mid = eq_lo;
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        // Secant proposal accelerates the tail; fall back to the midpoint
        // whenever it leaves the bracket.
        double cand = 0.5 * (lo + hi);
        if (re_hi != re_lo) {
            double secant = lo - re_lo * (hi - lo) / (re_hi - re_lo);
            const double margin = 0.01 * (hi - lo);
            if (secant > lo + margin && secant < hi - margin) cand = secant;
        }
        mid = cand;
        std::tie(re_mid, eq_mid) = probe(mid);
        if (std::abs(re_mid) <= opts.tol) {
            converged = true;
            break;
        }
        if ((re_mid < 0.0) == (re_lo < 0.0)) {
            lo = mid;
            re_lo = re_mid;
        } else {
            hi = mid;
            re_hi = re_mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
            converged = std::abs(re_mid) <= 1e3 * opts.tol;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("locate_hopf: |Re(mu)| = " + std::to_string(std::abs(re_mid)) +
                               " did not reach tolerance");

    auto pair = complex_pair_re_omega(eq_mid.jacobian);
    const double omega0 = pair->second;
    auto [q, p] = hopf_eigenvectors(eq_mid.jacobian, omega0);

    HopfPoint out;
    out.lambda = mid;
    out.eq = eq_mid;
    out.omega0 = omega0;
    out.q = std::move(q);
    out.p = std::move(p);
    // Transversality estimate across the final bracket.
    out.d_re_d_lambda = (re_hi - re_lo) / std::max(hi - lo, 1e-300);
    return out;
}

std::pair<CVec, CVec> hopf_eigenvectors(const Mat& J, double omega0) {
    const Complex target(0.0, omega0);
    auto pick = [](const std::vector<linalg::EigenPair>& pairs, Complex want) {
        std::size_t best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            double d = std::abs(pairs[i].value - want);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return std::make_pair(pairs[best].vector, dist);
    };

    auto [q, dq] = pick(linalg::eigen_small(J), target);
    const double scale = std::max(1.0, J.norm());
    if (dq > 1e-6 * scale)
        throw NoHopfError("hopf_eigenvectors: i*omega0 is not an eigenvalue (distance " +
                          std::to_string(dq) + ")");
    q.normalize();  // conj(q)^T q = 1
    // Phase convention: largest-modulus component real and positive.
    int k = 0;
    q.cwiseAbs().maxCoeff(&k);
    q *= std::exp(Complex(0.0, -std::arg(q[k])));

    auto [p, dp] = pick(linalg::eigen_small(J.transpose()), -target);
    if (dp > 1e-6 * scale)
        throw NoHopfError("hopf_eigenvectors: -i*omega0 missing from transpose spectrum");
    const Complex s = p.adjoint() * q;  // conj(p)^T q before normalization
    if (std::abs(s) < 1e-8)
        throw SingularSystemError("hopf_eigenvectors: eigenvector pairing is ill-conditioned "
                                  "(|<p,q>| = " + std::to_string(std::abs(s)) + ")");
    p /= std::conj(s);
    return {std::move(q), std::move(p)};
}

}  // namespace canard::hopf
