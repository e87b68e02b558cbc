#include "canard/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace canard::linalg {

Mat jacobian(const model::BoundSystem& sys, const Vec& state, const JacobianScheme& scheme) {
    const int n = sys.n;
    if (state.size() != n) throw Error("jacobian: state dimension mismatch");
    if (scheme.kind == JacobianScheme::Kind::analytic) {
        if (!sys.jac) throw Error("jacobian: no analytic Jacobian available");
        Mat J = sys.jac(state);
        if (!J.allFinite()) throw EvalError("jacobian: analytic Jacobian not finite");
        return J;
    }
    Mat J(n, n);
    Vec zp = state, zm = state;
    for (int j = 0; j < n; ++j) {
        const double h = scheme.h * std::max(1.0, std::abs(state[j]));
        zp[j] = state[j] + h;
        zm[j] = state[j] - h;
        J.col(j) = (sys.rhs(zp) - sys.rhs(zm)) / (2.0 * h);
        zp[j] = state[j];
        zm[j] = state[j];
    }
    if (!J.allFinite()) throw EvalError("jacobian: finite differences produced non-finite entries");
    return J;
}

std::vector<EigenPair> eigen_small(const Mat& M) {
    const int n = static_cast<int>(M.rows());
    if (n > 16) throw Error("eigen_small: dimension exceeds 16");
    if (M.rows() != M.cols()) throw Error("eigen_small: matrix not square");
    Eigen::EigenSolver<Mat> es(M);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("eigen_small: QR iteration did not converge");
    const double scale = std::max(M.norm(), 1e-300);
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        EigenPair p{es.eigenvalues()[i], es.eigenvectors().col(i)};
        double residual = (M * p.vector - p.value * p.vector).norm();
        if (residual > 1e-10 * scale)
            throw ConvergenceError("eigen_small: eigenpair residual " + std::to_string(residual) +
                                   " exceeds contract");
        out.push_back(std::move(p));
    }
    return out;
}

CVec solve_complex_shifted(const Mat& M, Complex shift, const CVec& rhs) {
    CMat A = -M.cast<Complex>();
    A.diagonal().array() += shift;
    Eigen::PartialPivLU<CMat> lu(A);
    CVec x = lu.solve(rhs);
    // One step of iterative refinement keeps the residual at the contract
    // level even for moderately conditioned shifts.
    x += lu.solve(rhs - A * x);
    const double rhs_norm = std::max(rhs.norm(), 1e-300);
    const double residual = (A * x - rhs).norm();
    if (!x.allFinite() || residual > 1e-12 * rhs_norm)
        throw SingularSystemError("solve_complex_shifted: shifted system is singular or "
                                  "ill-conditioned (residual " + std::to_string(residual) + ")");
    return x;
}

}  // namespace canard::linalg
