#include "canard/lyapunov.hpp"

#include "canard/linalg.hpp"

#include <cmath>

namespace canard::lyapunov {

namespace {

constexpr double kResonanceGap = 1e-6;

void check_resonance(const Mat& J, double omega0) {
    for (const auto& pr : linalg::eigen_small(J)) {
        if (std::abs(pr.value - Complex(0.0, 2.0 * omega0)) < kResonanceGap)
            throw ResonanceError("2*i*omega0 is within " + std::to_string(kResonanceGap) +
                                 " of the spectrum");
    }
}

Complex dot_p(const CVec& p, const CVec& v) { return (p.adjoint() * v)(0); }

// Partials of a planar map at the origin through the multilinear forms:
// second derivatives from B with basis vectors, third from C.
struct PlanarPartials {
    double fxx, fxy, fyy, gxx, gxy, gyy;
    double fxxx, fxxy, fxyy, fyyy, gxxx, gxxy, gxyy, gyyy;
};

PlanarPartials planar_partials(const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f,
                               const multilinear::Steps& steps) {
    auto rhs = [&f](const Vec& z) -> Vec {
        Eigen::Vector2d r = f(Eigen::Vector2d(z[0], z[1]));
        Vec out(2);
        out << r[0], r[1];
        return out;
    };
    multilinear::ExpansionPoint at(rhs, Vec::Zero(2));
    Vec e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    Vec b11 = multilinear::bilinear_B(at, e1, e1, steps);
    Vec b12 = multilinear::bilinear_B(at, e1, e2, steps);
    Vec b22 = multilinear::bilinear_B(at, e2, e2, steps);
    Vec c111 = multilinear::trilinear_C(at, e1, e1, e1, steps);
    Vec c112 = multilinear::trilinear_C(at, e1, e1, e2, steps);
    Vec c122 = multilinear::trilinear_C(at, e1, e2, e2, steps);
    Vec c222 = multilinear::trilinear_C(at, e2, e2, e2, steps);
    PlanarPartials p{};
    p.fxx = b11[0];
    p.fxy = b12[0];
    p.fyy = b22[0];
    p.gxx = b11[1];
    p.gxy = b12[1];
    p.gyy = b22[1];
    p.fxxx = c111[0];
    p.fxxy = c112[0];
    p.fxyy = c122[0];
    p.fyyy = c222[0];
    p.gxxx = c111[1];
    p.gxxy = c112[1];
    p.gxyy = c122[1];
    p.gyyy = c222[1];
    return p;
}

}  // namespace

double l1_kuznetsov(const Mat& J, double omega0, const CVec& q, const CVec& p,
                    const multilinear::ExpansionPoint& at, const multilinear::Steps& steps) {
    check_resonance(J, omega0);
    const CVec qb = q.conjugate();

    const Complex t_cubic = dot_p(p, multilinear::trilinear_C(at, q, q, qb, steps));

    // B(q, qb) is real by symmetry; solve J x = B(q,qb) through the shifted
    // solver (shift 0 returns -J^{-1} rhs).
    CVec b_qqb = multilinear::bilinear_B(at, q, qb, steps);
    CVec x = -linalg::solve_complex_shifted(J, Complex(0.0, 0.0), b_qqb);
    const Complex t_mixed = dot_p(p, multilinear::bilinear_B(at, q, x, steps));

    CVec b_qq = multilinear::bilinear_B(at, q, q, steps);
    CVec y = linalg::solve_complex_shifted(J, Complex(0.0, 2.0 * omega0), b_qq);
    const Complex t_shift = dot_p(p, multilinear::bilinear_B(at, qb, y, steps));

    return (t_cubic - 2.0 * t_mixed + t_shift).real() / (2.0 * omega0);
}

double l1_matcont(const Mat& J, double omega0, const CVec& q, const CVec& p,
                  const multilinear::ExpansionPoint& at, const multilinear::Steps& steps) {
    return omega0 * l1_kuznetsov(J, omega0, q, p, at, steps);
}

GCoefficients g_coefficients(const CVec& q, const CVec& p, const multilinear::ExpansionPoint& at,
                             const multilinear::Steps& steps) {
    if (q.size() != 2) throw Error("g_coefficients: system dimension must be 2");
    const CVec qb = q.conjugate();
    GCoefficients g;
    g.g20 = dot_p(p, multilinear::bilinear_B(at, q, q, steps));
    g.g11 = dot_p(p, multilinear::bilinear_B(at, q, qb, steps));
    g.g21 = dot_p(p, multilinear::trilinear_C(at, q, q, qb, steps));
    return g;
}

double l1_planar_g(const GCoefficients& g, double omega0) {
    return (Complex(0, 1) * g.g20 * g.g11 + omega0 * g.g21).real() / (2.0 * omega0 * omega0);
}

PlanarSystemAtHopf::PlanarSystemAtHopf(
    const Eigen::Matrix2d& M_, std::function<Eigen::Vector2d(const Eigen::Vector2d&)> remainder_,
    double omega0_)
    : M(M_), remainder(std::move(remainder_)), omega0(omega0_) {
    const double scale = std::max(1.0, M.norm());
    if (std::abs(M.trace()) > 1e-6 * scale)
        throw Error("PlanarSystemAtHopf: trace(M) = " + std::to_string(M.trace()) +
                    " is not zero at the Hopf point");
    if (std::abs(M.determinant() - omega0 * omega0) > 1e-6 * scale * scale)
        throw Error("PlanarSystemAtHopf: det(M) != omega0^2");
}

JordanizedPlanar jordan_transform_planar(const PlanarSystemAtHopf& sys, const CVec& q) {
    if (q.size() != 2) throw Error("jordan_transform_planar: eigenvector dimension must be 2");
    if (std::abs(q[0]) < 1e-12 * q.norm())
        throw SingularSystemError("jordan_transform_planar: first eigenvector component vanishes");
    // Rescale so the first row of N is (1, 0).
    const CVec qt = q / (2.0 * q[0]);
    Eigen::Matrix2d N;
    N << 2.0 * qt[0].real(), -2.0 * qt[0].imag(),
         2.0 * qt[1].real(), -2.0 * qt[1].imag();
    if (std::abs(N.determinant()) < 1e-12)
        throw SingularSystemError("jordan_transform_planar: transform is singular "
                                  "(eigenvector has no imaginary part)");
    Eigen::Matrix2d N_inv = N.inverse();

    Eigen::Matrix2d rot;
    rot << 0.0, -sys.omega0, sys.omega0, 0.0;
    if (((N_inv * sys.M * N) - rot).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, sys.M.norm()))
        throw Error("jordan_transform_planar: N^{-1} M N is not the rotation block");

    JordanizedPlanar out;
    out.N = N;
    out.N_inv = N_inv;
    out.omega0 = sys.omega0;
    out.remainder = [N, N_inv, f = sys.remainder](const Eigen::Vector2d& uv) {
        return (N_inv * f(N * uv)).eval();
    };
    return out;
}

double l1_gh(const JordanizedPlanar& j, const multilinear::Steps& steps) {
    const PlanarPartials p = planar_partials(j.remainder, steps);
    const double w = j.omega0;
    return (p.fxxx + p.fxyy + p.gxxy + p.gyyy) / 16.0 +
           (p.fxy * (p.fxx + p.fyy) - p.gxy * (p.gxx + p.gyy) - p.fxx * p.gxx +
            p.fyy * p.gyy) /
               (16.0 * w);
}

double l1_clw(const PlanarSystemAtHopf& sys, const multilinear::Steps& steps) {
    const PlanarPartials d = planar_partials(sys.remainder, steps);
    const double w = sys.omega0;
    const double m12 = sys.M(0, 1), m21 = sys.M(1, 0), m22 = sys.M(1, 1);
    if (m12 == 0.0)
        throw SingularSystemError("l1_clw: m12 = 0 is incompatible with a complex pair");

    const double cubic =
        w * w * (m12 * (d.fxxx + d.gxxy) + 2.0 * m22 * (d.fxxy + d.gxyy) -
                 m21 * (d.fxyy + d.gyyy));
    const double q1 = -m12 * m22 *
                      (d.fxx * d.fxx - d.fxx * d.gxy - d.fxy * d.gxx - d.gxx * d.gyy -
                       2.0 * d.gxy * d.gxy);
    const double q2 = -m21 * m22 *
                      (d.gyy * d.gyy - d.gyy * d.fxy - d.gxy * d.fyy - d.fxx * d.fyy -
                       2.0 * d.fxy * d.fxy);
    const double q3 = m12 * m12 * (d.fxx * d.gxx + d.gxx * d.gxy);
    const double q4 = -m21 * m21 * (d.fyy * d.gyy + d.fxy * d.fyy);
    const double q5 = -(w * w + 3.0 * m22 * m22) * (d.fxx * d.fxy - d.gxy * d.gyy);

    return (cubic + q1 + q2 + q3 + q4 + q5) / (16.0 * w * w * m12);
}

double l1_pe(const JordanizedPlanar& j, const multilinear::Steps& steps) {
    const PlanarPartials p = planar_partials(j.remainder, steps);
    const double w = j.omega0;
    const double quad = p.fxy * p.fyy + p.fyy * p.gyy - p.fxx * p.gxx - p.gxy * p.gxx -
                        p.gxy * p.gyy + p.fxy * p.fxx;
    const double cubic = p.gyyy + p.fxxx + p.fxyy + p.gxxy;
    return 3.0 * M_PI / (4.0 * w * w) * (quad + w * cubic);
}

Criticality classify_criticality(double l1, double threshold) {
    if (std::abs(l1) <= threshold)
        throw DegenerateHopfError("first Lyapunov coefficient " + std::to_string(l1) +
                                  " below degeneracy threshold");
    return l1 < 0.0 ? Criticality::supercritical : Criticality::subcritical;
}

Report full_report(const model::BoundSystem& sys, const hopf::HopfPoint& hp,
                   const multilinear::Steps& steps) {
    const Vec z0 = hp.eq.z;
    multilinear::ExpansionPoint at(sys.rhs, z0);
    Report r;
    r.l1_ku = l1_kuznetsov(hp.eq.jacobian, hp.omega0, hp.q, hp.p, at, steps);
    r.l1_mc = hp.omega0 * r.l1_ku;
    if (sys.n == 2) {
        r.g = g_coefficients(hp.q, hp.p, at, steps);
        r.l1_planar = l1_planar_g(*r.g, hp.omega0);
        Eigen::Matrix2d M = hp.eq.jacobian;
        auto rem = [rhs = sys.rhs, z0, M](const Eigen::Vector2d& u) -> Eigen::Vector2d {
            Vec z(2);
            z << z0[0] + u[0], z0[1] + u[1];
            Vec f = rhs(z);
            return Eigen::Vector2d(f[0], f[1]) - M * u;
        };
        PlanarSystemAtHopf planar(M, rem, hp.omega0);
        r.l1_clw = l1_clw(planar, steps);
        JordanizedPlanar jor = jordan_transform_planar(planar, hp.q);
        r.l1_gh = l1_gh(jor, steps);
        r.l1_pe = l1_pe(jor, steps);
    }
    r.criticality = classify_criticality(r.l1_ku);
    return r;
}

}  // namespace canard::lyapunov
