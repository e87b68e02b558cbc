#include "canard/multilinear.hpp"

namespace canard::multilinear {

ExpansionPoint::ExpansionPoint(std::function<Vec(const Vec&)> rhs_, Vec z0_)
    : rhs(std::move(rhs_)), z0(std::move(z0_)) {
    const double r = rhs(z0).norm();
    if (!(r <= 1e-10))
        throw Error("ExpansionPoint: not an equilibrium (||F(z0)|| = " + std::to_string(r) + ")");
}

namespace {

// Directional second derivative D^2_w F via the central stencil; the
// direction is normalized and the result rescaled by ||w||^2 so the step
// size is independent of the caller's vector lengths.
Vec dir2(const ExpansionPoint& at, const Vec& w, double h) {
    const double nw = w.norm();
    if (nw == 0.0) return Vec::Zero(at.dim());
    const Vec wh = w / nw;
    Vec d = (at.rhs(at.z0 + h * wh) - 2.0 * at.rhs(at.z0) + at.rhs(at.z0 - h * wh)) / (h * h);
    return (nw * nw) * d;
}

// Directional third derivative D^3_d F.
Vec dir3(const ExpansionPoint& at, const Vec& d, double h) {
    const double nd = d.norm();
    if (nd == 0.0) return Vec::Zero(at.dim());
    const Vec dh = d / nd;
    Vec r = (at.rhs(at.z0 + 2.0 * h * dh) - 2.0 * at.rhs(at.z0 + h * dh) +
             2.0 * at.rhs(at.z0 - h * dh) - at.rhs(at.z0 - 2.0 * h * dh)) /
            (2.0 * h * h * h);
    return (nd * nd * nd) * r;
}

Vec bilinear_at_step(const ExpansionPoint& at, const Vec& u, const Vec& v, double h) {
    return 0.25 * (dir2(at, u + v, h) - dir2(at, u - v, h));
}

Vec trilinear_at_step(const ExpansionPoint& at, const Vec& u, const Vec& v, const Vec& w,
                      double h) {
    return (dir3(at, u + v + w, h) - dir3(at, u + v - w, h) - dir3(at, u - v + w, h) +
            dir3(at, u - v - w, h)) /
           24.0;
}

void check_finite(const Vec& r, const char* what) {
    if (!r.allFinite()) throw EvalError(std::string(what) + ": non-finite result");
}

}  // namespace

Vec bilinear_B(const ExpansionPoint& at, const Vec& u, const Vec& v, const Steps& steps) {
    const double h = steps.h2 * std::max(1.0, at.z0.norm());
    Vec r = bilinear_at_step(at, u, v, h);
    if (steps.richardson) {
        Vec r2 = bilinear_at_step(at, u, v, 0.5 * h);
        r = (4.0 * r2 - r) / 3.0;
    }
    check_finite(r, "bilinear_B");
    return r;
}

Vec trilinear_C(const ExpansionPoint& at, const Vec& u, const Vec& v, const Vec& w,
                const Steps& steps) {
    const double h = steps.h3 * std::max(1.0, at.z0.norm());
    Vec r = trilinear_at_step(at, u, v, w, h);
    if (steps.richardson) {
        Vec r2 = trilinear_at_step(at, u, v, w, 0.5 * h);
        r = (4.0 * r2 - r) / 3.0;
    }
    check_finite(r, "trilinear_C");
    return r;
}

CVec bilinear_B(const ExpansionPoint& at, const CVec& u, const CVec& v, const Steps& steps) {
    const Vec ur = u.real(), ui = u.imag(), vr = v.real(), vi = v.imag();
    Vec re = bilinear_B(at, ur, vr, steps) - bilinear_B(at, ui, vi, steps);
    Vec im = bilinear_B(at, ur, vi, steps) + bilinear_B(at, ui, vr, steps);
    return re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
}

CVec trilinear_C(const ExpansionPoint& at, const CVec& u, const CVec& v, const CVec& w,
                 const Steps& steps) {
    const Vec parts[3][2] = {{u.real(), u.imag()}, {v.real(), v.imag()}, {w.real(), w.imag()}};
    CVec out = CVec::Zero(at.dim());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Complex factor = 1.0;
                if (a) factor *= Complex(0, 1);
                if (b) factor *= Complex(0, 1);
                if (c) factor *= Complex(0, 1);
                Vec term = trilinear_C(at, parts[0][a], parts[1][b], parts[2][c], steps);
                out += factor * term.cast<Complex>();
            }
    return out;
}

}  // namespace canard::multilinear
