#pragma once

#include "canard/hopf.hpp"
#include "canard/multilinear.hpp"
#include "canard/types.hpp"

#include <functional>
#include <optional>

namespace canard::lyapunov {

/// Kuznetsov first Lyapunov coefficient (any dimension n >= 2):
///   l1 = Re[ <p, C(q,q,qb)> - 2 <p, B(q, J^-1 B(q,qb))>
///            + <p, B(qb, (2 i w I - J)^-1 B(q,q))> ] / (2 w)
/// with conj(q)^T q = 1 and conj(p)^T q = 1. Fails loudly when an
/// eigenvalue sits within 1e-6 of 2*i*omega0.
double l1_kuznetsov(const Mat& J, double omega0, const CVec& q, const CVec& p,
                    const multilinear::ExpansionPoint& at, const multilinear::Steps& steps = {});

/// MatCont convention: omega0 * l1_kuznetsov, computed as that product.
double l1_matcont(const Mat& J, double omega0, const CVec& q, const CVec& p,
                  const multilinear::ExpansionPoint& at, const multilinear::Steps& steps = {});

struct GCoefficients {
    Complex g20, g11, g21;
};

/// Planar quadratic/cubic normal-form coefficients
///   g20 = <p, B(q,q)>, g11 = <p, B(q,qb)>, g21 = <p, C(q,q,qb)>.
GCoefficients g_coefficients(const CVec& q, const CVec& p, const multilinear::ExpansionPoint& at,
                             const multilinear::Steps& steps = {});

/// Planar reduction of the Kuznetsov formula:
///   l1 = Re(i g20 g11 + omega0 g21) / (2 omega0^2).
double l1_planar_g(const GCoefficients& g, double omega0);

/// Planar system split into linear part and nonlinear remainder at the
/// equilibrium (shifted to the origin).
struct PlanarSystemAtHopf {
    Eigen::Matrix2d M;
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> remainder;
    double omega0 = 0.0;

    PlanarSystemAtHopf(const Eigen::Matrix2d& M_,
                       std::function<Eigen::Vector2d(const Eigen::Vector2d&)> remainder_,
                       double omega0_);
};

/// Linear change of coordinates z = N u putting M into rotation form
/// [[0,-w],[w,0]], built from the Hopf eigenvector. The scale is fixed so
/// that the first row of N is (1, 0): amplitudes are measured in the first
/// state coordinate, which makes the rotation-form coefficient formulas
/// reproduce their textbook values on systems already in rotation form.
struct JordanizedPlanar {
    Eigen::Matrix2d N, N_inv;
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> remainder;  // transformed
    double omega0 = 0.0;
};

JordanizedPlanar jordan_transform_planar(const PlanarSystemAtHopf& sys, const CVec& q);

/// Guckenheimer-Holmes rotation-form coefficient on the transformed
/// remainder (partials via the multilinear forms at the origin):
///   (1/16)[fxxx+fxyy+gxxy+gyyy]
/// + (1/16w)[fxy(fxx+fyy) - gxy(gxx+gyy) - fxx gxx + fyy gyy].
double l1_gh(const JordanizedPlanar& j, const multilinear::Steps& steps = {});

/// Closed-form planar coefficient for a general (trace-free) linear part,
/// evaluated on the untransformed remainder partials. Algebraically equal
/// to l1_gh composed with jordan_transform_planar.
double l1_clw(const PlanarSystemAtHopf& sys, const multilinear::Steps& steps = {});

/// Perko rotation-form coefficient:
///   (3 pi / 4 w^2) ( [quadratic bracket of l1_gh] + w [cubic bracket] ).
/// Identically (12 pi / w) * l1_gh; kept as an informational route.
double l1_pe(const JordanizedPlanar& j, const multilinear::Steps& steps = {});

enum class Criticality { supercritical, subcritical };

/// Sign classification; |l1| below the threshold is a degenerate Hopf.
Criticality classify_criticality(double l1, double threshold = 1e-8);

/// Everything applicable for the system dimension in one pass.
struct Report {
    double l1_ku = 0.0, l1_mc = 0.0;
    std::optional<GCoefficients> g;                      // 2-D only
    std::optional<double> l1_planar, l1_gh, l1_clw, l1_pe;  // 2-D only
    Criticality criticality = Criticality::subcritical;
};

Report full_report(const model::BoundSystem& sys, const hopf::HopfPoint& hp,
                   const multilinear::Steps& steps = {});

}  // namespace canard::lyapunov
