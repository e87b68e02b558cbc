#pragma once

#include "canard/hopf.hpp"
#include "canard/lyapunov.hpp"
#include "canard/types.hpp"

#include <array>
#include <functional>
#include <random>

namespace canard::testing {

/// Random planar system at an exact Hopf point: trace-free linear part
/// with det = omega0^2 plus random quadratic and cubic terms.
struct PlanarHopfSystem {
    Eigen::Matrix2d M;
    double omega0 = 0.0;
    // remainder coefficients: f/g quadratic (xx, xy, yy) and cubic
    // (xxx, xxy, xyy, yyy)
    std::array<double, 3> fq{}, gq{};
    std::array<double, 4> fc{}, gc{};

    Eigen::Vector2d remainder(const Eigen::Vector2d& z) const {
        const double x = z[0], y = z[1];
        const double f = 0.5 * (fq[0] * x * x + 2 * fq[1] * x * y + fq[2] * y * y) +
                         (fc[0] * x * x * x + 3 * fc[1] * x * x * y + 3 * fc[2] * x * y * y +
                          fc[3] * y * y * y) /
                             6.0;
        const double g = 0.5 * (gq[0] * x * x + 2 * gq[1] * x * y + gq[2] * y * y) +
                         (gc[0] * x * x * x + 3 * gc[1] * x * x * y + 3 * gc[2] * x * y * y +
                          gc[3] * y * y * y) /
                             6.0;
        return {f, g};
    }

    std::function<Vec(const Vec&)> rhs() const {
        return [*this](const Vec& z) -> Vec {
            Eigen::Vector2d u(z[0], z[1]);
            Eigen::Vector2d r = M * u + remainder(u);
            Vec out(2);
            out << r[0], r[1];
            return out;
        };
    }
};

inline PlanarHopfSystem random_planar_hopf(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PlanarHopfSystem s;
    const double m11 = u(rng);
    double m12 = 0.0;
    while (std::abs(m12) < 0.2) m12 = 2.0 * u(rng);
    const double w = 0.3 + 1.5 * std::abs(u(rng));
    const double m21 = -(m11 * m11 + w * w) / m12;
    s.M << m11, m12, m21, -m11;
    s.omega0 = w;
    for (auto& c : s.fq) c = u(rng);
    for (auto& c : s.gq) c = u(rng);
    for (auto& c : s.fc) c = u(rng);
    for (auto& c : s.gc) c = u(rng);
    return s;
}

/// Rotation-form cubic normal form:
///   x' = -w y + (a x - b y)(x^2+y^2),  y' = w x + (b x + a y)(x^2+y^2).
inline std::function<Vec(const Vec&)> cubic_normal_form(double a, double b, double w) {
    return [a, b, w](const Vec& z) -> Vec {
        const double x = z[0], y = z[1], r2 = x * x + y * y;
        Vec out(2);
        out << -w * y + (a * x - b * y) * r2, w * x + (b * x + a * y) * r2;
        return out;
    };
}

inline Eigen::Matrix2d rotation_matrix(double w) {
    Eigen::Matrix2d M;
    M << 0.0, -w, w, 0.0;
    return M;
}

}  // namespace canard::testing
