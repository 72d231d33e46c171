#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "relatom/dual.hpp"
#include "relatom/metric.hpp"

// Momentum-dependent orthonormal tetrads for a massive particle, their
// derivatives along the mass shell, and the worldline embedding of the
// center-of-mass coordinates.
//
// The dimensionless boost vector is h^i = P^i / Mc with gamma = sqrt(1 + h^2),
// so the four-velocity is h^mu = (gamma, h).  The tetrad is the pure boost
// taking the rest frame onto h^mu; its inverse is the boost with -h.

namespace relatom::kinematics {

using Eigen::Matrix4d;
using Eigen::Vector3d;

template <typename S>
using Mat4 = std::array<std::array<S, 4>, 4>;

template <typename S>
S gamma_of(const std::array<S, 3>& h) {
    using std::sqrt;
    return sqrt(S(1.0) + h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
}

inline double gamma_of(const Vector3d& h) { return std::sqrt(1.0 + h.squaredNorm()); }

// Tetrad components e[mu][A]: column A = 0 is the four-velocity (gamma, h),
// column A = r has time component h^r and spatial block
// delta^i_r + h^i h^r / (1 + gamma).  Generic over the scalar so dual numbers
// can flow through for derivatives.
template <typename S>
Mat4<S> tetrad_components(const std::array<S, 3>& h) {
    const S gamma = gamma_of(h);
    Mat4<S> e{};
    e[0][0] = gamma;
    for (int r = 0; r < 3; ++r) {
        e[static_cast<std::size_t>(r) + 1][0] = h[static_cast<std::size_t>(r)];
        e[0][static_cast<std::size_t>(r) + 1] = h[static_cast<std::size_t>(r)];
        for (int i = 0; i < 3; ++i) {
            S v = h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(r)] / (S(1.0) + gamma);
            if (i == r) v += S(1.0);
            e[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(r) + 1] = v;
        }
    }
    return e;
}

template <typename S>
Mat4<S> inverse_tetrad_components(const std::array<S, 3>& h) {
    return tetrad_components<S>({-h[0], -h[1], -h[2]});
}

inline Matrix4d to_matrix(const Mat4<double>& a) {
    Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

// E(mu, A): columns are the tetrad legs.
inline Matrix4d tetrad(const Vector3d& h) {
    return to_matrix(tetrad_components<double>({h[0], h[1], h[2]}));
}

// W(A, rho) with W * E = identity; equals the tetrad of -h.
inline Matrix4d inverse_tetrad(const Vector3d& h) {
    return to_matrix(inverse_tetrad_components<double>({h[0], h[1], h[2]}));
}

inline Matrix4d eta_matrix() {
    Matrix4d m = Matrix4d::Zero();
    for (int mu = 0; mu < 4; ++mu) m(mu, mu) = eta(mu, mu);
    return m;
}

// max |E^T eta E - eta|: zero for an orthonormal tetrad.
inline double orthonormality_defect(const Matrix4d& e) {
    return (e.transpose() * eta_matrix() * e - eta_matrix()).cwiseAbs().maxCoeff();
}

// d(inverse tetrad)^A_rho / dP^mu on the mass shell, where h = P/Mc and the
// invariant mass is treated as a function of all four momentum components, so
// the result is homogeneous of degree -1 in P:
//   dh^i/dP^mu = (delta^i_mu - h^i hhat_mu) / Mc,  hhat_mu = eta_{mu nu} h^nu.
struct TetradDerivative {
    std::array<Matrix4d, 4> d;  // d[mu](A, rho)
};

inline TetradDerivative inverse_tetrad_derivative(const Vector3d& h, double mc) {
    if (!(mc > 0.0)) throw std::invalid_argument("invariant mass must be positive");
    using D = Dual<3>;
    const std::array<D, 3> hd{D::seeded(h[0], 0), D::seeded(h[1], 1), D::seeded(h[2], 2)};
    const Mat4<D> w = inverse_tetrad_components<D>(hd);

    const double gamma = gamma_of(h);
    // dh^i/dP^mu, rows mu, cols i
    Eigen::Matrix<double, 4, 3> dh;
    const std::array<double, 4> hhat_lower{gamma, -h[0], -h[1], -h[2]};
    for (int mu = 0; mu < 4; ++mu)
        for (int i = 0; i < 3; ++i) {
            const double kron = (mu == i + 1) ? 1.0 : 0.0;
            dh(mu, i) = (kron - h[i] * hhat_lower[static_cast<std::size_t>(mu)]) / mc;
        }

    TetradDerivative out;
    for (int mu = 0; mu < 4; ++mu) {
        out.d[static_cast<std::size_t>(mu)].setZero();
        for (int a = 0; a < 4; ++a)
            for (int rho = 0; rho < 4; ++rho) {
                double v = 0.0;
                for (int i = 0; i < 3; ++i)
                    v += dh(mu, i) * w[static_cast<std::size_t>(a)][static_cast<std::size_t>(rho)].d[static_cast<std::size_t>(i)];
                out.d[static_cast<std::size_t>(mu)](a, rho) = v;
            }
    }
    return out;
}

// Coefficients K^mu_{rs} of the momentum-dependent center-of-mass shift,
//   Delta^mu = (i/2) K^mu_{rs} xi_perp^r xi_perp^s,
//   K^mu_{rs} = e^A_nu eta_{AB} (d e^B_rho / dP^mu) e^rho_r e^nu_s.
// The nu contraction collapses e^A_nu e^nu_s to delta^A_s, so
//   K^mu_{rs} = -sum_rho (d e^s_rho / dP^mu) e^rho_r,
// the spatial block of the boost connection; it is antisymmetric in (r, s)
// (Wigner-rotation generator) and vanishes at h = 0.
inline std::array<Eigen::Matrix3d, 4> center_of_mass_coefficients(const Vector3d& h, double mc) {
    const Matrix4d e = tetrad(h);
    const TetradDerivative dw = inverse_tetrad_derivative(h, mc);
    std::array<Eigen::Matrix3d, 4> k;
    for (int mu = 0; mu < 4; ++mu) {
        k[static_cast<std::size_t>(mu)].setZero();
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
                double v = 0.0;
                for (int rho = 0; rho < 4; ++rho)
                    v += eta_pm(s + 1, s + 1) * dw.d[static_cast<std::size_t>(mu)](s + 1, rho) * e(rho, r + 1);
                k[static_cast<std::size_t>(mu)](r, s) = v;
            }
    }
    return k;
}

// Worldline embedding of the canonical center-of-mass pair (z, h) at proper
// time tau:  x^0 = gamma (tau + h.z / Mc),  x^i = z^i / Mc + (tau + h.z / Mc) h^i.
inline std::array<double, 4> embedding(double tau, const Vector3d& z, const Vector3d& h, double mc) {
    if (!(mc > 0.0)) throw std::invalid_argument("invariant mass must be positive");
    const double gamma = gamma_of(h);
    const double shifted = tau + h.dot(z) / mc;
    return {gamma * shifted, z[0] / mc + shifted * h[0], z[1] / mc + shifted * h[1], z[2] / mc + shifted * h[2]};
}

}  // namespace relatom::kinematics
