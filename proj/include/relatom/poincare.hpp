#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relatom/dual.hpp"
#include "relatom/grassmann.hpp"
#include "relatom/kinematics.hpp"
#include "relatom/metric.hpp"

// External realization of the Poincare generators on the frozen Jacobi data
// (z, h) and the rest spin S, with a numerical closure checker, plus the
// Grassmann spin bilinears living on the transverse dipole variables.
//
// Carrier brackets: {z^i, h^j} = delta^{ij} and {S^r, S^s} = eps^{rsu} S^u.
// The realization and its structure-constant table are written in the
// mostly-minus metric shape; the table itself was generated by an independent
// symbolic-differentiation oracle and is frozen below.

namespace relatom::poincare {

struct PhaseSpacePoint {
    Eigen::Vector3d z;
    Eigen::Vector3d h;
    Eigen::Vector3d S;
    double Mc = 1.0;
};

inline void validate(const PhaseSpacePoint& p) {
    if (!(p.Mc > 0.0)) throw std::invalid_argument("Mc must be positive");
    if (!p.z.allFinite() || !p.h.allFinite() || !p.S.allFinite() || !std::isfinite(p.Mc))
        throw std::invalid_argument("phase-space point must be finite");
}

// Ten generators: P^0..P^3 then J^{01}, J^{02}, J^{03}, J^{12}, J^{13}, J^{23}.
inline constexpr int kGenerators = 10;

inline int j_index(int mu, int nu) {
    // antisymmetric pair (mu < nu) -> 4..9
    static constexpr int lut[4][4] = {{-1, 4, 5, 6}, {-1, -1, 7, 8}, {-1, -1, -1, 9}, {-1, -1, -1, -1}};
    return lut[mu][nu];
}

inline std::string generator_name(int k) {
    static const char* names[kGenerators] = {"P0", "P1", "P2", "P3", "J01", "J02", "J03", "J12", "J13", "J23"};
    return names[k];
}

// Evaluate all ten generators at (z, h, S); generic over the scalar so dual
// numbers propagate exact gradients.
//   P^mu = Mc h^mu,   J^{0i} = -gamma z^i - eps^{ijr} h^j S^r / (1 + gamma),
//   J^{ij} = z^i h^j - z^j h^i + eps^{ijr} S^r.
template <typename Sc>
std::array<Sc, kGenerators> generator_values(const std::array<Sc, 3>& z, const std::array<Sc, 3>& h,
                                             const std::array<Sc, 3>& s, double mc) {
    using std::sqrt;
    const Sc gamma = sqrt(Sc(1.0) + h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
    std::array<Sc, kGenerators> g{};
    g[0] = Sc(mc) * gamma;
    for (int i = 0; i < 3; ++i) g[static_cast<std::size_t>(i) + 1] = Sc(mc) * h[static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i) {
        Sc v = -(gamma * z[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < 3; ++r) {
                const int c = levi_civita(i, j, r);
                if (c != 0)
                    v -= Sc(static_cast<double>(c)) * h[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(r)] /
                         (Sc(1.0) + gamma);
            }
        g[static_cast<std::size_t>(j_index(0, i + 1))] = v;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Sc v = z[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)] -
                   z[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(i)];
            for (int r = 0; r < 3; ++r) {
                const int c = levi_civita(i, j, r);
                if (c != 0) v += Sc(static_cast<double>(c)) * s[static_cast<std::size_t>(r)];
            }
            g[static_cast<std::size_t>(j_index(i + 1, j + 1))] = v;
        }
    return g;
}

struct GeneratorSet {
    std::array<double, 4> P{};
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
};

inline GeneratorSet external_generators(const PhaseSpacePoint& p) {
    validate(p);
    const std::array<double, 3> z{p.z[0], p.z[1], p.z[2]};
    const std::array<double, 3> h{p.h[0], p.h[1], p.h[2]};
    const std::array<double, 3> s{p.S[0], p.S[1], p.S[2]};
    const auto g = generator_values<double>(z, h, s, p.Mc);
    GeneratorSet out;
    for (int mu = 0; mu < 4; ++mu) out.P[static_cast<std::size_t>(mu)] = g[static_cast<std::size_t>(mu)];
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            const double v = g[static_cast<std::size_t>(j_index(mu, nu))];
            out.J(mu, nu) = v;
            out.J(nu, mu) = -v;
        }
    return out;
}

// Carrier-space Poisson bracket of two dual-number values carrying gradients
// in the slot order (z0..z2, h0..h2, S0..S2):
//   {f,g} = df/dz.dg/dh - df/dh.dg/dz + eps^{rsu} S^u df/dS_r dg/dS_s.
inline double carrier_bracket(const Dual<9>& f, const Dual<9>& g, const Eigen::Vector3d& s) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i)
        v += f.d[static_cast<std::size_t>(i)] * g.d[static_cast<std::size_t>(i) + 3] -
             f.d[static_cast<std::size_t>(i) + 3] * g.d[static_cast<std::size_t>(i)];
    for (int r = 0; r < 3; ++r)
        for (int u = 0; u < 3; ++u)
            for (int w = 0; w < 3; ++w) {
                const int c = levi_civita(r, u, w);
                if (c != 0)
                    v += static_cast<double>(c) * s[w] * f.d[static_cast<std::size_t>(r) + 6] *
                         g.d[static_cast<std::size_t>(u) + 6];
            }
    return v;
}

inline std::array<Dual<9>, kGenerators> generator_duals(const PhaseSpacePoint& p) {
    validate(p);
    using D = Dual<9>;
    const std::array<D, 3> z{D::seeded(p.z[0], 0), D::seeded(p.z[1], 1), D::seeded(p.z[2], 2)};
    const std::array<D, 3> h{D::seeded(p.h[0], 3), D::seeded(p.h[1], 4), D::seeded(p.h[2], 5)};
    const std::array<D, 3> s{D::seeded(p.S[0], 6), D::seeded(p.S[1], 7), D::seeded(p.S[2], 8)};
    return generator_values<D>(z, h, s, p.Mc);
}

// Bracket of two generators by label at a point.
inline double poisson_bracket(int a, int b, const PhaseSpacePoint& p) {
    const auto g = generator_duals(p);
    return carrier_bracket(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)], p.S);
}

// Structure-constant table, frozen from the symbolic oracle:
//   {P^mu, P^nu}       = 0
//   {J^{mu nu}, P^rho} = eta^{nu rho} P^mu - eta^{mu rho} P^nu
//   {J^{mu nu}, J^{rho si}} = eta^{nu rho} J^{mu si} - eta^{mu rho} J^{nu si}
//                           - eta^{nu si} J^{mu rho} + eta^{mu si} J^{nu rho}
// with eta the fixed mostly-minus shape.
inline std::array<double, kGenerators> expected_bracket(int a, int b) {
    std::array<double, kGenerators> c{};
    const auto add_p = [&c](int mu, double w) { c[static_cast<std::size_t>(mu)] += w; };
    const auto add_j = [&c](int mu, int nu, double w) {
        if (mu == nu) return;
        if (mu < nu)
            c[static_cast<std::size_t>(j_index(mu, nu))] += w;
        else
            c[static_cast<std::size_t>(j_index(nu, mu))] -= w;
    };
    const auto decode_j = [](int k, int& mu, int& nu) {
        static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        mu = pairs[k - 4][0];
        nu = pairs[k - 4][1];
    };

    const bool a_is_p = a < 4, b_is_p = b < 4;
    if (a_is_p && b_is_p) return c;
    if (!a_is_p && b_is_p) {
        int mu, nu;
        decode_j(a, mu, nu);
        const int rho = b;
        if (nu == rho) add_p(mu, eta_pm(nu, nu));
        if (mu == rho) add_p(nu, -eta_pm(mu, mu));
        return c;
    }
    if (a_is_p && !b_is_p) {
        auto t = expected_bracket(b, a);
        for (auto& x : t) x = -x;
        return t;
    }
    int mu, nu, rho, si;
    decode_j(a, mu, nu);
    decode_j(b, rho, si);
    if (nu == rho) add_j(mu, si, eta_pm(nu, nu));
    if (mu == rho) add_j(nu, si, -eta_pm(mu, mu));
    if (nu == si) add_j(mu, rho, -eta_pm(nu, nu));
    if (mu == si) add_j(nu, rho, eta_pm(mu, mu));
    return c;
}

struct ClosureRelation {
    int a = 0;
    int b = 0;
    double residual = 0.0;
};

struct ClosureReport {
    double max_residual = 0.0;
    std::vector<ClosureRelation> failing;  // residual > tol
    bool pass = true;
};

// Evaluate every bracket relation of the ten-generator algebra at p.
inline ClosureReport check_poincare_algebra(const PhaseSpacePoint& p, double tol = 1e-10) {
    const auto duals = generator_duals(p);
    std::array<double, kGenerators> values{};
    for (int k = 0; k < kGenerators; ++k) values[static_cast<std::size_t>(k)] = duals[static_cast<std::size_t>(k)].v;

    ClosureReport rep;
    for (int a = 0; a < kGenerators; ++a)
        for (int b = a + 1; b < kGenerators; ++b) {
            const double got = carrier_bracket(duals[static_cast<std::size_t>(a)], duals[static_cast<std::size_t>(b)], p.S);
            const auto coeff = expected_bracket(a, b);
            double want = 0.0;
            for (int k = 0; k < kGenerators; ++k)
                want += coeff[static_cast<std::size_t>(k)] * values[static_cast<std::size_t>(k)];
            const double res = std::abs(got - want);
            rep.max_residual = std::max(rep.max_residual, res);
            if (res > tol) {
                rep.failing.push_back({a, b, res});
                rep.pass = false;
            }
        }
    return rep;
}

struct ClosureScanRecord {
    PhaseSpacePoint point;
    double max_residual = 0.0;
    std::string worst_relation;
};

struct ClosureScan {
    std::vector<ClosureScanRecord> records;
    double max_residual = 0.0;
    bool pass = true;
};

// Closure sweep over random phase-space points; deterministic for fixed seed.
inline ClosureScan scan_poincare_closure(int n_points, std::uint64_t seed, double tol = 1e-10) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> um(0.5, 5.0);
    ClosureScan scan;
    for (int t = 0; t < n_points; ++t) {
        PhaseSpacePoint p;
        p.z = Eigen::Vector3d{u(rng), u(rng), u(rng)};
        p.h = Eigen::Vector3d{u(rng), u(rng), u(rng)};
        p.S = Eigen::Vector3d{u(rng), u(rng), u(rng)};
        p.Mc = um(rng);
        const ClosureReport rep = check_poincare_algebra(p, tol);
        ClosureScanRecord rec;
        rec.point = p;
        rec.max_residual = rep.max_residual;
        if (!rep.failing.empty()) {
            const auto worst = std::max_element(rep.failing.begin(), rep.failing.end(),
                                                [](const auto& x, const auto& y) { return x.residual < y.residual; });
            rec.worst_relation = "{" + generator_name(worst->a) + "," + generator_name(worst->b) + "}";
            scan.pass = false;
        }
        scan.max_residual = std::max(scan.max_residual, rep.max_residual);
        scan.records.push_back(std::move(rec));
    }
    return scan;
}

// --- Grassmann spin sector ---------------------------------------------------

using grassmann::Coeff;
using grassmann::Element;
using grassmann::GeneratorTable;

// Transverse dipole variables xi_perp^r = eps^r_mu(h) xi^mu (inverse tetrad
// rows applied to the spacetime Grassmann vector).
inline std::array<Element, 3> transverse_dipole(const GeneratorTable& t, const Eigen::Vector3d& h) {
    const Eigen::Matrix4d w = kinematics::inverse_tetrad(h);
    std::array<Element, 3> out{Element::zero(t), Element::zero(t), Element::zero(t)};
    for (int r = 0; r < 3; ++r)
        for (int mu = 0; mu < 4; ++mu)
            out[static_cast<std::size_t>(r)] +=
                Element::generator(t, "xi" + std::to_string(mu)) * Coeff{w(r + 1, mu), 0.0};
    return out;
}

// Spin bilinears S^r = -(i/2) eps^{ruv} xi_perp^u xi_perp^v.
inline std::array<Element, 3> spin_from_grassmann(const std::array<Element, 3>& xi_perp) {
    const GeneratorTable& t = xi_perp[0].table();
    std::array<Element, 3> out{Element::zero(t), Element::zero(t), Element::zero(t)};
    for (int r = 0; r < 3; ++r)
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) {
                const int c = levi_civita(r, u, v);
                if (c != 0)
                    out[static_cast<std::size_t>(r)] +=
                        (xi_perp[static_cast<std::size_t>(u)] * xi_perp[static_cast<std::size_t>(v)]) *
                        (Coeff{0.0, -0.5} * static_cast<double>(c));
            }
    return out;
}

// Boost part of the spin tensor at a numeric four-momentum:
//   S~^{0i} = -eps^{ijr} P^j S^r / (P^0 + Mc).
inline std::array<Element, 3> boost_spin_tensor(const std::array<Element, 3>& spin, const std::array<double, 4>& p,
                                                double mc) {
    if (!(mc > 0.0)) throw std::invalid_argument("invariant mass must be positive");
    const GeneratorTable& t = spin[0].table();
    std::array<Element, 3> out{Element::zero(t), Element::zero(t), Element::zero(t)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < 3; ++r) {
                const int c = levi_civita(i, j, r);
                if (c != 0)
                    out[static_cast<std::size_t>(i)] +=
                        spin[static_cast<std::size_t>(r)] *
                        Coeff{-static_cast<double>(c) * p[static_cast<std::size_t>(j) + 1] / (p[0] + mc), 0.0};
            }
    return out;
}

// Momentum-dependent center-of-mass shift carried by the dipole bilinears,
//   Delta^mu = (i/2) eta^{mu mu} K^mu_{rs} xi_perp^r xi_perp^s,
// where K comes from the tetrad derivative and the index is raised because
// the underlying derivative is taken with respect to the covariant momentum.
inline std::array<Element, 4> center_of_mass_shift(const GeneratorTable& t, const Eigen::Vector3d& h, double mc) {
    const auto k = kinematics::center_of_mass_coefficients(h, mc);
    const auto xp = transverse_dipole(t, h);
    std::array<Element, 4> out{Element::zero(t), Element::zero(t), Element::zero(t), Element::zero(t)};
    for (int mu = 0; mu < 4; ++mu)
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
                const double w = eta_pm(mu, mu) * k[static_cast<std::size_t>(mu)](r, s);
                if (w != 0.0)
                    out[static_cast<std::size_t>(mu)] +=
                        (xp[static_cast<std::size_t>(r)] * xp[static_cast<std::size_t>(s)]) * Coeff{0.0, 0.5 * w};
            }
    return out;
}

}  // namespace relatom::poincare
