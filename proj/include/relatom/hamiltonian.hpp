#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relatom/grassmann.hpp"
#include "relatom/operators.hpp"
#include "relatom/poincare.hpp"

// Model Hamiltonians for the two-level atom coupled to a single field mode:
// the relativistic Rabi form with its branch-wise level square root, the
// non-relativistic Rabi form, their rotating-wave (Jaynes-Cummings)
// truncations, and the classical Grassmann-valued invariant mass they
// quantize.
//
// Tensor-leg order: [level (2), dipole (2), Fock (N+1)] in full-dipole mode;
// the dipole leg is dropped in scalar-aligned mode, where d.E is replaced by
// the eigenvalue (sign * hbar d |E|).

namespace relatom::ham {

enum class CouplingForm { FullDipoleTensor, ScalarAligned };
enum class ModelKind { RelativisticRabi, NonRelRabi, JaynesCummingsRelativistic, JaynesCummingsNonRel };

inline const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::RelativisticRabi: return "relativistic-rabi";
        case ModelKind::NonRelRabi: return "nonrelativistic-rabi";
        case ModelKind::JaynesCummingsRelativistic: return "jaynes-cummings-relativistic";
        case ModelKind::JaynesCummingsNonRel: return "jaynes-cummings";
    }
    throw std::invalid_argument("unknown model kind");
}

struct ModelParams {
    double m = 1.0;     // atom mass
    double c = 1.0;     // speed of light
    double hbar = 1.0;  // action scale
    double Omega = 0.0;        // level splitting inside the square root (momentum units)
    double Omega_tilde = 0.0;  // frequency-like splitting of the non-relativistic model
    double omega = 1.0;        // mode angular frequency
    double d = 0.0;            // dipole coupling constant
    Eigen::Vector3d kappa = Eigen::Vector3d::Zero();  // c-number atom momentum sector
    Eigen::Vector3d field = Eigen::Vector3d::Zero();  // mode amplitude vector E
    int n_max = 10;                                   // Fock cutoff
    CouplingForm coupling = CouplingForm::FullDipoleTensor;
    int aligned_sign = +1;  // dipole eigenvalue branch in scalar-aligned mode

    double kappa_sq() const { return kappa.squaredNorm(); }

    // argument of the level square root on the sigma3 = s branch
    double branch_argument(int s) const { return m * m * c * c + 2.0 * m * c * Omega * s + kappa_sq(); }

    // coupling energy of the textbook Rabi form
    double g() const { return c * hbar * d * field.norm(); }

    std::vector<int> layout() const {
        if (coupling == CouplingForm::FullDipoleTensor) return {2, 2, n_max + 1};
        return {2, n_max + 1};
    }

    // level-branch positivity only matters where the square root is taken,
    // so non-relativistic builders skip that part
    void validate(bool check_level_branches = true) const {
        if (!(m > 0.0) || !(c > 0.0) || !(hbar > 0.0) || !(omega > 0.0))
            throw std::invalid_argument("m, c, hbar, omega must all be positive");
        if (n_max < 1) throw std::invalid_argument("Fock cutoff must be >= 1");
        if (aligned_sign != 1 && aligned_sign != -1)
            throw std::invalid_argument("aligned_sign must be +1 or -1");
        if (!check_level_branches) return;
        for (int s : {+1, -1})
            if (!(branch_argument(s) > 0.0))
                throw std::invalid_argument(std::string("level square-root argument is non-positive on the sigma3 = ") +
                                            (s > 0 ? "+1" : "-1") + " branch");
    }
};

struct HamiltonianBundle {
    ops::Op H;
    std::string kind;
    ModelParams params;

    double relative_hermiticity_defect() const {
        const double scale = H.mat().cwiseAbs().maxCoeff();
        if (scale == 0.0) return 0.0;
        return H.hermiticity_defect() / scale;
    }
};

namespace detail {

inline int fock_leg(const std::vector<int>& layout) { return static_cast<int>(layout.size()) - 1; }

inline ops::Op field_free_term(const ModelParams& p, const std::vector<int>& layout) {
    const auto f = ops::fock_operators(p.n_max);
    return p.hbar * p.omega *
           (ops::tensor_lift(f.n, layout, fock_leg(layout)) + 0.5 * ops::Op::identity(layout));
}

inline ops::Op quadrature(const ModelParams& p, const std::vector<int>& layout) {
    const auto f = ops::fock_operators(p.n_max);
    return ops::tensor_lift(f.a + f.a_dag, layout, fock_leg(layout));
}

inline ops::Op rwa_pair(const ModelParams& p, const std::vector<int>& layout) {
    const auto f = ops::fock_operators(p.n_max);
    const ops::Op up = ops::tensor_lift(ops::sigma_plus(), layout, 0);
    const ops::Op down = ops::tensor_lift(ops::sigma_minus(), layout, 0);
    const ops::Op low = ops::tensor_lift(f.a, layout, fock_leg(layout));
    return up * low + down * low.adjoint();
}

// couples the dipole degree of freedom to the mode amplitude vector; in
// scalar-aligned mode the dipole leg is gone and the eigenvalue stands in
inline ops::Op dipole_projection(const ModelParams& p, const std::vector<int>& layout) {
    if (p.coupling == CouplingForm::FullDipoleTensor) {
        ops::Op dot(Eigen::MatrixXcd::Zero(2, 2), {2});
        for (int r = 1; r <= 3; ++r) dot += p.field(r - 1) * ops::dipole_operator(r, p.d, p.hbar);
        return ops::tensor_lift(dot, layout, 1);
    }
    return (p.aligned_sign * p.hbar * p.d * p.field.norm()) * ops::Op::identity(layout);
}

inline ops::Op level_sqrt_term(const ModelParams& p, const std::vector<int>& layout) {
    Eigen::MatrixXcd lvl = Eigen::MatrixXcd::Zero(2, 2);
    lvl(0, 0) = std::sqrt(p.branch_argument(+1));
    lvl(1, 1) = std::sqrt(p.branch_argument(-1));
    return ops::tensor_lift(ops::Op(lvl, {2}), layout, 0);
}

}  // namespace detail

inline HamiltonianBundle build_relativistic_rabi(const ModelParams& p) {
    p.validate();
    const auto layout = p.layout();
    const double pref = p.m * p.c / std::sqrt(p.m * p.m * p.c * p.c + p.kappa_sq());
    ops::Op h = detail::level_sqrt_term(p, layout) + detail::field_free_term(p, layout) +
                pref * (detail::dipole_projection(p, layout) *
                        ops::tensor_lift(ops::pauli(1), layout, 0) * detail::quadrature(p, layout));
    return {std::move(h), model_kind_name(ModelKind::RelativisticRabi), p};
}

inline HamiltonianBundle build_nonrel_rabi(const ModelParams& p) {
    p.validate(false);
    const auto layout = p.layout();
    ops::Op h = (p.kappa_sq() / (2.0 * p.m)) * ops::Op::identity(layout) +
                (0.5 * p.hbar * p.Omega_tilde) * ops::tensor_lift(ops::pauli(3), layout, 0) +
                detail::field_free_term(p, layout) +
                p.c * (detail::dipole_projection(p, layout) *
                       ops::tensor_lift(ops::pauli(1), layout, 0) * detail::quadrature(p, layout));
    return {std::move(h), model_kind_name(ModelKind::NonRelRabi), p};
}

inline HamiltonianBundle build_jaynes_cummings(const ModelParams& p, bool relativistic) {
    p.validate(relativistic);
    const auto layout = p.layout();
    const double pref =
        relativistic ? p.m * p.c / std::sqrt(p.m * p.m * p.c * p.c + p.kappa_sq()) : p.c;
    ops::Op free = relativistic
                       ? detail::level_sqrt_term(p, layout)
                       : (p.kappa_sq() / (2.0 * p.m)) * ops::Op::identity(layout) +
                             (0.5 * p.hbar * p.Omega_tilde) * ops::tensor_lift(ops::pauli(3), layout, 0);
    ops::Op h = free + detail::field_free_term(p, layout) +
                pref * (detail::dipole_projection(p, layout) * detail::rwa_pair(p, layout));
    return {std::move(h),
            model_kind_name(relativistic ? ModelKind::JaynesCummingsRelativistic
                                         : ModelKind::JaynesCummingsNonRel),
            p};
}

inline HamiltonianBundle build_hamiltonian(ModelKind kind, const ModelParams& p) {
    switch (kind) {
        case ModelKind::RelativisticRabi: return build_relativistic_rabi(p);
        case ModelKind::NonRelRabi: return build_nonrel_rabi(p);
        case ModelKind::JaynesCummingsRelativistic: return build_jaynes_cummings(p, true);
        case ModelKind::JaynesCummingsNonRel: return build_jaynes_cummings(p, false);
    }
    throw std::invalid_argument("unknown model kind");
}

inline Eigen::VectorXd spectrum(const HamiltonianBundle& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.H.mat());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");
    return es.eigenvalues();
}

// Closed-form spectrum for d = 0, sorted, with multiplicities.
inline Eigen::VectorXd decoupled_spectrum(ModelKind kind, const ModelParams& p) {
    p.validate();
    const bool rel =
        kind == ModelKind::RelativisticRabi || kind == ModelKind::JaynesCummingsRelativistic;
    const int dipole_mult = (p.coupling == CouplingForm::FullDipoleTensor) ? 2 : 1;
    std::vector<double> vals;
    for (int s : {+1, -1})
        for (int n = 0; n <= p.n_max; ++n) {
            const double lvl = rel ? std::sqrt(p.branch_argument(s))
                                   : p.kappa_sq() / (2.0 * p.m) + 0.5 * p.hbar * p.Omega_tilde * s;
            const double e = lvl + p.hbar * p.omega * (n + 0.5);
            for (int k = 0; k < dipole_mult; ++k) vals.push_back(e);
        }
    std::sort(vals.begin(), vals.end());
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// Shift of the lowest eigenvalues when the Fock cutoff grows by `extra`:
// the truncation-convergence witness.
inline double cutoff_sensitivity(ModelKind kind, ModelParams p, int extra = 5, int lowest = 5) {
    const Eigen::VectorXd base = spectrum(build_hamiltonian(kind, p));
    p.n_max += extra;
    const Eigen::VectorXd wide = spectrum(build_hamiltonian(kind, p));
    double worst = 0.0;
    for (int i = 0; i < lowest; ++i) worst = std::max(worst, std::abs(base(i) - wide(i)));
    return worst;
}

// --- non-relativistic comparison ------------------------------------------------

// How the square-root splitting parameter is tied to the non-relativistic
// splitting frequency when the two models are compared across c:
//  - ConsistentSplitting: Omega = hbar*Omega_tilde/(2c), which makes the
//    expanded level gap match (hbar/2)*Omega_tilde*sigma3 exactly;
//  - LiteralMassScaled: Omega = m*Omega_tilde as printed alongside the
//    models.  The expanded gap is then c*m*Omega_tilde*sigma3, which grows
//    linearly in c; kept selectable so the mismatch can be demonstrated.
enum class OmegaLink { ConsistentSplitting, LiteralMassScaled };

// Parameter set used at speed `c` when scanning the non-relativistic limit:
// the splitting link above, plus d rescaled so the coupling energy
// g = c*hbar*d*|E| stays at the base value across the scan.
inline ModelParams linked_params(ModelParams base, double c, OmegaLink link) {
    const double g = base.g();
    base.c = c;
    base.Omega = (link == OmegaLink::ConsistentSplitting) ? base.hbar * base.Omega_tilde / (2.0 * c)
                                                          : base.m * base.Omega_tilde;
    const double field_norm = base.field.norm();
    if (field_norm > 0.0) base.d = g / (c * base.hbar * field_norm);
    return base;
}

// Relativistic Hamiltonian prepared for direct comparison with the
// non-relativistic one: the atomic part (level square root plus dipole
// interaction) is rescaled by c to energy units and the rest energy mc^2 is
// subtracted; the field term is already an energy and stays as built.
inline HamiltonianBundle build_rescaled_relativistic(const ModelParams& p, bool rwa) {
    HamiltonianBundle b = rwa ? build_jaynes_cummings(p, true) : build_relativistic_rabi(p);
    const auto layout = p.layout();
    const ops::Op field_part = detail::field_free_term(p, layout);
    b.H = p.c * (b.H - field_part) - (p.m * p.c * p.c) * ops::Op::identity(layout) + field_part;
    b.kind += "-rescaled";
    return b;
}

// Largest eigenvalue mismatch between the rescaled relativistic spectrum and
// the non-relativistic one, normalized by the non-relativistic spectral span.
inline double spectral_deviation(const ModelParams& p, bool rwa) {
    const Eigen::VectorXd rel = spectrum(build_rescaled_relativistic(p, rwa));
    const Eigen::VectorXd nr = spectrum(rwa ? build_jaynes_cummings(p, false) : build_nonrel_rabi(p));
    const double span = nr(nr.size() - 1) - nr(0);
    return (rel - nr).cwiseAbs().maxCoeff() / (span > 0.0 ? span : 1.0);
}

// --- classical invariant mass -------------------------------------------------

// Single-mode stand-in for the transverse field sector: the electric field
// at the atom and the mode's energy contribution.
struct SingleModeField {
    Eigen::Vector3d electric = Eigen::Vector3d::Zero();
    double energy = 0.0;
};

// d^r = -i d eps^{ruv} xi_perp^u xi_perp^v
inline std::array<grassmann::Element, 3> dipole_bilinear(const grassmann::GeneratorTable& t,
                                                         const std::array<grassmann::Element, 3>& xi_perp,
                                                         double d) {
    std::array<grassmann::Element, 3> out{grassmann::Element::zero(t), grassmann::Element::zero(t),
                                          grassmann::Element::zero(t)};
    for (int r = 0; r < 3; ++r)
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) {
                const int eps = levi_civita(r, u, v);
                if (eps != 0)
                    out[r] += grassmann::Coeff{0.0, -d * eps} * (xi_perp[u] * xi_perp[v]);
            }
    return out;
}

// Invariant mass of the atom-plus-mode system as a Grassmann-even element:
// a nilpotent square root carrying the level splitting, the dipole coupling
// bilinear with its kinematic prefactor, and the field energy.
inline grassmann::Element classical_invariant_mass(const grassmann::GeneratorTable& t,
                                                   const ModelParams& p, const SingleModeField& field,
                                                   const Eigen::Vector3d& h = Eigen::Vector3d::Zero()) {
    using grassmann::Coeff;
    using grassmann::Element;
    p.validate();

    const double a = p.m * p.m * p.c * p.c + p.kappa_sq();

    const Element beta = Element::generator(t, "beta");
    const Element beta_star = Element::generator(t, "beta_star");
    const Element alpha = Element::generator(t, "alpha");
    const Element alpha_star = Element::generator(t, "alpha_star");

    Element under = Element::scalar(t, a) + Coeff{2.0 * p.m * p.c * p.Omega, 0.0} * (beta_star * beta);
    Element mc = grassmann::nilpotent_sqrt(under);

    const auto xi_perp = poincare::transverse_dipole(t, h);
    const auto dvec = dipole_bilinear(t, xi_perp, p.d);
    Element d_dot_pi = Element::zero(t);
    for (int r = 0; r < 3; ++r) d_dot_pi += Coeff{field.electric(r), 0.0} * dvec[r];

    const Element level_flip = beta_star * alpha + alpha_star * beta;
    mc += Coeff{p.m * p.c / std::sqrt(a), 0.0} * (level_flip * d_dot_pi);
    mc += Element::scalar(t, field.energy);
    return mc;
}

// Characteristic scales of the (m, c, hbar) unit system, for converting
// external inputs into the internal nondimensional parameters.
struct UnitScales {
    double momentum, energy, time, length;
};

inline UnitScales unit_scales(const ModelParams& p) {
    return {p.m * p.c, p.m * p.c * p.c, p.hbar / (p.m * p.c * p.c), p.hbar / (p.m * p.c)};
}

}  // namespace relatom::ham
