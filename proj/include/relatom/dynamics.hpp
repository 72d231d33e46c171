#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "relatom/hamiltonian.hpp"

// Unitary dynamics and the physics scenarios: Schroedinger evolution through
// a Hermitian eigendecomposition (exact propagator, no integrator error),
// observable trajectories, collapse-revival scans with an envelope-based
// revival estimator, rotating-wave validity sweeps, and the comparison of the
// relativistic model against its non-relativistic limit.

namespace relatom::dyn {

using Complex = std::complex<double>;

// --- states -------------------------------------------------------------------

struct State {
    Eigen::VectorXcd v;
    std::vector<int> legs;

    double norm() const { return v.norm(); }
};

inline long layout_dim(const std::vector<int>& legs) {
    long d = 1;
    for (int l : legs) d *= l;
    return d;
}

// |indices[0]> (x) |indices[1]> (x) ...
inline State product_state(const std::vector<int>& legs, const std::vector<int>& indices) {
    if (legs.size() != indices.size()) throw std::invalid_argument("one basis index per leg required");
    long pos = 0;
    for (std::size_t k = 0; k < legs.size(); ++k) {
        if (indices[k] < 0 || indices[k] >= legs[k]) throw std::invalid_argument("basis index out of range");
        pos = pos * legs[k] + indices[k];
    }
    State s{Eigen::VectorXcd::Zero(layout_dim(legs)), legs};
    s.v(pos) = 1.0;
    return s;
}

// Truncated coherent state, renormalized on the cutoff space.
inline Eigen::VectorXcd coherent_fock(int n_max, Complex amplitude) {
    Eigen::VectorXcd v(n_max + 1);
    v(0) = 1.0;
    for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * amplitude / std::sqrt(static_cast<double>(n));
    v /= v.norm();
    return v;
}

// atom basis state (level index, aligned dipole if the layout has that leg)
// tensored with a given Fock-leg vector
inline State atom_field_state(const ham::ModelParams& p, int level_index, const Eigen::VectorXcd& fock) {
    const auto legs = p.layout();
    if (fock.size() != p.n_max + 1) throw std::invalid_argument("Fock vector does not match the cutoff");
    Eigen::VectorXcd atom;
    if (legs.size() == 3) {
        atom = Eigen::VectorXcd::Zero(4);
        atom(level_index * 2 + 0) = 1.0;  // dipole leg in its +z eigenstate
    } else {
        atom = Eigen::VectorXcd::Zero(2);
        atom(level_index) = 1.0;
    }
    State s{Eigen::VectorXcd::Zero(atom.size() * fock.size()), legs};
    for (long i = 0; i < atom.size(); ++i)
        s.v.segment(i * fock.size(), fock.size()) = atom(i) * fock;
    return s;
}

// --- propagation ----------------------------------------------------------------

class Propagator {
public:
    explicit Propagator(const ham::HamiltonianBundle& b, double hermiticity_tol = 1e-13)
        : hbar_(b.params.hbar) {
        if (b.relative_hermiticity_defect() > hermiticity_tol)
            throw std::invalid_argument("Hamiltonian is not Hermitian within tolerance");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.H.mat());
        if (es.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");
        vecs_ = es.eigenvectors();
        vals_ = es.eigenvalues();
    }

    // exp(-i H t / hbar) psi
    Eigen::VectorXcd advance(const Eigen::VectorXcd& psi, double t) const {
        Eigen::VectorXcd modal = vecs_.adjoint() * psi;
        for (long k = 0; k < modal.size(); ++k)
            modal(k) *= std::exp(Complex{0.0, -vals_(k) * t / hbar_});
        return vecs_ * modal;
    }

    const Eigen::VectorXd& eigenvalues() const { return vals_; }

private:
    Eigen::MatrixXcd vecs_;
    Eigen::VectorXd vals_;
    double hbar_;
};

// --- observables ----------------------------------------------------------------

inline double expectation_real(const ops::Op& op, const Eigen::VectorXcd& psi) {
    return (psi.adjoint() * op.mat() * psi)(0).real();
}

// density matrix of the level leg (leg 0): reshape to 2 x rest and contract
inline Eigen::Matrix2cd reduced_level_state(const Eigen::VectorXcd& psi, const std::vector<int>& legs) {
    const long rest = layout_dim(legs) / legs.front();
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            rho(i, j) = psi.segment(i * rest, rest).dot(psi.segment(j * rest, rest));
    // .dot conjugates the left argument; rho(i,j) = sum_k psi_i(k) psi_j(k)^*
    return rho.conjugate();
}

inline double trace_distance(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

struct Sample {
    double t = 0.0;
    double sigma3 = 0.0;
    double n_photons = 0.0;
    std::array<double, 3> dipole{0.0, 0.0, 0.0};
    std::array<double, 2> populations{0.0, 0.0};  // excited, ground
    double norm = 0.0;
    double energy = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    Eigen::VectorXcd final_state;
    std::string kind;
    ham::ModelParams params;

    std::vector<double> column_sigma3() const {
        std::vector<double> out;
        out.reserve(samples.size());
        for (const auto& s : samples) out.push_back(s.sigma3);
        return out;
    }
};

inline std::vector<double> time_grid(double t_max, int n_samples) {
    if (n_samples < 2 || !(t_max > 0.0)) throw std::invalid_argument("need t_max > 0 and at least 2 samples");
    std::vector<double> t(n_samples);
    for (int k = 0; k < n_samples; ++k) t[k] = t_max * k / (n_samples - 1);
    return t;
}

inline Trajectory evolve(const ham::HamiltonianBundle& b, const State& psi0,
                         const std::vector<double>& times) {
    if (psi0.legs != b.H.legs()) throw std::invalid_argument("state layout does not match the Hamiltonian");
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (!(times[k] < times[k + 1])) throw std::invalid_argument("time grid must be strictly increasing");

    const auto& legs = b.H.legs();
    const int last = static_cast<int>(legs.size()) - 1;
    const ops::Op sigma3 = ops::tensor_lift(ops::pauli(3), legs, 0);
    const ops::Op n_op = ops::tensor_lift(ops::fock_operators(b.params.n_max).n, legs, last);
    const bool has_dipole_leg = legs.size() == 3;
    std::vector<ops::Op> dip;
    std::array<double, 3> aligned_dipole{0.0, 0.0, 0.0};
    if (has_dipole_leg) {
        for (int r = 1; r <= 3; ++r)
            dip.push_back(ops::tensor_lift(ops::dipole_operator(r, b.params.d, b.params.hbar), legs, 1));
    } else if (b.params.field.norm() > 0.0) {
        // aligned mode freezes the dipole to its field-axis eigenvalue
        const Eigen::Vector3d axis = b.params.field.normalized();
        for (int r = 0; r < 3; ++r)
            aligned_dipole[r] = b.params.aligned_sign * b.params.hbar * b.params.d * axis(r);
    }

    const Propagator prop(b);
    const long rest = layout_dim(legs) / legs.front();

    Trajectory out;
    out.kind = b.kind;
    out.params = b.params;
    out.samples.reserve(times.size());
    Eigen::VectorXcd psi;
    for (double t : times) {
        psi = prop.advance(psi0.v, t);
        Sample s;
        s.t = t;
        s.norm = psi.norm();
        s.sigma3 = expectation_real(sigma3, psi);
        s.n_photons = expectation_real(n_op, psi);
        if (has_dipole_leg)
            for (int r = 0; r < 3; ++r) s.dipole[r] = expectation_real(dip[r], psi);
        else
            s.dipole = aligned_dipole;
        s.populations = {psi.segment(0, rest).squaredNorm(), psi.segment(rest, rest).squaredNorm()};
        s.energy = expectation_real(b.H, psi);
        out.samples.push_back(s);
    }
    out.final_state = std::move(psi);
    return out;
}

// --- envelope utilities -----------------------------------------------------------

inline std::vector<double> moving_average(const std::vector<double>& x, int half_window) {
    if (half_window <= 0) return x;
    const int n = static_cast<int>(x.size());
    std::vector<double> out(x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half_window);
        const int hi = std::min(n - 1, i + half_window);
        double acc = 0.0;
        for (int k = lo; k <= hi; ++k) acc += x[k];
        out[i] = acc / (hi - lo + 1);
    }
    return out;
}

// amplitude envelope via the analytic signal (FFT Hilbert transform)
inline std::vector<double> hilbert_envelope(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw std::invalid_argument("signal too short for an envelope");
    Eigen::FFT<double> fft;
    std::vector<Complex> spec;
    std::vector<double> copy = x;
    fft.fwd(spec, copy);
    // analytic signal: keep DC and Nyquist, double positive, drop negative
    for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    std::vector<Complex> analytic;
    fft.inv(analytic, spec);
    std::vector<double> env(x.size());
    for (int k = 0; k < n; ++k) env[k] = std::abs(analytic[k]);
    return env;
}

// --- collapse and revival -----------------------------------------------------------

inline int required_cutoff(Complex amplitude) {
    const double nbar = std::norm(amplitude);
    return static_cast<int>(std::ceil(nbar + 6.0 * std::sqrt(nbar)));
}

struct RevivalScan {
    Trajectory trajectory;
    std::vector<double> envelope;          // smoothed inversion envelope
    std::optional<double> revival_time;    // first envelope peak after the collapse
    double theoretical_revival = 0.0;      // 2 pi hbar sqrt(nbar) / g
    int cutoff_required = 0;
};

// First local maximum of the smoothed envelope after it has dropped below
// `collapse_fraction` of its initial level; nullopt when no collapse happens.
inline std::optional<double> first_revival_from_envelope(const std::vector<double>& env,
                                                         const std::vector<double>& t,
                                                         double collapse_fraction = 0.3) {
    const int n = static_cast<int>(env.size());
    const double start = *std::max_element(env.begin(), env.begin() + std::max(2, n / 50));
    const double threshold = collapse_fraction * start;
    int drop = -1;
    for (int i = 0; i < n; ++i)
        if (env[i] < threshold) {
            drop = i;
            break;
        }
    if (drop < 0) return std::nullopt;

    // candidate peaks after the collapse point
    const double floor_level =
        0.5 * *std::max_element(env.begin() + drop, env.end());
    for (int i = drop + 1; i + 1 < n; ++i)
        if (env[i] > floor_level && env[i] >= env[i - 1] && env[i] >= env[i + 1]) return t[i];
    return std::nullopt;
}

inline RevivalScan collapse_revival_scan(const ham::ModelParams& p, Complex amplitude, double t_max,
                                         int n_samples = 4000,
                                         ham::ModelKind kind = ham::ModelKind::JaynesCummingsNonRel) {
    const int needed = required_cutoff(amplitude);
    if (p.n_max < needed)
        throw std::invalid_argument("Fock cutoff " + std::to_string(p.n_max) +
                                    " too small for the coherent amplitude; need at least " +
                                    std::to_string(needed));
    const auto bundle = ham::build_hamiltonian(kind, p);
    const State psi0 = atom_field_state(p, 0, coherent_fock(p.n_max, amplitude));

    RevivalScan scan;
    scan.cutoff_required = needed;
    scan.trajectory = evolve(bundle, psi0, time_grid(t_max, n_samples));

    const double g = p.g();
    const double nbar = std::norm(amplitude);
    scan.theoretical_revival = (g > 0.0 && nbar > 0.0)
                                   ? 2.0 * M_PI * p.hbar * std::sqrt(nbar) / g
                                   : 0.0;

    const auto env = hilbert_envelope(scan.trajectory.column_sigma3());
    scan.envelope = moving_average(env, std::max(1, n_samples / 200));
    std::vector<double> times;
    times.reserve(scan.trajectory.samples.size());
    for (const auto& s : scan.trajectory.samples) times.push_back(s.t);
    scan.revival_time = first_revival_from_envelope(scan.envelope, times);
    return scan;
}

// --- rotating-wave validity -----------------------------------------------------------

// d chosen so the coupling ratio g/(hbar omega) takes the requested value
inline ham::ModelParams with_coupling_ratio(ham::ModelParams p, double ratio) {
    const double field_norm = p.field.norm();
    if (!(field_norm > 0.0)) throw std::invalid_argument("coupling ratio needs a nonzero field");
    p.d = ratio * p.omega / (p.c * field_norm);
    return p;
}

struct RwaReport {
    double coupling_ratio = 0.0;
    double max_trace_distance = 0.0;
    double t_max = 0.0;
};

// Trace distance between the reduced level states of the Rabi and JC
// evolutions from |excited, vacuum>, over `periods` vacuum Rabi periods.
inline RwaReport rwa_validity(const ham::ModelParams& p, double periods = 10.0, int n_samples = 1500) {
    const double g = p.g();
    if (!(g > 0.0)) return {0.0, 0.0, 0.0};

    const double t_max = periods * M_PI * p.hbar / g;  // inversion period of cos(2gt/hbar)
    const auto times = time_grid(t_max, n_samples);
    const State psi0 = atom_field_state(p, 0, Eigen::VectorXcd::Unit(p.n_max + 1, 0));

    const Propagator prop_rabi(ham::build_nonrel_rabi(p));
    const Propagator prop_jc(ham::build_jaynes_cummings(p, false));
    double worst = 0.0;
    for (double t : times) {
        const auto ra = reduced_level_state(prop_rabi.advance(psi0.v, t), p.layout());
        const auto jb = reduced_level_state(prop_jc.advance(psi0.v, t), p.layout());
        worst = std::max(worst, trace_distance(ra, jb));
    }
    return {g / (p.hbar * p.omega), worst, t_max};
}

// --- relativistic vs non-relativistic -----------------------------------------------------------

struct ComparisonPoint {
    double c = 0.0;
    double spectral_deviation = 0.0;
    double sigma3_deviation = 0.0;
    double sigma1_deviation = 0.0;
    double photon_deviation = 0.0;

    double observable_deviation() const {
        return std::max({sigma3_deviation, sigma1_deviation, photon_deviation});
    }
};

struct ComparisonReport {
    std::vector<ComparisonPoint> points;
    ham::OmegaLink link = ham::OmegaLink::ConsistentSplitting;
    bool monotone = false;  // deviations strictly decreasing along the c list
};

// Evolve the rescaled relativistic Rabi model and the non-relativistic one
// from (|e> + |g>)/sqrt(2) (x) vacuum and compare observables.  The rest
// energy is already subtracted by the rescaled builder, and the compared
// quantities are expectation values, so no further phase alignment is needed.
inline ComparisonReport relativistic_comparison(const ham::ModelParams& base,
                                                const std::vector<double>& c_values,
                                                ham::OmegaLink link, double t_max, int n_samples = 600) {
    ComparisonReport report;
    report.link = link;

    for (double c : c_values) {
        const ham::ModelParams p = ham::linked_params(base, c, link);
        const auto rel = ham::build_rescaled_relativistic(p, false);
        const auto nr = ham::build_nonrel_rabi(p);

        const auto legs = p.layout();
        std::vector<int> excited(legs.size(), 0), ground(legs.size(), 0);
        ground[0] = 1;
        State psi0 = product_state(legs, excited);
        psi0.v = (psi0.v + product_state(legs, ground).v) / std::sqrt(2.0);

        const auto times = time_grid(t_max, n_samples);
        const ops::Op sigma1 = ops::tensor_lift(ops::pauli(1), legs, 0);
        const ops::Op sigma3 = ops::tensor_lift(ops::pauli(3), legs, 0);
        const ops::Op n_op =
            ops::tensor_lift(ops::fock_operators(p.n_max).n, legs, static_cast<int>(legs.size()) - 1);

        const Propagator prop_rel(rel);
        const Propagator prop_nr(nr);
        ComparisonPoint point;
        point.c = c;
        point.spectral_deviation = ham::spectral_deviation(p, false);
        for (double t : times) {
            const Eigen::VectorXcd a = prop_rel.advance(psi0.v, t);
            const Eigen::VectorXcd b = prop_nr.advance(psi0.v, t);
            point.sigma3_deviation = std::max(point.sigma3_deviation,
                                              std::abs(expectation_real(sigma3, a) - expectation_real(sigma3, b)));
            point.sigma1_deviation = std::max(point.sigma1_deviation,
                                              std::abs(expectation_real(sigma1, a) - expectation_real(sigma1, b)));
            point.photon_deviation = std::max(point.photon_deviation,
                                              std::abs(expectation_real(n_op, a) - expectation_real(n_op, b)));
        }
        report.points.push_back(point);
    }

    report.monotone = report.points.size() > 1;
    for (std::size_t k = 0; k + 1 < report.points.size(); ++k)
        if (!(report.points[k + 1].observable_deviation() < report.points[k].observable_deviation() &&
              report.points[k + 1].spectral_deviation < report.points[k].spectral_deviation))
            report.monotone = false;
    return report;
}

// --- rest-frame diagnostic -----------------------------------------------------------

// kappa plus a single-mode stand-in for the field momentum: (hbar omega / c)
// <n> along the field polarization axis.  The untruncated quantity is an
// integral over field modes; one truncated mode has no propagation direction
// of its own, so the polarization axis is used and the result is reported,
// never enforced.
inline Eigen::Vector3d rest_frame_diagnostic(const State& psi, const ham::ModelParams& p) {
    const auto legs = p.layout();
    if (psi.legs != legs) throw std::invalid_argument("state layout does not match the parameters");
    const ops::Op n_op =
        ops::tensor_lift(ops::fock_operators(p.n_max).n, legs, static_cast<int>(legs.size()) - 1);
    const double n_mean = expectation_real(n_op, psi.v);
    Eigen::Vector3d axis = Eigen::Vector3d::Zero();
    if (p.field.norm() > 0.0) axis = p.field.normalized();
    return p.kappa + (p.hbar * p.omega / p.c) * n_mean * axis;
}

}  // namespace relatom::dyn
