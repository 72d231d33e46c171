#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "relatom/dynamics.hpp"

using namespace relatom;
using dyn::State;
using ham::CouplingForm;
using ham::ModelKind;
using ham::ModelParams;
using Complex = std::complex<double>;

namespace {

// resonant scalar-aligned model with coupling g
ModelParams resonant_params(double g, int n_max) {
    ModelParams p;
    p.Omega_tilde = 1.0;
    p.omega = 1.0;
    p.field = Eigen::Vector3d{0.0, 0.0, 1.0};
    p.d = g / (p.c * p.hbar * p.field.norm());
    p.n_max = n_max;
    p.coupling = CouplingForm::ScalarAligned;
    return p;
}

State excited_vacuum(const ModelParams& p) {
    return dyn::atom_field_state(p, 0, Eigen::VectorXcd::Unit(p.n_max + 1, 0));
}

}  // namespace

TEST_CASE("propagator basics") {
    const ModelParams p = resonant_params(0.1, 6);
    const auto jc = ham::build_jaynes_cummings(p, false);

    SECTION("non-Hermitian input is rejected") {
        ham::HamiltonianBundle bad = jc;
        Eigen::MatrixXcd m = bad.H.mat();
        m(0, 1) += Complex{0.0, 0.5};
        bad.H = ops::Op(m, bad.H.legs());
        REQUIRE_THROWS_AS(dyn::Propagator(bad), std::invalid_argument);
    }

    SECTION("time reversal") {
        const dyn::Propagator prop(jc);
        const State psi0 = excited_vacuum(p);
        const Eigen::VectorXcd back = prop.advance(prop.advance(psi0.v, 7.3), -7.3);
        REQUIRE((back - psi0.v).norm() <= 1e-11);
    }

    SECTION("layout and grid validation") {
        State wrong{Eigen::VectorXcd::Zero(4), {2, 2}};
        REQUIRE_THROWS_AS(dyn::evolve(jc, wrong, {0.0, 1.0}), std::invalid_argument);
        REQUIRE_THROWS_AS(dyn::evolve(jc, excited_vacuum(p), {0.0, 1.0, 1.0}), std::invalid_argument);
    }

    SECTION("eigenstate of a decoupled model keeps its populations") {
        ModelParams q = p;
        q.d = 0.0;
        const auto traj = dyn::evolve(ham::build_jaynes_cummings(q, false), excited_vacuum(q),
                                      dyn::time_grid(20.0, 200));
        for (const auto& s : traj.samples) {
            REQUIRE(std::abs(s.populations[0] - 1.0) <= 1e-13);
            REQUIRE(std::abs(s.sigma3 - 1.0) <= 1e-13);
        }
    }
}

TEST_CASE("conservation laws along trajectories") {
    const ModelParams p = resonant_params(0.2, 14);
    const State psi0 = dyn::atom_field_state(p, 0, dyn::coherent_fock(p.n_max, Complex{1.2, 0.4}));
    const auto times = dyn::time_grid(60.0, 1000);

    SECTION("unitarity and energy under the Rabi model") {
        const auto b = ham::build_nonrel_rabi(p);
        const auto traj = dyn::evolve(b, psi0, times);
        const double e0 = traj.samples.front().energy;
        for (const auto& s : traj.samples) {
            REQUIRE(std::abs(s.norm - 1.0) <= 1e-12);
            REQUIRE(std::abs(s.energy - e0) <= 1e-11 * std::max(1.0, std::abs(e0)));
        }
    }

    SECTION("parity under Rabi, excitation number under JC") {
        const auto legs = p.layout();
        const ops::Op parity = ops::tensor_lift(ops::pauli(3), legs, 0) *
                               ops::tensor_lift(ops::fock_parity(p.n_max), legs, 1);
        const ops::Op excitation =
            ops::tensor_lift(0.5 * (ops::Op::identity({2}) + ops::pauli(3)), legs, 0) +
            ops::tensor_lift(ops::fock_operators(p.n_max).n, legs, 1);

        const dyn::Propagator rabi(ham::build_nonrel_rabi(p));
        const dyn::Propagator jc(ham::build_jaynes_cummings(p, false));
        const double par0 = dyn::expectation_real(parity, psi0.v);
        const double exc0 = dyn::expectation_real(excitation, psi0.v);
        for (double t : dyn::time_grid(40.0, 80)) {
            REQUIRE(std::abs(dyn::expectation_real(parity, rabi.advance(psi0.v, t)) - par0) <= 1e-11);
            REQUIRE(std::abs(dyn::expectation_real(excitation, jc.advance(psi0.v, t)) - exc0) <= 1e-11);
        }
    }
}

TEST_CASE("vacuum Rabi oscillation matches the closed form") {
    const double g = 0.08;
    const ModelParams p = resonant_params(g, 5);
    const double period = M_PI * p.hbar / g;
    const auto traj =
        dyn::evolve(ham::build_jaynes_cummings(p, false), excited_vacuum(p), dyn::time_grid(5.0 * period, 1200));
    double worst = 0.0;
    for (const auto& s : traj.samples)
        worst = std::max(worst, std::abs(s.sigma3 - std::cos(2.0 * g * s.t / p.hbar)));
    REQUIRE(worst <= 1e-9);
}

TEST_CASE("coherent state preparation") {
    const Complex amp{2.0, -1.0};
    const int n_max = dyn::required_cutoff(amp);  // |amp|^2 = 5 -> cutoff 19
    REQUIRE(n_max == static_cast<int>(std::ceil(5.0 + 6.0 * std::sqrt(5.0))));

    const Eigen::VectorXcd v = dyn::coherent_fock(n_max, amp);
    REQUIRE(std::abs(v.norm() - 1.0) <= 1e-14);
    double n_mean = 0.0;
    for (int n = 0; n <= n_max; ++n) n_mean += n * std::norm(v(n));
    REQUIRE(std::abs(n_mean - 5.0) <= 1e-5);  // truncation tail only
}

TEST_CASE("envelope utilities") {
    // amplitude-modulated tone: envelope must recover the modulation
    const int n = 2048;
    std::vector<double> x(n), expected(n);
    for (int k = 0; k < n; ++k) {
        const double t = k / static_cast<double>(n);
        expected[k] = 0.8 + 0.2 * std::cos(2.0 * M_PI * 3.0 * t);
        x[k] = expected[k] * std::cos(2.0 * M_PI * 200.0 * t);
    }
    // integer carrier and modulation cycles: the analytic signal is exact,
    // so the envelope matches the modulation to roundoff everywhere
    const auto env = dyn::hilbert_envelope(x);
    for (int k = 0; k < n; ++k) REQUIRE(std::abs(env[k] - expected[k]) <= 1e-9);

    const auto avg = dyn::moving_average({1.0, 2.0, 3.0, 4.0}, 1);
    REQUIRE(avg[1] == Catch::Approx(2.0));
    REQUIRE(avg[3] == Catch::Approx(3.5));
}

TEST_CASE("collapse and revival of the inversion") {
    SECTION("insufficient cutoff is rejected with the required value") {
        ModelParams p = resonant_params(0.05, 10);
        REQUIRE_THROWS_WITH(dyn::collapse_revival_scan(p, Complex{3.0, 0.0}, 100.0),
                            Catch::Matchers::ContainsSubstring("27"));
    }

    SECTION("vacuum amplitude never collapses") {
        ModelParams p = resonant_params(0.05, 8);
        const double t_max = 5.0 * M_PI * p.hbar / 0.05;  // whole inversion periods
        const auto scan = dyn::collapse_revival_scan(p, Complex{0.0, 0.0}, t_max, 1500);
        REQUIRE_FALSE(scan.revival_time.has_value());
    }

    SECTION("revival time scales as sqrt(nbar)") {
        const double g = 0.05;
        std::vector<double> estimated;
        for (double amp : {2.0, 3.0, 4.0}) {  // nbar = 4, 9, 16
            ModelParams p = resonant_params(g, dyn::required_cutoff(Complex{amp, 0.0}) + 4);
            const double t_rev = 2.0 * M_PI * p.hbar * amp / g;
            const auto scan = dyn::collapse_revival_scan(p, Complex{amp, 0.0}, 1.4 * t_rev, 3000);
            REQUIRE(scan.revival_time.has_value());
            INFO("nbar = " << amp * amp << " estimate = " << *scan.revival_time << " vs " << t_rev);
            REQUIRE(std::abs(*scan.revival_time - t_rev) <= 0.15 * t_rev);
            estimated.push_back(*scan.revival_time);
        }
        // nbar = 9 case inside the tighter published window
        REQUIRE(std::abs(estimated[1] - 2.0 * M_PI * 3.0 / g) <= 0.10 * (2.0 * M_PI * 3.0 / g));
    }
}

TEST_CASE("rotating-wave validity") {
    ModelParams base = resonant_params(0.0, 30);

    SECTION("zero coupling gives zero distance") {
        const auto r = dyn::rwa_validity(base);
        REQUIRE(r.max_trace_distance == 0.0);
    }

    SECTION("weak coupling stays close, strong coupling departs") {
        const auto weak = dyn::rwa_validity(dyn::with_coupling_ratio(base, 1e-3));
        const auto strong = dyn::rwa_validity(dyn::with_coupling_ratio(base, 0.3));
        INFO("weak = " << weak.max_trace_distance << " strong = " << strong.max_trace_distance);
        REQUIRE(weak.max_trace_distance <= 1e-2);
        REQUIRE(strong.max_trace_distance > weak.max_trace_distance);
    }
}

TEST_CASE("relativistic model against its non-relativistic limit") {
    ModelParams base;
    base.Omega_tilde = 1.0;
    base.omega = 1.0;
    base.kappa = Eigen::Vector3d{0.2, 0.0, 0.1};
    base.field = Eigen::Vector3d{0.0, 0.0, 1.0};
    base.coupling = CouplingForm::ScalarAligned;
    base.n_max = 10;
    base.d = 0.05;  // g = 0.05 at the base c = 1
    const double t_max = 5.0 * M_PI / base.g();

    SECTION("consistent link converges monotonically to below 1e-4") {
        const auto report = dyn::relativistic_comparison(base, {1e1, 1e2, 1e3, 1e4},
                                                         ham::OmegaLink::ConsistentSplitting, t_max, 400);
        REQUIRE(report.monotone);
        REQUIRE(report.points.back().observable_deviation() <= 1e-4);
        REQUIRE(report.points.back().spectral_deviation <= 1e-4);
    }

    SECTION("mass-scaled literal link does not converge") {
        const auto report = dyn::relativistic_comparison(base, {1e1, 1e2},
                                                         ham::OmegaLink::LiteralMassScaled, t_max, 200);
        REQUIRE_FALSE(report.monotone);
        REQUIRE(report.points[1].spectral_deviation > report.points[0].spectral_deviation);
    }

    SECTION("decoupled point matches the closed-form phase mismatch") {
        ModelParams q = base;
        q.d = 0.0;
        q.kappa.setZero();
        const double c = 50.0;
        const double t_short = 30.0;
        const auto report = dyn::relativistic_comparison(q, {c}, ham::OmegaLink::ConsistentSplitting,
                                                         t_short, 500);

        const ModelParams linked = ham::linked_params(q, c, ham::OmegaLink::ConsistentSplitting);
        const double gap_rel = linked.c * (std::sqrt(linked.branch_argument(+1)) -
                                           std::sqrt(linked.branch_argument(-1)));
        const double gap_nr = linked.hbar * linked.Omega_tilde;
        double want = 0.0;
        for (double t : dyn::time_grid(t_short, 500))
            want = std::max(want, std::abs(std::cos(gap_rel * t / linked.hbar) -
                                           std::cos(gap_nr * t / linked.hbar)));
        // the rescaled matrix subtracts the rest energy, so the branch gap
        // carries a cancellation error of order mc^2 * eps; allow for it
        REQUIRE(std::abs(report.points[0].sigma1_deviation - want) <= 1e-9);
        REQUIRE(report.points[0].sigma3_deviation <= 1e-12);  // populations identical
    }
}

TEST_CASE("rest-frame diagnostic") {
    ModelParams p = resonant_params(0.1, 12);
    p.kappa = Eigen::Vector3d{0.3, -0.2, 0.5};

    SECTION("vacuum field reports kappa exactly") {
        const auto diag = dyn::rest_frame_diagnostic(excited_vacuum(p), p);
        REQUIRE((diag - p.kappa).norm() == 0.0);
    }

    SECTION("coherent field adds the mode momentum proxy along the polarization") {
        const Complex amp{1.5, 0.0};
        const State psi = dyn::atom_field_state(p, 0, dyn::coherent_fock(p.n_max, amp));
        double n_mean = 0.0;
        const Eigen::VectorXcd cs = dyn::coherent_fock(p.n_max, amp);
        for (int n = 0; n <= p.n_max; ++n) n_mean += n * std::norm(cs(n));
        const Eigen::Vector3d want =
            p.kappa + (p.hbar * p.omega / p.c) * n_mean * p.field.normalized();
        REQUIRE((dyn::rest_frame_diagnostic(psi, p) - want).norm() <= 1e-12);
    }
}

TEST_CASE("observable curves are cutoff-robust") {
    const double g = 0.05;
    const Complex amp{2.0, 0.0};
    ModelParams p = resonant_params(g, dyn::required_cutoff(amp) + 6);
    const double t_max = 0.5 * 2.0 * M_PI * p.hbar * 2.0 / g;

    const auto narrow = dyn::collapse_revival_scan(p, amp, t_max, 800);
    ModelParams wide = p;
    wide.n_max += 5;
    const auto wider = dyn::collapse_revival_scan(wide, amp, t_max, 800);

    double worst = 0.0;
    for (std::size_t k = 0; k < narrow.trajectory.samples.size(); ++k)
        worst = std::max(worst, std::abs(narrow.trajectory.samples[k].sigma3 -
                                         wider.trajectory.samples[k].sigma3));
    REQUIRE(worst <= 1e-6);
}
