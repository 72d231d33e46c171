#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "relatom/grassmann.hpp"
#include "relatom/kinematics.hpp"
#include "relatom/poincare.hpp"

using namespace relatom::grassmann;
using relatom::eta;

namespace {

const GeneratorTable& table() {
    static GeneratorTable t = atom_generators();
    return t;
}

Element gen(std::string_view name) { return Element::generator(table(), name); }
Element xi(int mu) { return gen("xi" + std::to_string(mu)); }
Element scal(Coeff c) { return Element::scalar(table(), c); }

double dist(const Element& a, const Element& b) {
    Element d = a;
    d -= b;
    return d.max_abs_coeff();
}

// random homogeneous element of the requested parity, fixed-seed reproducible
Element random_homogeneous(std::mt19937& rng, int par) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, table().size() - 1);
    Element out = Element::zero(table());
    const std::vector<int> degs = (par == 1) ? std::vector<int>{1, 3} : std::vector<int>{0, 2, 4};
    for (int t = 0; t < 4; ++t) {
        const int d = degs[static_cast<std::size_t>(pick(rng)) % degs.size()];
        Element term = scal(Coeff{u(rng), u(rng)});
        std::uint64_t used = 0;
        for (int k = 0; k < d;) {
            const int id = pick(rng);
            if (used & (std::uint64_t{1} << id)) continue;
            used |= std::uint64_t{1} << id;
            term = term * Element::generator(table(), id);
            ++k;
        }
        out += term;
    }
    return out;
}

}  // namespace

TEST_CASE("graded product basics") {
    SECTION("every generator squares to zero") {
        for (int id = 0; id < table().size(); ++id) {
            Element g = Element::generator(table(), id);
            REQUIRE((g * g).is_zero());
        }
    }
    SECTION("distinct generators anticommute") {
        for (int a = 0; a < table().size(); ++a)
            for (int b = a + 1; b < table().size(); ++b) {
                Element ga = Element::generator(table(), a);
                Element gb = Element::generator(table(), b);
                REQUIRE(dist(ga * gb, -(gb * ga)) == 0.0);
            }
    }
    SECTION("associativity on random elements") {
        std::mt19937 rng(101);
        for (int t = 0; t < 20; ++t) {
            Element a = random_homogeneous(rng, t % 2);
            Element b = random_homogeneous(rng, (t / 2) % 2);
            Element c = random_homogeneous(rng, (t / 3) % 2);
            REQUIRE(dist((a * b) * c, a * (b * c)) < 1e-14);
        }
    }
    SECTION("degree and parity bookkeeping") {
        Element e = xi(0) * xi(1) + scal(Coeff{2.0, 0.0});
        REQUIRE(e.max_degree() == 2);
        REQUIRE(e.parity().value() == 0);
        Element mixed = xi(0) + xi(0) * xi(1);
        REQUIRE_FALSE(mixed.parity().has_value());
    }
}

TEST_CASE("left and right derivatives") {
    // xi0 xi1 = -xi1 xi0, so the left derivative by xi1 is -xi0 and the right
    // derivative is +xi0.
    Element m = xi(0) * xi(1);
    REQUIRE(dist(left_derivative(m, table().id_of("xi1")), -xi(0)) == 0.0);
    REQUIRE(dist(right_derivative(m, table().id_of("xi1")), xi(0)) == 0.0);
    REQUIRE(dist(left_derivative(m, table().id_of("xi0")), xi(1)) == 0.0);
    REQUIRE(dist(right_derivative(m, table().id_of("xi0")), -xi(1)) == 0.0);
    REQUIRE(left_derivative(m, table().id_of("alpha")).is_zero());
}

TEST_CASE("conjugation is an antilinear antiautomorphism") {
    std::mt19937 rng(202);
    SECTION("pinned pair") {
        // (alpha beta)* = beta* alpha*
        Element ab = gen("alpha") * gen("beta");
        REQUIRE(dist(ab.conjugated(), gen("beta_star") * gen("alpha_star")) == 0.0);
    }
    SECTION("involution and product reversal on random elements") {
        for (int t = 0; t < 10; ++t) {
            Element a = random_homogeneous(rng, t % 2);
            Element b = random_homogeneous(rng, (t + 1) % 2);
            REQUIRE(dist(a.conjugated().conjugated(), a) < 1e-14);
            REQUIRE(dist((a * b).conjugated(), b.conjugated() * a.conjugated()) < 1e-14);
        }
    }
    SECTION("antilinearity") {
        Element a = gen("alpha");
        Element e = a * Coeff{0.0, 2.0};
        REQUIRE(dist(e.conjugated(), gen("alpha_star") * Coeff{0.0, -2.0}) == 0.0);
    }
}

TEST_CASE("fundamental graded Poisson brackets") {
    const BracketSpec spec = atom_bracket_spec(table());

    SECTION("canonical pairs carry -eta and -1") {
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                Element br = graded_poisson(xi(mu), gen("pi_xi" + std::to_string(nu)), spec);
                REQUIRE(dist(br, scal(Coeff{-eta(mu, nu), 0.0})) == 0.0);
            }
        REQUIRE(dist(graded_poisson(gen("alpha"), gen("pi_alpha"), spec), scal({-1.0, 0.0})) == 0.0);
        REQUIRE(dist(graded_poisson(gen("alpha_star"), gen("pi_alpha_star"), spec), scal({-1.0, 0.0})) == 0.0);
        REQUIRE(dist(graded_poisson(gen("beta"), gen("pi_beta"), spec), scal({-1.0, 0.0})) == 0.0);
        REQUIRE(dist(graded_poisson(gen("beta_star"), gen("pi_beta_star"), spec), scal({-1.0, 0.0})) == 0.0);
        REQUIRE(graded_poisson(gen("alpha"), gen("pi_beta"), spec).is_zero());
        REQUIRE(graded_poisson(xi(0), gen("alpha"), spec).is_zero());
    }
    SECTION("odd-odd bracket is symmetric at generator level") {
        for (int a = 0; a < table().size(); ++a)
            for (int b = 0; b < table().size(); ++b) {
                Element ga = Element::generator(table(), a);
                Element gb = Element::generator(table(), b);
                REQUIRE(dist(graded_poisson(ga, gb, spec), graded_poisson(gb, ga, spec)) == 0.0);
            }
    }
    SECTION("graded antisymmetry, Leibniz, Jacobi") {
        std::mt19937 rng(303);
        for (int t = 0; t < 12; ++t) {
            const int pf = t % 2, pg = (t / 2) % 2, ph = (t / 4) % 2;
            Element f = random_homogeneous(rng, pf);
            Element g = random_homogeneous(rng, pg);
            Element h = random_homogeneous(rng, ph);
            const double sfg = (pf * pg) % 2 ? -1.0 : 1.0;
            const double sfh = (pf * ph) % 2 ? -1.0 : 1.0;
            const double sgh = (pg * ph) % 2 ? -1.0 : 1.0;

            // {F,G} = -(-1)^{|F||G|} {G,F}
            REQUIRE(dist(graded_poisson(f, g, spec), graded_poisson(g, f, spec) * Coeff{-sfg, 0.0}) < 1e-13);

            // {F, GH} = {F,G} H + (-1)^{|F||G|} G {F,H}
            Element lhs = graded_poisson(f, g * h, spec);
            Element rhs = graded_poisson(f, g, spec) * h + (g * graded_poisson(f, h, spec)) * Coeff{sfg, 0.0};
            REQUIRE(dist(lhs, rhs) < 1e-13);

            // cyclic graded Jacobi
            Element jac = graded_poisson(f, graded_poisson(g, h, spec), spec) * Coeff{sfh, 0.0};
            jac += graded_poisson(g, graded_poisson(h, f, spec), spec) * Coeff{sfg, 0.0};
            jac += graded_poisson(h, graded_poisson(f, g, spec), spec) * Coeff{sgh, 0.0};
            REQUIRE(jac.max_abs_coeff() < 1e-13);
        }
    }
}

TEST_CASE("level bilinear square") {
    // (beta* alpha + alpha* beta)^2 is a nonzero quartic: both cross terms
    // reorder to -alpha alpha* beta beta*, so they add instead of cancelling
    const Element bilinear = gen("beta_star") * gen("alpha") + gen("alpha_star") * gen("beta");
    const Element expected = gen("alpha") * gen("alpha_star") * gen("beta") * gen("beta_star") * Coeff{-2.0, 0.0};
    REQUIRE(dist(bilinear * bilinear, expected) == 0.0);

    // the interaction term it multiplies still squares to zero through its
    // dipole factor: any product of four transverse components repeats one
    const Eigen::Vector3d h{0.4, 0.1, -0.7};
    const auto xp = relatom::poincare::transverse_dipole(table(), h);
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
            const Element dr = xp[(r + 1) % 3] * xp[(r + 2) % 3];
            const Element ds = xp[(s + 1) % 3] * xp[(s + 2) % 3];
            REQUIRE(((bilinear * dr) * (bilinear * ds)).is_zero(1e-15));
        }
}

TEST_CASE("Dirac bracket over the canonical constraints") {
    const BracketSpec spec = atom_bracket_spec(table());
    const std::vector<Element> chi = atom_constraints(table());
    const Coeff mi{0.0, -1.0};

    SECTION("reduced dipole sector: {xi,xi}* = -i eta") {
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                Element br = dirac_bracket(xi(mu), xi(nu), chi, spec);
                REQUIRE(dist(br, scal(mi * eta(mu, nu))) < 1e-14);
            }
    }
    SECTION("reduced level sector: {alpha,alpha*}* = {beta,beta*}* = -i, cross terms vanish") {
        REQUIRE(dist(dirac_bracket(gen("alpha"), gen("alpha_star"), chi, spec), scal(mi)) < 1e-14);
        REQUIRE(dist(dirac_bracket(gen("beta"), gen("beta_star"), chi, spec), scal(mi)) < 1e-14);
        REQUIRE(dirac_bracket(gen("alpha"), gen("alpha"), chi, spec).is_zero(1e-14));
        REQUIRE(dirac_bracket(gen("alpha"), gen("beta"), chi, spec).is_zero(1e-14));
        REQUIRE(dirac_bracket(gen("alpha"), gen("beta_star"), chi, spec).is_zero(1e-14));
        REQUIRE(dirac_bracket(xi(2), gen("alpha"), chi, spec).is_zero(1e-14));
    }
    SECTION("constraints are annihilated by the Dirac bracket") {
        for (int id = 0; id < table().size(); ++id)
            for (const Element& c : chi) {
                Element g = Element::generator(table(), id);
                REQUIRE(dirac_bracket(g, c, chi, spec).is_zero(1e-13));
                REQUIRE(dirac_bracket(c, g, chi, spec).is_zero(1e-13));
            }
    }
    SECTION("duplicate constraints give a singular matrix") {
        std::vector<Element> bad = chi;
        bad.push_back(chi.front());
        REQUIRE_THROWS_AS(dirac_bracket(xi(0), xi(1), bad, spec), std::domain_error);
    }
    SECTION("constraint brackets with soul terms are rejected") {
        std::vector<Element> bad;
        bad.push_back(gen("pi_xi0"));
        bad.push_back(xi(0) + xi(0) * xi(1) * gen("pi_xi1"));
        REQUIRE_THROWS_AS(dirac_bracket(xi(2), xi(3), bad, spec), std::domain_error);
    }
}

TEST_CASE("transversality stage and spin closure") {
    const BracketSpec spec = atom_bracket_spec(table());
    const std::vector<Element> chi = atom_constraints(table());

    const Eigen::Vector3d h{0.3, -0.4, 1.2};
    const double mc = 2.7;
    const double gamma = relatom::kinematics::gamma_of(h);
    const std::array<double, 4> p{mc * gamma, mc * h[0], mc * h[1], mc * h[2]};
    const Element phi = transversality_constraint(table(), p);

    // transverse dipole components through the inverse tetrad rows
    const Eigen::Matrix4d w = relatom::kinematics::inverse_tetrad(h);
    std::vector<Element> xperp;
    for (int r = 0; r < 3; ++r) {
        Element e = Element::zero(table());
        for (int mu = 0; mu < 4; ++mu) e += xi(mu) * Coeff{w(r + 1, mu), 0.0};
        xperp.push_back(e);
    }

    auto stage1 = [&](const Element& a, const Element& b) { return dirac_bracket(a, b, chi, spec); };
    const std::vector<Element> phis{phi};
    auto star = [&](const Element& a, const Element& b) {
        return dirac_bracket(a, b, phis, table(), stage1);
    };

    SECTION("{xi_perp, xi_perp}** = +i delta") {
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
                const Coeff want{0.0, r == s ? 1.0 : 0.0};
                REQUIRE(dist(star(xperp[static_cast<std::size_t>(r)], xperp[static_cast<std::size_t>(s)]),
                             scal(want)) < 1e-12);
            }
    }
    SECTION("staged elimination equals joint elimination") {
        std::vector<Element> all = chi;
        all.push_back(phi);
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
                Element a = xperp[static_cast<std::size_t>(r)];
                Element b = xperp[static_cast<std::size_t>(s)];
                REQUIRE(dist(star(a, b), dirac_bracket(a, b, all, spec)) < 1e-12);
            }
        Element f = xperp[0] * xperp[1];
        Element g = xperp[1] * xperp[2];
        REQUIRE(dist(star(f, g), dirac_bracket(f, g, all, spec)) < 1e-12);
    }
    SECTION("spin bilinears close with -eps") {
        // S^r = -(i/2) eps^{ruv} xi_perp^u xi_perp^v
        std::vector<Element> spin;
        for (int r = 0; r < 3; ++r) {
            Element e = Element::zero(table());
            for (int u = 0; u < 3; ++u)
                for (int v = 0; v < 3; ++v) {
                    const int c = relatom::levi_civita(r, u, v);
                    if (c != 0)
                        e += (xperp[static_cast<std::size_t>(u)] * xperp[static_cast<std::size_t>(v)]) *
                             (Coeff{0.0, -0.5} * static_cast<double>(c));
                }
            spin.push_back(e);
        }
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
                Element want = Element::zero(table());
                for (int u = 0; u < 3; ++u) {
                    const int c = relatom::levi_civita(r, s, u);
                    if (c != 0) want += spin[static_cast<std::size_t>(u)] * Coeff{-static_cast<double>(c), 0.0};
                }
                REQUIRE(dist(star(spin[static_cast<std::size_t>(r)], spin[static_cast<std::size_t>(s)]), want) <
                        1e-12);
            }
    }
}

TEST_CASE("deterministic rendering") {
    Element e = gen("alpha") + xi(0) * gen("pi_xi1");
    REQUIRE(e.str() == "(1+0i)*alpha + (1+0i)*xi0*pi_xi1");
    REQUIRE(Element::zero(table()).str() == "0");
}
