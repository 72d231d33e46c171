#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "relatom/metric.hpp"

// Complex Grassmann multivector algebra over a named set of anticommuting
// generators, with the graded Poisson bracket and the Dirac bracket used in
// pseudo-classical mechanics.
//
// Representation: a monomial is a bitmask over generator ids (ascending id
// order is the canonical factor order), an element maps monomials to complex
// coefficients.  At most 64 generators.
//
// Bracket conventions.  The fundamental table C_ab = {th_a, th_b} is symmetric
// (two odd generators have a symmetric bracket) and the graded extension is
//     {F, G} = sum_ab (dR F / dth_a) C_ab (dL G / dth_b)
// with dR/dL the right/left Grassmann derivatives.  This is the unique
// bilinear extension satisfying the graded Leibniz rule, and it quantizes via
// [A, B]_{-+} = -i hbar {A, B}.
//
// Canonical pairs use left-derivative momenta: the velocity phase space of a
// kinetic term (i/2) th th' yields second-class constraints pi + (i/2) th,
// and the fundamental brackets {xi^mu, pi_xi^nu} = -eta^{mu nu},
// {alpha, pi_alpha} = -1 (same for the conjugate and beta pairs).

namespace relatom::grassmann {

using Coeff = std::complex<double>;

enum class Kind {
    XiVector,        // spacetime dipole direction xi^mu
    LevelAlpha,      // level degree of freedom alpha
    LevelAlphaStar,  // conjugate of alpha
    LevelBeta,       // level degree of freedom beta
    LevelBetaStar,   // conjugate of beta
    Momentum,        // canonical momentum of another generator
};

struct Generator {
    std::string name;
    Kind kind;
    int mu = -1;    // Lorentz index when kind == XiVector
    int base = -1;  // id of the paired coordinate when kind == Momentum
};

class GeneratorTable {
public:
    int add(Generator g) {
        if (generators_.size() >= 64) throw std::invalid_argument("generator table supports at most 64 generators");
        for (const auto& existing : generators_)
            if (existing.name == g.name) throw std::invalid_argument("duplicate generator name: " + g.name);
        if (g.kind == Kind::Momentum && (g.base < 0 || g.base >= static_cast<int>(generators_.size())))
            throw std::invalid_argument("momentum generator references unknown base: " + g.name);
        generators_.push_back(std::move(g));
        return static_cast<int>(generators_.size()) - 1;
    }

    int size() const { return static_cast<int>(generators_.size()); }

    const Generator& at(int id) const {
        if (id < 0 || id >= size()) throw std::out_of_range("generator id out of range");
        return generators_[static_cast<std::size_t>(id)];
    }

    int id_of(std::string_view name) const {
        for (int i = 0; i < size(); ++i)
            if (generators_[static_cast<std::size_t>(i)].name == name) return i;
        throw std::invalid_argument("unknown generator: " + std::string(name));
    }

    // Involution pairing alpha <-> alpha*, beta <-> beta*, xi fixed, and
    // momenta paired through their bases.
    int conjugate_of(int id) const {
        const Generator& g = at(id);
        switch (g.kind) {
            case Kind::XiVector: return id;
            case Kind::LevelAlpha: return find_kind(Kind::LevelAlphaStar);
            case Kind::LevelAlphaStar: return find_kind(Kind::LevelAlpha);
            case Kind::LevelBeta: return find_kind(Kind::LevelBetaStar);
            case Kind::LevelBetaStar: return find_kind(Kind::LevelBeta);
            case Kind::Momentum: {
                const int conj_base = conjugate_of(g.base);
                for (int i = 0; i < size(); ++i) {
                    const Generator& h = generators_[static_cast<std::size_t>(i)];
                    if (h.kind == Kind::Momentum && h.base == conj_base) return i;
                }
                throw std::logic_error("momentum generator lacks a conjugate partner: " + g.name);
            }
        }
        throw std::logic_error("unreachable");
    }

private:
    int find_kind(Kind k) const {
        for (int i = 0; i < size(); ++i)
            if (generators_[static_cast<std::size_t>(i)].kind == k) return i;
        throw std::logic_error("generator table lacks required kind");
    }

    std::vector<Generator> generators_;
};

namespace detail {

// Sign of concatenating two ascending monomials a, b and resorting:
// (-1)^{#pairs (x in a, y in b) with x > y}.
inline int merge_sign(std::uint64_t a, std::uint64_t b) {
    int inversions = 0;
    while (b != 0) {
        const int y = std::countr_zero(b);
        if (y < 63) inversions += std::popcount(a >> (y + 1));
        b &= b - 1;
    }
    return (inversions & 1) ? -1 : +1;
}

}  // namespace detail

class Element {
public:
    using Terms = std::map<std::uint64_t, Coeff>;

    static Element zero(const GeneratorTable& t) { return Element(&t); }

    static Element scalar(const GeneratorTable& t, Coeff c) {
        Element e(&t);
        if (c != Coeff{0.0, 0.0}) e.terms_[0] = c;
        return e;
    }

    static Element generator(const GeneratorTable& t, int id) {
        t.at(id);  // range check
        Element e(&t);
        e.terms_[std::uint64_t{1} << id] = Coeff{1.0, 0.0};
        return e;
    }

    static Element generator(const GeneratorTable& t, std::string_view name) {
        return generator(t, t.id_of(name));
    }

    const GeneratorTable& table() const { return *table_; }
    const Terms& terms() const { return terms_; }

    Coeff coeff(std::uint64_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? Coeff{0.0, 0.0} : it->second;
    }

    Coeff body() const { return coeff(0); }

    bool is_zero(double tol = 0.0) const {
        for (const auto& [mask, c] : terms_)
            if (std::abs(c) > tol) return false;
        return true;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mask, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    int max_degree() const {
        int deg = 0;
        for (const auto& [mask, c] : terms_)
            if (c != Coeff{0.0, 0.0}) deg = std::max(deg, std::popcount(mask));
        return deg;
    }

    // 0 or 1 when every term has the same parity, nullopt for mixed elements.
    std::optional<int> parity() const {
        std::optional<int> p;
        for (const auto& [mask, c] : terms_) {
            if (std::abs(c) == 0.0) continue;
            const int tp = std::popcount(mask) & 1;
            if (!p) p = tp;
            else if (*p != tp) return std::nullopt;
        }
        return p ? p : std::optional<int>(0);
    }

    Element& operator+=(const Element& o) {
        require_same_table(o);
        for (const auto& [mask, c] : o.terms_) accumulate(mask, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        require_same_table(o);
        for (const auto& [mask, c] : o.terms_) accumulate(mask, -c);
        return *this;
    }
    Element& operator*=(Coeff s) {
        if (s == Coeff{0.0, 0.0}) {
            terms_.clear();
            return *this;
        }
        for (auto& [mask, c] : terms_) c *= s;
        return *this;
    }

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(Coeff s, Element e) { return e *= s; }
    friend Element operator*(Element e, Coeff s) { return e *= s; }
    friend Element operator-(Element e) { return e *= Coeff{-1.0, 0.0}; }

    // Graded product: masks sharing a generator vanish, the rest pick up the
    // resorting sign.
    friend Element operator*(const Element& a, const Element& b) {
        a.require_same_table(b);
        Element out(a.table_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if ((ma & mb) != 0) continue;
                const Coeff c = ca * cb * static_cast<double>(detail::merge_sign(ma, mb));
                out.accumulate(ma | mb, c);
            }
        }
        return out;
    }

    // Antilinear involution with (ab)* = b* a*: coefficients conjugate, each
    // monomial reverses and maps generators through the table pairing.
    Element conjugated() const {
        Element out(table_);
        for (const auto& [mask, c] : terms_) {
            std::vector<int> ids;
            for (std::uint64_t m = mask; m != 0; m &= m - 1) ids.push_back(std::countr_zero(m));
            std::vector<int> mapped;
            for (auto it = ids.rbegin(); it != ids.rend(); ++it) mapped.push_back(table_->conjugate_of(*it));
            auto [sorted_mask, sign] = canonicalize(mapped);
            out.accumulate(sorted_mask, std::conj(c) * static_cast<double>(sign));
        }
        return out;
    }

    Element pruned(double tol = 1e-15) const {
        Element out(table_);
        for (const auto& [mask, c] : terms_)
            if (std::abs(c) > tol) out.terms_[mask] = c;
        return out;
    }

    // Deterministic rendering, degree-major then mask-ascending.
    std::string str() const;

private:
    explicit Element(const GeneratorTable* t) : table_(t) {}

    void require_same_table(const Element& o) const {
        if (table_ != o.table_) throw std::invalid_argument("elements belong to different generator tables");
    }

    void accumulate(std::uint64_t mask, Coeff c) {
        auto [it, inserted] = terms_.try_emplace(mask, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Coeff{0.0, 0.0}) terms_.erase(it);
        } else if (c == Coeff{0.0, 0.0}) {
            terms_.erase(it);
        }
    }

    // Sort a generator id list into ascending order, returning mask and the
    // permutation sign.  Repeated ids make the monomial vanish upstream, so
    // they are rejected here.
    static std::pair<std::uint64_t, int> canonicalize(std::vector<int>& ids) {
        int sign = +1;
        for (std::size_t i = 0; i + 1 < ids.size(); ++i)
            for (std::size_t j = 0; j + 1 < ids.size() - i; ++j)
                if (ids[j] > ids[j + 1]) {
                    std::swap(ids[j], ids[j + 1]);
                    sign = -sign;
                }
        std::uint64_t mask = 0;
        for (int id : ids) {
            const std::uint64_t bit = std::uint64_t{1} << id;
            if (mask & bit) throw std::logic_error("repeated generator in monomial");
            mask |= bit;
        }
        return {mask, sign};
    }

    friend Element left_derivative(const Element&, int);
    friend Element right_derivative(const Element&, int);

    const GeneratorTable* table_;
    Terms terms_;
};

// Left Grassmann derivative: move th_a to the front of each monomial, sign
// (-1)^{position}, then delete it.
inline Element left_derivative(const Element& e, int a) {
    Element out(&e.table());
    const std::uint64_t bit = std::uint64_t{1} << a;
    for (const auto& [mask, c] : e.terms()) {
        if ((mask & bit) == 0) continue;
        const int below = (a == 0) ? 0 : std::popcount(mask & (bit - 1));
        const int sign = (below & 1) ? -1 : +1;
        out.accumulate(mask & ~bit, c * static_cast<double>(sign));
    }
    return out;
}

// Right Grassmann derivative: move th_a to the back, sign (-1)^{k-1-position}.
inline Element right_derivative(const Element& e, int a) {
    Element out(&e.table());
    const std::uint64_t bit = std::uint64_t{1} << a;
    for (const auto& [mask, c] : e.terms()) {
        if ((mask & bit) == 0) continue;
        const int above = std::popcount(mask) - 1 - std::popcount(mask & (bit - 1));
        const int sign = (above & 1) ? -1 : +1;
        out.accumulate(mask & ~bit, c * static_cast<double>(sign));
    }
    return out;
}

// Symmetric fundamental-bracket table {th_a, th_b}.
class BracketSpec {
public:
    explicit BracketSpec(const GeneratorTable& t)
        : table_(&t), c_(static_cast<std::size_t>(t.size()) * static_cast<std::size_t>(t.size()), Coeff{0.0, 0.0}) {}

    const GeneratorTable& table() const { return *table_; }

    void set(int a, int b, Coeff v) {
        table_->at(a);
        table_->at(b);
        c_[index(a, b)] = v;
        c_[index(b, a)] = v;
        rebuild_support();
    }
    void set(std::string_view a, std::string_view b, Coeff v) { set(table_->id_of(a), table_->id_of(b), v); }

    Coeff get(int a, int b) const { return c_[index(a, b)]; }

    const std::vector<std::pair<int, int>>& nonzero_pairs() const { return support_; }

private:
    std::size_t index(int a, int b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(table_->size()) + static_cast<std::size_t>(b);
    }

    void rebuild_support() {
        support_.clear();
        const int n = table_->size();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (c_[index(a, b)] != Coeff{0.0, 0.0}) support_.emplace_back(a, b);
    }

    const GeneratorTable* table_;
    std::vector<Coeff> c_;
    std::vector<std::pair<int, int>> support_;
};

// Graded Poisson bracket {F, G} = sum_ab (dR F/dth_a) C_ab (dL G/dth_b).
inline Element graded_poisson(const Element& f, const Element& g, const BracketSpec& spec) {
    if (&f.table() != &spec.table() || &g.table() != &spec.table())
        throw std::invalid_argument("bracket spec and elements use different generator tables");
    Element out = Element::zero(spec.table());
    for (const auto& [a, b] : spec.nonzero_pairs()) {
        Element df = right_derivative(f, a);
        if (df.is_zero()) continue;
        Element dg = left_derivative(g, b);
        if (dg.is_zero()) continue;
        out += (df * dg) * spec.get(a, b);
    }
    return out;
}

// Dirac bracket for a second-class constraint set whose mutual brackets are
// pure numbers:  {A,B}* = {A,B} - {A,chi_i} (M^-1)_ij {chi_j,B},
// M_ij = {chi_i, chi_j}.  The base bracket is any graded bracket, so staged
// reductions can eliminate one constraint group at a time; for a second-class
// set the staged and joint eliminations agree.
template <typename BracketFn>
Element dirac_bracket(const Element& a, const Element& b, std::span<const Element> constraints,
                      const GeneratorTable& table, BracketFn&& base) {
    const std::size_t n = constraints.size();
    if (n == 0) return base(a, b);

    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Element mij = base(constraints[i], constraints[j]);
            Element soul = mij;
            soul -= Element::scalar(table, mij.body());
            if (!soul.is_zero(1e-12))
                throw std::domain_error("constraint bracket matrix is not numeric (soul terms present)");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mij.body();
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) throw std::domain_error("constraint bracket matrix is singular");
    const Eigen::MatrixXcd minv = lu.inverse();

    Element out = base(a, b);
    std::vector<Element> left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        left.push_back(base(a, constraints[i]));
        right.push_back(base(constraints[i], b));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (left[i].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const Coeff w = minv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (w == Coeff{0.0, 0.0} || right[j].is_zero()) continue;
            out -= (left[i] * right[j]) * w;
        }
    }
    return out;
}

inline Element dirac_bracket(const Element& a, const Element& b, std::span<const Element> constraints,
                             const BracketSpec& spec) {
    return dirac_bracket(a, b, constraints, spec.table(),
                         [&spec](const Element& x, const Element& y) { return graded_poisson(x, y, spec); });
}

// Square root of an even element with positive real body, via the binomial
// series in the soul.  Exact: soul powers vanish identically once their
// degree exceeds the generator count, so the series terminates.
inline Element nilpotent_sqrt(const Element& x) {
    const Coeff b = x.body();
    if (!(b.real() > 0.0) || std::abs(b.imag()) > 1e-14 * b.real())
        throw std::domain_error("nilpotent_sqrt needs a positive real body");

    const double a = b.real();
    const double root = std::sqrt(a);
    const Element soul = x - Element::scalar(x.table(), a);
    Element out = Element::scalar(x.table(), root);
    Element power = Element::scalar(x.table(), 1.0);
    double binom = 1.0;  // C(1/2, k)
    double scale = 1.0;  // a^k
    for (int k = 1; k <= 33; ++k) {
        power = power * soul;
        if (power.is_zero()) return out;
        binom *= (0.5 - (k - 1)) / k;
        scale *= a;
        out += Coeff{root * binom / scale, 0.0} * power;
    }
    throw std::logic_error("nilpotent_sqrt series did not terminate");
}

// --- standard atom algebra -------------------------------------------------

// Generators of the spinning-atom phase space: the spacetime dipole vector
// xi^mu, the two level variables alpha, beta with conjugates, and all their
// canonical momenta.
inline GeneratorTable atom_generators() {
    GeneratorTable t;
    for (int mu = 0; mu < 4; ++mu) t.add({"xi" + std::to_string(mu), Kind::XiVector, mu, -1});
    const int alpha = t.add({"alpha", Kind::LevelAlpha, -1, -1});
    const int alpha_star = t.add({"alpha_star", Kind::LevelAlphaStar, -1, -1});
    const int beta = t.add({"beta", Kind::LevelBeta, -1, -1});
    const int beta_star = t.add({"beta_star", Kind::LevelBetaStar, -1, -1});
    for (int mu = 0; mu < 4; ++mu) t.add({"pi_xi" + std::to_string(mu), Kind::Momentum, -1, mu});
    t.add({"pi_alpha", Kind::Momentum, -1, alpha});
    t.add({"pi_alpha_star", Kind::Momentum, -1, alpha_star});
    t.add({"pi_beta", Kind::Momentum, -1, beta});
    t.add({"pi_beta_star", Kind::Momentum, -1, beta_star});
    return t;
}

// Fundamental brackets: {xi^mu, pi_xi^nu} = -eta^{mu nu} and
// {q, pi_q} = -1 for each level pair.
inline BracketSpec atom_bracket_spec(const GeneratorTable& t) {
    BracketSpec spec(t);
    for (int mu = 0; mu < 4; ++mu)
        spec.set("xi" + std::to_string(mu), "pi_xi" + std::to_string(mu), Coeff{-eta(mu, mu), 0.0});
    spec.set("alpha", "pi_alpha", Coeff{-1.0, 0.0});
    spec.set("alpha_star", "pi_alpha_star", Coeff{-1.0, 0.0});
    spec.set("beta", "pi_beta", Coeff{-1.0, 0.0});
    spec.set("beta_star", "pi_beta_star", Coeff{-1.0, 0.0});
    return spec;
}

// The eight second-class constraints pairing each coordinate with its
// momentum, pi_q + (i/2) q' with q' the conjugate partner of q:
//   chi^mu      = pi_xi^mu   + (i/2) xi^mu
//   chi_alpha   = pi_alpha   + (i/2) alpha*   (and conjugates, same for beta)
inline std::vector<Element> atom_constraints(const GeneratorTable& t) {
    const Coeff ihalf{0.0, 0.5};
    std::vector<Element> chi;
    for (int mu = 0; mu < 4; ++mu)
        chi.push_back(Element::generator(t, "pi_xi" + std::to_string(mu)) +
                      Element::generator(t, "xi" + std::to_string(mu)) * ihalf);
    chi.push_back(Element::generator(t, "pi_alpha") + Element::generator(t, "alpha_star") * ihalf);
    chi.push_back(Element::generator(t, "pi_alpha_star") + Element::generator(t, "alpha") * ihalf);
    chi.push_back(Element::generator(t, "pi_beta") + Element::generator(t, "beta_star") * ihalf);
    chi.push_back(Element::generator(t, "pi_beta_star") + Element::generator(t, "beta") * ihalf);
    return chi;
}

// Transversality constraint P_mu xi^mu at a fixed numeric four-momentum
// (contravariant components).
inline Element transversality_constraint(const GeneratorTable& t, const std::array<double, 4>& p_upper) {
    Element phi = Element::zero(t);
    for (int mu = 0; mu < 4; ++mu)
        phi += Element::generator(t, "xi" + std::to_string(mu)) * Coeff{eta(mu, mu) * p_upper[static_cast<std::size_t>(mu)], 0.0};
    return phi;
}

inline std::string Element::str() const {
    // degree-major, then mask-ascending
    std::vector<std::pair<std::uint64_t, Coeff>> items(terms_.begin(), terms_.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
        const int dx = std::popcount(x.first), dy = std::popcount(y.first);
        return dx != dy ? dx < dy : x.first < y.first;
    });
    if (items.empty()) return "0";
    std::string out;
    char buf[80];
    for (const auto& [mask, c] : items) {
        std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", c.real(), c.imag());
        if (!out.empty()) out += " + ";
        out += buf;
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            out += "*";
            out += table_->at(std::countr_zero(m)).name;
        }
    }
    return out;
}

}  // namespace relatom::grassmann
