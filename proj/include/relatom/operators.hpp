#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "relatom/metric.hpp"

// Quantum operator layer: dense complex matrices tagged with a tensor-leg
// layout, the Fermi-oscillator representation of the level variables, the
// physical two-level projection, Pauli/dipole operators, and the truncated
// Fock ladder.
//
// Basis conventions.  Each two-state leg orders its basis (plus, minus); the
// level space is alpha-leg (x) beta-leg with row-major composite indexing.
// The lowering actions are fixed by the state structure of the level sector:
//   a maps alpha(-) to alpha(+) and kills alpha(+),
//   b maps beta(+) to beta(-) and kills beta(-),
// which makes the occupied states alpha(-) and beta(+), and the kernel of
// b†b - a†a exactly span{ Phi(+) = alpha(-) (x) beta(+),
//                         Phi(-) = alpha(+) (x) beta(-) }.

namespace relatom::ops {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class Op {
public:
    Op() = default;
    Op(Matrix m, std::vector<int> legs) : m_(std::move(m)), legs_(std::move(legs)) {
        long dim = 1;
        for (int d : legs_) {
            if (d < 1) throw std::invalid_argument("leg dimension must be >= 1");
            dim *= d;
        }
        if (m_.rows() != m_.cols() || m_.rows() != dim)
            throw std::invalid_argument("matrix dimension does not match leg layout");
    }

    static Op identity(std::vector<int> legs) {
        long dim = 1;
        for (int d : legs) dim *= d;
        return Op(Matrix::Identity(dim, dim), std::move(legs));
    }

    const Matrix& mat() const { return m_; }
    const std::vector<int>& legs() const { return legs_; }
    long dim() const { return m_.rows(); }

    Op adjoint() const { return Op(m_.adjoint(), legs_); }

    double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

    Op& operator+=(const Op& o) {
        require_same_layout(o);
        m_ += o.m_;
        return *this;
    }
    Op& operator-=(const Op& o) {
        require_same_layout(o);
        m_ -= o.m_;
        return *this;
    }
    Op& operator*=(Complex s) {
        m_ *= s;
        return *this;
    }

    friend Op operator+(Op a, const Op& b) { return a += b; }
    friend Op operator-(Op a, const Op& b) { return a -= b; }
    friend Op operator*(Complex s, Op a) { return a *= s; }
    friend Op operator*(Op a, Complex s) { return a *= s; }
    friend Op operator*(double s, Op a) { return a *= Complex{s, 0.0}; }
    friend Op operator*(Op a, double s) { return a *= Complex{s, 0.0}; }
    friend Op operator-(Op a) { return a *= Complex{-1.0, 0.0}; }

    friend Op operator*(const Op& a, const Op& b) {
        a.require_same_layout(b);
        return Op(a.m_ * b.m_, a.legs_);
    }

    // Kronecker product, concatenating leg layouts.
    friend Op kron(const Op& a, const Op& b) {
        Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
        for (long i = 0; i < a.dim(); ++i)
            for (long j = 0; j < a.dim(); ++j) out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a.m_(i, j) * b.m_;
        std::vector<int> legs = a.legs_;
        legs.insert(legs.end(), b.legs_.begin(), b.legs_.end());
        return Op(std::move(out), std::move(legs));
    }

private:
    void require_same_layout(const Op& o) const {
        if (legs_ != o.legs_) throw std::invalid_argument("operator leg layouts differ");
    }

    Matrix m_;
    std::vector<int> legs_;
};

inline Op commutator(const Op& a, const Op& b) { return a * b - b * a; }
inline Op anticommutator(const Op& a, const Op& b) { return a * b + b * a; }

// Embed op into a larger layout with identities on the other legs; the op's
// legs must match a contiguous run of the target starting at first_leg.
inline Op tensor_lift(const Op& op, const std::vector<int>& target, int first_leg) {
    const auto& src = op.legs();
    if (first_leg < 0 || first_leg + static_cast<int>(src.size()) > static_cast<int>(target.size()))
        throw std::invalid_argument("lift target does not contain the operator legs");
    for (std::size_t i = 0; i < src.size(); ++i)
        if (target[static_cast<std::size_t>(first_leg) + i] != src[i])
            throw std::invalid_argument("lift leg dimensions do not match the target layout");

    std::vector<int> left(target.begin(), target.begin() + first_leg);
    std::vector<int> right(target.begin() + first_leg + static_cast<long>(src.size()), target.end());
    Op out = op;
    if (!left.empty()) out = kron(Op::identity(left), out);
    if (!right.empty()) out = kron(out, Op::identity(right));
    return out;
}

// --- Pauli / dipole ----------------------------------------------------------

// r = 0 identity, r = 1,2,3 Pauli matrices; basis ordered (plus, minus).
inline Op pauli(int r) {
    Matrix m(2, 2);
    switch (r) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex{0, -1}, Complex{0, 1}, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli index must be 0..3");
    }
    return Op(std::move(m), {2});
}

inline Op sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return Op(std::move(m), {2});
}

inline Op sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return Op(std::move(m), {2});
}

// Dipole operator built from the quantized transverse variables:
//   d^r = -i d (hbar/2) eps^{ruv} sigma^u sigma^v  (= hbar d sigma^r).
inline Op dipole_operator(int r, double d, double hbar) {
    if (r < 1 || r > 3) throw std::invalid_argument("dipole component must be 1..3");
    Op out(Matrix::Zero(2, 2), {2});
    for (int u = 1; u <= 3; ++u)
        for (int v = 1; v <= 3; ++v) {
            const int c = levi_civita(r - 1, u - 1, v - 1);
            if (c != 0) out += Complex{0.0, -d * hbar * 0.5 * c} * (pauli(u) * pauli(v));
        }
    return out;
}

// --- Fermi oscillators on the 4-dim level space -------------------------------

struct FermiOscillators {
    Op a, a_dag, b, b_dag;  // layout [2, 2]: alpha leg then beta leg
};

inline FermiOscillators fermi_oscillators(double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    const double s = std::sqrt(hbar);
    Matrix to_plus = Matrix::Zero(2, 2);   // maps (-) to (+)
    to_plus(0, 1) = 1.0;
    Matrix to_minus = Matrix::Zero(2, 2);  // maps (+) to (-)
    to_minus(1, 0) = 1.0;

    const Op id2 = Op::identity({2});
    FermiOscillators f;
    f.a = kron(Op(s * to_plus, {2}), id2);
    f.b = kron(id2, Op(s * to_minus, {2}));
    f.a_dag = f.a.adjoint();
    f.b_dag = f.b.adjoint();
    return f;
}

struct LevelNumbers {
    Op n_a, n_b, constraint;  // constraint = n_b - n_a
};

inline LevelNumbers level_numbers(double hbar) {
    const FermiOscillators f = fermi_oscillators(hbar);
    LevelNumbers n;
    n.n_a = f.a_dag * f.a;
    n.n_b = f.b_dag * f.b;
    n.constraint = n.n_b - n.n_a;
    return n;
}

// Physical subspace: kernel of b†b - a†a, ordered (Phi(+), Phi(-)).
// Composite index = 2*alpha + beta with (plus, minus) = (0, 1) per leg:
//   Phi(+) = alpha(-) (x) beta(+) -> index 2,
//   Phi(-) = alpha(+) (x) beta(-) -> index 1.
struct PhysicalLevelSector {
    Eigen::Matrix<Complex, 2, 4> projector;  // isometry rows <Phi(+)|, <Phi(-)|
    Op c, c_dag;                             // layout [2]
};

inline PhysicalLevelSector physical_level_sector(double hbar) {
    const FermiOscillators f = fermi_oscillators(hbar);
    PhysicalLevelSector p;
    p.projector.setZero();
    p.projector(0, 2) = 1.0;
    p.projector(1, 1) = 1.0;
    // c = P (b a) P† / hbar; the b†a ordering of the raw level operators shifts
    // b†b - a†a by +2 hbar and therefore vanishes identically on the kernel.
    const Matrix ba = (f.b * f.a).mat();
    p.c = Op(p.projector * ba * p.projector.adjoint() / hbar, {2});
    p.c_dag = p.c.adjoint();
    return p;
}

// --- truncated Fock space ------------------------------------------------------

struct FockOperators {
    Op a, a_dag, n;  // layout [N+1]
    int cutoff = 0;
};

inline FockOperators fock_operators(int n_max) {
    if (n_max < 1) throw std::invalid_argument("Fock cutoff must be >= 1");
    const int dim = n_max + 1;
    Matrix a = Matrix::Zero(dim, dim);
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 1; k <= n_max; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    for (int k = 0; k <= n_max; ++k) n(k, k) = static_cast<double>(k);
    FockOperators f;
    f.a = Op(std::move(a), {dim});
    f.a_dag = f.a.adjoint();
    f.n = Op(std::move(n), {dim});
    f.cutoff = n_max;
    return f;
}

// [a, a†] - 1 on the truncated space: a single defect entry of value -(N+1)
// at (N, N), recorded as the truncation witness.
inline Matrix truncation_witness(const FockOperators& f) {
    return commutator(f.a, f.a_dag).mat() - Matrix::Identity(f.a.dim(), f.a.dim());
}

// parity (-1)^n on the Fock leg
inline Op fock_parity(int n_max) {
    const int dim = n_max + 1;
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k <= n_max; ++k) m(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return Op(std::move(m), {dim});
}

}  // namespace relatom::ops
