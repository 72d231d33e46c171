#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Forward-mode dual numbers carrying N derivative slots.  Arithmetic on the
// value propagates exact first derivatives, so gradients of smooth closed-form
// expressions are obtained to machine precision without finite differencing.

namespace relatom {

template <int N>
struct Dual {
    double v{0.0};
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) { d.fill(0.0); }  // NOLINT: implicit by design
    static Dual seeded(double value, int slot) {
        Dual x(value);
        x.d[slot] = 1.0;
        return x;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.v;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
        v *= inv;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
    friend Dual operator-(Dual a) {
        a.v = -a.v;
        for (int i = 0; i < N; ++i) a.d[i] = -a.d[i];
        return a;
    }
};

template <int N>
Dual<N> sqrt(const Dual<N>& x) {
    Dual<N> r;
    r.v = std::sqrt(x.v);
    const double half_inv = 0.5 / r.v;
    for (int i = 0; i < N; ++i) r.d[i] = x.d[i] * half_inv;
    return r;
}

// Plain doubles pass through std::sqrt so the same templated expression code
// can be evaluated with or without derivative tracking.
using std::sqrt;

}  // namespace relatom
