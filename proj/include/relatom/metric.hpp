#pragma once

#include <atomic>

// Minkowski metric with a session-wide overall sign.  sign = +1 selects
// eta = diag(+1,-1,-1,-1); sign = -1 flips the overall sign.  The setting is
// global because mixing conventions inside one computation is never valid.

namespace relatom {

namespace detail {
inline std::atomic<int>& metric_sign_storage() {
    static std::atomic<int> s{+1};
    return s;
}
}  // namespace detail

inline void set_metric_sign(int s) { detail::metric_sign_storage() = (s >= 0 ? +1 : -1); }
inline int metric_sign() { return detail::metric_sign_storage().load(); }

// Diagonal entries; eta^{mu nu} and eta_{mu nu} coincide numerically.
inline double eta(int mu, int nu) {
    if (mu != nu) return 0.0;
    double base = (mu == 0) ? 1.0 : -1.0;
    return metric_sign() * base;
}

// Fixed mostly-minus shape diag(+1,-1,-1,-1), independent of the session
// sign.  Boost/tetrad algebra and the Poincare structure table are written in
// this shape; the session knob only scales the fundamental bracket table.
constexpr double eta_pm(int mu, int nu) {
    if (mu != nu) return 0.0;
    return (mu == 0) ? 1.0 : -1.0;
}

// Three-index Levi-Civita symbol, eps(0,1,2) = +1.
inline int levi_civita(int r, int s, int u) {
    if (r == s || s == u || r == u) return 0;
    // even permutations of (0,1,2)
    if ((r + 1) % 3 == s) return +1;
    return -1;
}

}  // namespace relatom
