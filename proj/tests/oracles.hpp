#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <cmath>
#include <random>

#include "lorenzknot/ode.hpp"

namespace oracles {

using lorenzknot::Params;
using lorenzknot::Vec3;

/// Fixed-step classical RK4 reference integrator (independent of the
/// adaptive embedded pair under test).
inline Vec3 rk4_reference(const Params& p, Vec3 y, double T, double h0) {
    const int n = static_cast<int>(std::ceil(std::abs(T) / h0));
    const double h = T / n;
    for (int i = 0; i < n; ++i) {
        const Vec3 k1 = lorenzknot::vector_field(p, y);
        const Vec3 k2 = lorenzknot::vector_field(p, y + 0.5 * h * k1);
        const Vec3 k3 = lorenzknot::vector_field(p, y + 0.5 * h * k2);
        const Vec3 k4 = lorenzknot::vector_field(p, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

/// Central finite differences of the vector field.
inline lorenzknot::Mat3 fd_jacobian(const Params& p, const Vec3& s, double h = 1e-6) {
    lorenzknot::Mat3 j;
    for (int c = 0; c < 3; ++c) {
        Vec3 hi = s, lo = s;
        const double step = h * (1.0 + std::abs(s[c]));
        hi[c] += step;
        lo[c] -= step;
        j.col(c) = (lorenzknot::vector_field(p, hi) - lorenzknot::vector_field(p, lo)) /
                   (2.0 * step);
    }
    return j;
}

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline Vec3 random_state(std::mt19937_64& g, double span = 30.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return Vec3(u(g), u(g), u(g));
}

}  // namespace oracles
