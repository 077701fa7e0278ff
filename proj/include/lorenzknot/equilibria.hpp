#pragma once

#include <array>
#include <complex>

#include "lorenzknot/ode.hpp"

namespace lorenzknot {

enum class EquilibriumKind { origin, p_plus, p_minus };

const char* to_string(EquilibriumKind k);

/// A singular point with the eigen-decomposition of its Jacobian.
/// Real eigenvalues carry their unit eigenvector; a complex-conjugate pair
/// carries the real and imaginary parts of its eigenvector (the spanners
/// of the invariant plane), stored once per member of the pair.
struct Equilibrium {
    Vec3 location{Vec3::Zero()};
    std::array<std::complex<double>, 3> eigenvalues{};
    std::array<Vec3, 3> eigenvectors{};
    EquilibriumKind kind{EquilibriumKind::origin};
};

/// The three singular points for rho > 1: the origin and
/// p± = (±sqrt(beta(rho-1)), ±sqrt(beta(rho-1)), rho-1).
/// Throws DomainError when rho <= 1.
std::array<Equilibrium, 3> equilibria(const Params& p);

Equilibrium equilibrium(const Params& p, EquilibriumKind kind);

/// The unit direction of the one-dimensional invariant manifold: the real
/// eigenvector of the unique unstable eigenvalue of the origin, or of the
/// unique stable eigenvalue of p±. Sign convention: positive x-component,
/// ties broken by positive y then z. Throws StructureError when the
/// eigenvalue signature does not match the expected saddle type.
Vec3 one_dim_direction(const Params& p, const Equilibrium& eq);

bool is_unstable_kind(EquilibriumKind k);  // origin seeds unstable branches

enum class BranchTermination { hit_sphere, reached_horizon, converged_to_equilibrium,
                               step_failure };

struct ManifoldBranch {
    EquilibriumKind source{EquilibriumKind::origin};
    bool stable{false};  // stable branches integrate backward, unstable forward
    int sign{+1};
    Trajectory polyline;
    BranchTermination termination{BranchTermination::reached_horizon};
    EquilibriumKind converged_to{EquilibriumKind::origin};  // valid when converged
    double final_distance{0.0};  // distance to converged_to at termination
};

struct BranchConfig {
    double eps_rel{1e-6};       // seed offset, scaled by 1+|location|
    double horizon{50.0};
    double tol{1e-10};
    double delta_conn{1e-4};    // connection-detection radius around other equilibria
    double max_chord{std::numeric_limits<double>::infinity()};  // polyline densification
};

/// Traces one half of the 1-D invariant manifold of eq: seeds at
/// location + sign*eps*direction and integrates (forward for the origin's
/// unstable branches, backward for p±'s stable branches) until the
/// trapping-sphere exit, the horizon, or entry into a delta_conn-ball
/// around another equilibrium.
ManifoldBranch manifold_branch(const Params& p, const Equilibrium& eq, int sign,
                               const BranchConfig& cfg, const TrappingSphere& ts);

}  // namespace lorenzknot
