#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lorenzknot {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Parameters (rho, sigma, beta) of the Lorenz vector field.
struct Params {
    double rho{28.0};
    double sigma{10.0};
    double beta{8.0 / 3.0};
};

inline Params classical_params() { return Params{28.0, 10.0, 8.0 / 3.0}; }

/// Thrown when parameters violate a documented domain restriction
/// (e.g. rho <= 1 where the three equilibria are required).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an eigenvalue signature does not match the expected saddle type.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solver exhausts its iteration budget.
struct NoConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a projection direction fails the genericity checks.
struct DegenerateProjectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the invariant curve cannot be assembled because a manifold
/// branch did not terminate with the required tag.
struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by the bracket state sum when the diagram exceeds the crossing cap.
struct TooManyCrossingsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate(const Params& p) {
    if (!(p.rho > 0.0) || !(p.sigma > 0.0) || !(p.beta > 0.0))
        throw DomainError("params: rho, sigma, beta must all be positive");
}

/// The order-two symmetry (x,y,z) -> (-x,-y,z) of the Lorenz equations.
inline Vec3 mirror(const Vec3& s) { return Vec3(-s.x(), -s.y(), s.z()); }

}  // namespace lorenzknot
