#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lorenzknot/types.hpp"

namespace lorenzknot {

/// Right-hand side of the Lorenz equations at state s.
inline Vec3 vector_field(const Params& p, const Vec3& s) {
    return Vec3(p.sigma * (s.y() - s.x()),
                p.rho * s.x() - s.y() - s.x() * s.z(),
                s.x() * s.y() - p.beta * s.z());
}

/// Jacobian of the Lorenz vector field at state s.
inline Mat3 jacobian(const Params& p, const Vec3& s) {
    Mat3 j;
    j << -p.sigma, p.sigma, 0.0,
         p.rho - s.z(), -1.0, -s.x(),
         s.y(), s.x(), -p.beta;
    return j;
}

/// Sphere through which the flow points strictly inward; bounds the
/// recurrent dynamics so that anything crossing it outward (in backward
/// time) is on its way to infinity.
struct TrappingSphere {
    Vec3 center{Vec3::Zero()};
    double radius{0.0};
};

/// Samples a deterministic lattice on the sphere and reports the largest
/// outward component of the field (negative everywhere means trapping).
double max_outward_flux(const Params& p, const TrappingSphere& ts, int samples = 2048);

/// Default sphere centered at (0,0,rho+sigma); the radius starts at
/// 2(rho+sigma) and doubles until the sampled inward-flow test passes.
TrappingSphere make_trapping_sphere(const Params& p);

enum class Direction { forward, backward };

enum class Termination { reached_horizon, hit_event, step_failure };

struct TimedState {
    double t;
    Vec3 state;
};

/// Scalar event function; a root of g along the trajectory is an event.
struct EventSpec {
    std::function<double(const Vec3&)> g;
    int id{0};
    bool terminal{false};
    double scale{1.0};  // magnitude of g away from the surface, for grazing detection
};

/// One localized crossing (or near-tangency) of an event surface.
struct EventRecord {
    double t;
    Vec3 state;
    int event_id{0};
    /// +1 if g increases along the flow in *forward* time, -1 if it decreases.
    /// Normalized so forward and backward integrations of the same orbit agree.
    int sign_forward{0};
    bool ambiguous{false};  // tangential grazing: |g| dipped to ~0 without a sign change
};

struct Trajectory {
    std::vector<TimedState> samples;
    Direction direction{Direction::forward};
    Termination termination{Termination::reached_horizon};
    std::vector<EventRecord> events;
    int terminal_event_id{-1};

    const Vec3& front() const { return samples.front().state; }
    const Vec3& back() const { return samples.back().state; }
};

/// Event surface for exiting a trapping sphere: g = |s-c|^2 - r^2.
EventSpec sphere_exit_event(const TrappingSphere& ts, int id = 0, bool terminal = true);

/// Event surface for crossing the plane normal.s = offset.
EventSpec plane_event(const Vec3& normal, double offset, int id = 0, bool terminal = false);

struct IntegrateOptions {
    /// When finite, accepted steps are subdivided on the dense output so
    /// that consecutive samples are at most this far apart in state space.
    /// Step control is unaffected; only the emitted polyline densifies.
    double max_chord{std::numeric_limits<double>::infinity()};
};

/// Integrates the Lorenz field from s0 over the signed horizon with the
/// Dormand-Prince 5(4) pair, PI step control and fixed built-in
/// coefficients. Event roots are localized by bisection on the dense
/// output to time accuracy 1e-10. Fully deterministic for fixed inputs.
Trajectory integrate(const Params& p, const Vec3& s0, double horizon, double tol,
                     const std::vector<EventSpec>& events = {},
                     const IntegrateOptions& opts = {});

}  // namespace lorenzknot
