#pragma once

#include <random>

#include "lorenzknot/curve.hpp"
#include "lorenzknot/diagram.hpp"

namespace lorenzknot {

struct ProjectionConfig {
    /// Relative genericity margin for tangent crossings, vertex hits,
    /// triple points and depth ties.
    double genericity_eps{1e-9};
};

/// Orthogonal projection of the curve along `direction`: finds all planar
/// segment crossings, decides over/under by depth (the viewer sits at
/// +infinity along the direction), and assembles the diagram. Throws
/// DegenerateProjectionError when a genericity check fails.
KnotDiagram project(const ClosedCurve& curve, const Vec3& direction,
                    const ProjectionConfig& cfg = {});

/// Deterministic unit directions from a seeded generator (Box-Muller over
/// mt19937_64, identical across platforms).
Vec3 random_direction(std::mt19937_64& rng);

/// project() with up to max_retries fresh directions from the seeded
/// generator when genericity fails; returns the first success and reports
/// the direction used. Throws DegenerateProjectionError when exhausted.
KnotDiagram project_generic(const ClosedCurve& curve, uint64_t seed, int max_retries,
                            Vec3* direction_used = nullptr);

/// SVG rendering of the projected diagram with over/under gaps. When
/// `timestamp` is nonempty it is embedded as a comment (suppressed by the
/// CLI's --deterministic flag).
std::string render_svg(const ClosedCurve& curve, const Vec3& direction,
                       const std::string& timestamp = "");

}  // namespace lorenzknot
