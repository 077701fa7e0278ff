#pragma once

#include <map>
#include <string>
#include <vector>

#include "lorenzknot/tpoint.hpp"

namespace lorenzknot {

/// Oriented closed polyline in compactified 3-space; the segment from the
/// last point back to the first closes the loop.
struct ClosedCurve {
    std::vector<Vec3> points;
    /// Named vertex indices: origin, p_plus, p_minus, exit_plus, exit_minus.
    std::map<std::string, int> markers;
    /// Index range [first, last] of the synthetic closure points (inclusive),
    /// or {-1,-1} when the curve has no closure arc.
    int closure_first{-1}, closure_last{-1};

    int size() const { return static_cast<int>(points.size()); }
    double diameter() const;
    double length() const;
};

ClosedCurve mirror(const ClosedCurve& c);

struct AssemblyConfig {
    double tol{1e-10};
    double eps_rel{1e-6};
    double delta_conn{1e-4};
    double horizon{50.0};
    double inflation{3.0};
    double max_chord{0.25};
    int max_vertices{20000};
    /// Simplicity threshold as a fraction of the curve diameter.
    double delta_simple_rel{1e-3};
};

/// Arc from E_plus to E_minus outside the trapping sphere: radial pushes to
/// the inflated sphere joined by a great-circle arc. Reports (via the flag)
/// when the inflated endpoints were antipodal and the circle plane had to be
/// disambiguated.
std::vector<Vec3> close_through_infinity(const Vec3& exit_plus, const Vec3& exit_minus,
                                         const TrappingSphere& ts, double inflation,
                                         bool* antipodal_degenerate = nullptr);

/// Builds the closed invariant curve through the three singular points and
/// the far closure arc at the given T-point parameters. Throws AssemblyError
/// when a manifold branch does not terminate with the tag the construction
/// needs (i.e. the parameters do not admit the heteroclinic pair).
ClosedCurve assemble_invariant_curve(const TPoint& tp, const AssemblyConfig& cfg = {});

/// Arc-length resampling to at most max_vertices, preserving marker points
/// exactly.
ClosedCurve resample(const ClosedCurve& c, int max_vertices);

/// Least distance between non-adjacent segments, where pairs closer than
/// arc_window along the curve count as adjacent.
double min_strand_separation(const ClosedCurve& c, double arc_window);

/// Checks the spec'd simplicity margin; throws AssemblyError on violation.
void require_simple(const ClosedCurve& c, double delta_simple);

}  // namespace lorenzknot
