#include "lorenzknot/curve.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lorenzknot {

ClosedCurve mirror(const ClosedCurve& c) {
    ClosedCurve m = c;
    for (auto& q : m.points) q = mirror(Vec3(q));
    return m;
}

std::vector<Vec3> close_through_infinity(const Vec3& exit_plus, const Vec3& exit_minus,
                                         const TrappingSphere& ts, double inflation,
                                         bool* antipodal_degenerate) {
    if (!(inflation > 1.0)) throw DomainError("closure: inflation must exceed 1");
    const auto on_sphere = [&](const Vec3& e) {
        return std::abs((e - ts.center).norm() - ts.radius) < 1e-6 * ts.radius;
    };
    if (!on_sphere(exit_plus) || !on_sphere(exit_minus))
        throw DomainError("closure: exit points must lie on the trapping sphere");
    if (antipodal_degenerate) *antipodal_degenerate = false;

    const double big_r = inflation * ts.radius;
    const Vec3 u0 = (exit_plus - ts.center).normalized();
    const Vec3 u1 = (exit_minus - ts.center).normalized();
    Vec3 axis = u0.cross(u1);
    double angle = std::atan2(axis.norm(), u0.dot(u1));
    if (axis.norm() < 1e-9) {
        if (u0.dot(u1) > 0.0) throw DomainError("closure: exit points coincide");
        // Antipodal: the great circle is ambiguous; disambiguate through the
        // coordinate axis least aligned with the exit direction.
        if (antipodal_degenerate) *antipodal_degenerate = true;
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(u0[i]) < std::abs(u0[k])) k = i;
        Vec3 h = Vec3::Zero();
        h[k] = 1.0;
        axis = u0.cross(h);
        angle = M_PI;
    }
    axis.normalize();
    const Vec3 side = axis.cross(u0);

    std::vector<Vec3> arc;
    const double pitch = 2.0;
    const auto radial = [&](const Vec3& from, const Vec3& to) {
        const int k = std::max(1, static_cast<int>(std::ceil((to - from).norm() / pitch)));
        for (int i = 0; i < k; ++i) arc.push_back(from + (to - from) * (static_cast<double>(i) / k));
    };
    const Vec3 inflated0 = ts.center + big_r * u0;
    const Vec3 inflated1 = ts.center + big_r * u1;
    radial(exit_plus, inflated0);
    const int steps = std::max(64, static_cast<int>(std::ceil(angle * big_r / pitch)));
    for (int i = 0; i < steps; ++i) {
        const double a = angle * i / steps;
        arc.push_back(ts.center + big_r * (std::cos(a) * u0 + std::sin(a) * side));
    }
    radial(inflated1, exit_minus);
    arc.push_back(exit_minus);
    return arc;
}

namespace {

struct OutwardBranch {
    ManifoldBranch branch;
    Vec3 exit{Vec3::Zero()};
};

// Of the two stable halves, the outward one exits the sphere soonest
// backward in time.
OutwardBranch outward_stable_half(const Params& p, const Equilibrium& wing,
                                  const BranchConfig& bc, const TrappingSphere& ts) {
    ManifoldBranch cand[2];
    double t_exit[2] = {-1.0, -1.0};
    for (int i = 0; i < 2; ++i) {
        cand[i] = manifold_branch(p, wing, i == 0 ? +1 : -1, bc, ts);
        if (cand[i].termination == BranchTermination::hit_sphere)
            t_exit[i] = std::abs(cand[i].polyline.samples.back().t);
    }
    int pick = -1;
    if (t_exit[0] >= 0.0 && t_exit[1] >= 0.0) pick = t_exit[0] <= t_exit[1] ? 0 : 1;
    else if (t_exit[0] >= 0.0) pick = 0;
    else if (t_exit[1] >= 0.0) pick = 1;
    if (pick < 0)
        throw AssemblyError(std::string("assembly: no stable half of ") +
                            to_string(wing.kind) + " reaches the trapping sphere");
    OutwardBranch out;
    out.branch = cand[pick];
    out.exit = out.branch.polyline.samples.back().state;
    return out;
}

}  // namespace

ClosedCurve assemble_invariant_curve(const TPoint& tp, const AssemblyConfig& cfg) {
    const Params& p = tp.params;
    validate(p);
    const TrappingSphere ts = make_trapping_sphere(p);
    const auto origin = equilibrium(p, EquilibriumKind::origin);
    const auto eqs = equilibria(p);

    BranchConfig bc;
    bc.eps_rel = cfg.eps_rel;
    bc.horizon = cfg.horizon;
    bc.tol = cfg.tol;
    bc.delta_conn = cfg.delta_conn;
    bc.max_chord = cfg.max_chord;

    // The two unstable halves of the origin must each run into a wing ball.
    const ManifoldBranch u_plus = manifold_branch(p, origin, +1, bc, ts);
    const ManifoldBranch u_minus = manifold_branch(p, origin, -1, bc, ts);
    for (const ManifoldBranch* u : {&u_plus, &u_minus}) {
        if (u->termination != BranchTermination::converged_to_equilibrium ||
            u->converged_to == EquilibriumKind::origin)
            throw AssemblyError(
                "assembly: an unstable branch of the origin did not converge to a wing "
                "equilibrium (no heteroclinic connection at these parameters)");
    }
    if (u_plus.converged_to == u_minus.converged_to)
        throw AssemblyError("assembly: both unstable branches hit the same wing");

    const Equilibrium& wing_a = eqs[static_cast<size_t>(u_plus.converged_to)];
    const Equilibrium& wing_b = eqs[static_cast<size_t>(u_minus.converged_to)];
    const OutwardBranch out_a = outward_stable_half(p, wing_a, bc, ts);
    const OutwardBranch out_b = outward_stable_half(p, wing_b, bc, ts);

    bool antipodal = false;
    const std::vector<Vec3> closure =
        close_through_infinity(out_a.exit, out_b.exit, ts, cfg.inflation, &antipodal);

    ClosedCurve curve;
    const auto push_traj = [&curve](const Trajectory& tr, bool reversed) {
        if (!reversed)
            for (const auto& s : tr.samples) curve.points.push_back(s.state);
        else
            for (auto it = tr.samples.rbegin(); it != tr.samples.rend(); ++it)
                curve.points.push_back(it->state);
    };

    curve.markers["origin"] = 0;
    curve.points.push_back(origin.location);
    push_traj(u_plus.polyline, false);
    curve.markers[to_string(wing_a.kind)] = curve.size();
    curve.points.push_back(wing_a.location);
    push_traj(out_a.branch.polyline, false);
    curve.markers[std::string("exit_") +
                  (wing_a.kind == EquilibriumKind::p_plus ? "plus" : "minus")] =
        curve.size() - 1;
    curve.closure_first = curve.size();
    for (size_t i = 1; i + 1 < closure.size(); ++i) curve.points.push_back(closure[i]);
    curve.closure_last = curve.size() - 1;
    curve.markers[std::string("exit_") +
                  (wing_b.kind == EquilibriumKind::p_plus ? "plus" : "minus")] = curve.size();
    push_traj(out_b.branch.polyline, true);
    curve.markers[to_string(wing_b.kind)] = curve.size();
    curve.points.push_back(wing_b.location);
    push_traj(u_minus.polyline, true);

    ClosedCurve slim = resample(curve, cfg.max_vertices);
    require_simple(slim, cfg.delta_simple_rel * slim.diameter());
    return slim;
}

ClosedCurve resample(const ClosedCurve& c, int max_vertices) {
    const int m = c.size();
    if (m <= max_vertices) return c;
    std::vector<int> anchors{0};
    for (const auto& [name, idx] : c.markers) anchors.push_back(idx);
    if (c.closure_first >= 0) {
        anchors.push_back(c.closure_first);
        anchors.push_back(c.closure_last);
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    const double total = c.length();
    ClosedCurve out;
    std::vector<int> new_index(static_cast<size_t>(m), -1);
    const int sections = static_cast<int>(anchors.size());
    for (int s = 0; s < sections; ++s) {
        const int i0 = anchors[static_cast<size_t>(s)];
        const int i1 = s + 1 < sections ? anchors[static_cast<size_t>(s + 1)] : m;
        double sec_len = 0.0;
        for (int i = i0; i < i1; ++i)
            sec_len += (c.points[static_cast<size_t>((i + 1) % m)] -
                        c.points[static_cast<size_t>(i)])
                           .norm();
        const int budget =
            std::max(2, static_cast<int>(std::floor(max_vertices * sec_len / total)));
        new_index[static_cast<size_t>(i0)] = out.size();
        out.points.push_back(c.points[static_cast<size_t>(i0)]);
        const double step = sec_len / budget;
        double carried = 0.0;
        for (int i = i0; i < i1; ++i) {
            const Vec3& a = c.points[static_cast<size_t>(i)];
            const Vec3& b = c.points[static_cast<size_t>((i + 1) % m)];
            const double seg = (b - a).norm();
            double pos = step - carried;
            while (pos < seg - 1e-12) {
                out.points.push_back(a + (b - a) * (pos / seg));
                pos += step;
            }
            carried = seg - (pos - step);
        }
        if (s + 1 < sections) {
            const Vec3& next_anchor = c.points[static_cast<size_t>(i1)];
            if ((out.points.back() - next_anchor).norm() < 1e-9) out.points.pop_back();
        }
    }
    for (const auto& [name, idx] : c.markers)
        out.markers[name] = new_index[static_cast<size_t>(idx)];
    out.closure_first =
        c.closure_first >= 0 ? new_index[static_cast<size_t>(c.closure_first)] : -1;
    out.closure_last = c.closure_last >= 0 ? new_index[static_cast<size_t>(c.closure_last)] : -1;
    return out;
}

double min_strand_separation(const ClosedCurve& c, double arc_window) {
    const int m = c.size();
    std::vector<double> arc(static_cast<size_t>(m) + 1, 0.0);
    double max_seg = 0.0;
    for (int i = 0; i < m; ++i) {
        const double seg =
            (c.points[static_cast<size_t>((i + 1) % m)] - c.points[static_cast<size_t>(i)])
                .norm();
        arc[static_cast<size_t>(i) + 1] = arc[static_cast<size_t>(i)] + seg;
        max_seg = std::max(max_seg, seg);
    }
    const double total = arc[static_cast<size_t>(m)];

    // Spatial hash on segment midpoints; cells wide enough that any pair
    // within a cell width is found in the 27 neighboring cells.
    const double cell = max_seg + arc_window / 4.0 + 1e-12;
    std::unordered_map<long long, std::vector<int>> grid;
    const auto key3 = [&](long long ix, long long iy, long long iz) {
        return (ix * 73856093LL) ^ (iy * 19349663LL) ^ (iz * 83492791LL);
    };
    const auto cell_of = [&](const Vec3& p, long long& ix, long long& iy, long long& iz) {
        ix = static_cast<long long>(std::floor(p.x() / cell));
        iy = static_cast<long long>(std::floor(p.y() / cell));
        iz = static_cast<long long>(std::floor(p.z() / cell));
    };
    for (int i = 0; i < m; ++i) {
        const Vec3 mid = 0.5 * (c.points[static_cast<size_t>(i)] +
                                c.points[static_cast<size_t>((i + 1) % m)]);
        long long ix, iy, iz;
        cell_of(mid, ix, iy, iz);
        grid[key3(ix, iy, iz)].push_back(i);
    }

    const auto seg_dist = [&](int i, int j) {
        const Vec3& p1 = c.points[static_cast<size_t>(i)];
        const Vec3 d1 = c.points[static_cast<size_t>((i + 1) % m)] - p1;
        const Vec3& p2 = c.points[static_cast<size_t>(j)];
        const Vec3 d2 = c.points[static_cast<size_t>((j + 1) % m)] - p2;
        const Vec3 r = p1 - p2;
        const double a = d1.squaredNorm(), e = d2.squaredNorm();
        const double b = d1.dot(d2), cdot = d1.dot(r), f = d2.dot(r);
        const double den = a * e - b * b;
        double s = den > 1e-300 ? std::clamp((b * f - cdot * e) / den, 0.0, 1.0) : 0.0;
        double t = e > 1e-300 ? std::clamp((b * s + f) / e, 0.0, 1.0) : 0.0;
        s = a > 1e-300 ? std::clamp((b * t - cdot) / a, 0.0, 1.0) : 0.0;
        return (p1 + s * d1 - (p2 + t * d2)).norm();
    };

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const Vec3 mid = 0.5 * (c.points[static_cast<size_t>(i)] +
                                c.points[static_cast<size_t>((i + 1) % m)]);
        long long ix, iy, iz;
        cell_of(mid, ix, iy, iz);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    const auto it = grid.find(key3(ix + dx, iy + dy, iz + dz));
                    if (it == grid.end()) continue;
                    for (const int j : it->second) {
                        if (j <= i) continue;
                        if (j == i + 1 || (i == 0 && j == m - 1)) continue;  // share a vertex
                        const double a1 = 0.5 * (arc[static_cast<size_t>(i)] +
                                                 arc[static_cast<size_t>(i) + 1]);
                        const double a2 = 0.5 * (arc[static_cast<size_t>(j)] +
                                                 arc[static_cast<size_t>(j) + 1]);
                        const double gap = std::abs(a1 - a2);
                        if (std::min(gap, total - gap) < arc_window) continue;
                        best = std::min(best, seg_dist(i, j));
                    }
                }
    }
    return best;
}

void require_simple(const ClosedCurve& c, double delta_simple) {
    const double sep = min_strand_separation(c, 4.0 * delta_simple);
    if (sep <= delta_simple)
        throw AssemblyError("assembly: strand separation " + std::to_string(sep) +
                            " is under the simplicity threshold " +
                            std::to_string(delta_simple));
}

}  // namespace lorenzknot
