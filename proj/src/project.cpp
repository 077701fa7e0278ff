#include "lorenzknot/project.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lorenzknot {

namespace {

struct Basis {
    Vec3 e1, e2, d;
};

Basis make_basis(const Vec3& direction) {
    const double n = direction.norm();
    if (!(n > 0.0)) throw DegenerateProjectionError("projection: zero direction");
    const Vec3 d = direction / n;
    const Vec3 h = std::abs(d.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    const Vec3 e1 = (h - h.dot(d) * d).normalized();
    const Vec3 e2 = d.cross(e1);
    return {e1, e2, d};
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Crossing2D {
    int seg_a, seg_b;     // seg_a < seg_b
    double s, t;          // params on a and b
    Vec2 point;
    double depth_a, depth_b;
    Vec2 dir_a, dir_b;    // unit 2-D tangents
};

struct Extraction {
    std::vector<Vec2> uv;
    std::vector<double> depth;
    std::vector<Crossing2D> crossings;
    double scale;  // projected bounding-box diagonal
};

Extraction extract(const ClosedCurve& curve, const Vec3& direction,
                   const ProjectionConfig& cfg) {
    const int m = curve.size();
    if (m < 3) throw DegenerateProjectionError("projection: curve too short");
    const Basis b = make_basis(direction);

    Extraction ex;
    ex.uv.resize(static_cast<size_t>(m));
    ex.depth.resize(static_cast<size_t>(m));
    Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
    for (int i = 0; i < m; ++i) {
        const Vec3& p = curve.points[static_cast<size_t>(i)];
        ex.uv[static_cast<size_t>(i)] = Vec2(p.dot(b.e1), p.dot(b.e2));
        ex.depth[static_cast<size_t>(i)] = p.dot(b.d);
        lo = lo.cwiseMin(ex.uv[static_cast<size_t>(i)]);
        hi = hi.cwiseMax(ex.uv[static_cast<size_t>(i)]);
    }
    ex.scale = (hi - lo).norm();
    const double eps = cfg.genericity_eps;

    for (int i = 0; i < m; ++i) {
        const Vec2 a0 = ex.uv[static_cast<size_t>(i)], a1 = ex.uv[static_cast<size_t>((i + 1) % m)];
        const double len3 =
            (curve.points[static_cast<size_t>((i + 1) % m)] - curve.points[static_cast<size_t>(i)])
                .norm();
        if ((a1 - a0).norm() < eps * (1.0 + len3))
            throw DegenerateProjectionError(
                "projection: direction nearly parallel to a segment");
    }

    // Broad phase: sweep over x-sorted segment boxes.
    std::vector<int> order(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
    const auto xmin = [&](int i) {
        return std::min(ex.uv[static_cast<size_t>(i)].x(), ex.uv[static_cast<size_t>((i + 1) % m)].x());
    };
    const auto xmax = [&](int i) {
        return std::max(ex.uv[static_cast<size_t>(i)].x(), ex.uv[static_cast<size_t>((i + 1) % m)].x());
    };
    const auto ymin = [&](int i) {
        return std::min(ex.uv[static_cast<size_t>(i)].y(), ex.uv[static_cast<size_t>((i + 1) % m)].y());
    };
    const auto ymax = [&](int i) {
        return std::max(ex.uv[static_cast<size_t>(i)].y(), ex.uv[static_cast<size_t>((i + 1) % m)].y());
    };
    std::sort(order.begin(), order.end(), [&](int a, int bb) { return xmin(a) < xmin(bb); });
    std::vector<int> active;

    for (const int j : order) {
        const double jx = xmin(j);
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](int i) { return xmax(i) < jx; }),
                     active.end());
        for (const int i : active) {
            const int a = std::min(i, j), bseg = std::max(i, j);
            const int gap = (bseg - a) % m;
            if (gap == 1 || gap == m - 1) continue;  // adjacent segments share a vertex
            if (ymin(i) > ymax(j) || ymin(j) > ymax(i)) continue;
            const Vec2 p = ex.uv[static_cast<size_t>(a)];
            const Vec2 u = ex.uv[static_cast<size_t>((a + 1) % m)] - p;
            const Vec2 q = ex.uv[static_cast<size_t>(bseg)];
            const Vec2 v = ex.uv[static_cast<size_t>((bseg + 1) % m)] - q;
            const double den = cross2(u, v);
            const Vec2 w = q - p;
            if (std::abs(den) < eps * u.norm() * v.norm()) {
                // Near-parallel: degenerate only if the segments nearly touch.
                const double dist = std::abs(cross2(u.normalized(), w));
                const double su = w.dot(u) / u.squaredNorm();
                if (dist < eps * ex.scale && su > -0.5 && su < 1.5)
                    throw DegenerateProjectionError("projection: near-tangent crossing");
                continue;
            }
            const double s = cross2(w, v) / den;
            const double t = cross2(w, u) / den;
            if (s < -eps || s > 1.0 + eps || t < -eps || t > 1.0 + eps) continue;
            if (s < eps || s > 1.0 - eps || t < eps || t > 1.0 - eps)
                throw DegenerateProjectionError("projection: crossing at a vertex");
            Crossing2D c;
            c.seg_a = a;
            c.seg_b = bseg;
            c.s = s;
            c.t = t;
            c.point = p + s * u;
            c.depth_a = ex.depth[static_cast<size_t>(a)] +
                        s * (ex.depth[static_cast<size_t>((a + 1) % m)] -
                             ex.depth[static_cast<size_t>(a)]);
            c.depth_b = ex.depth[static_cast<size_t>(bseg)] +
                        t * (ex.depth[static_cast<size_t>((bseg + 1) % m)] -
                             ex.depth[static_cast<size_t>(bseg)]);
            if (std::abs(c.depth_a - c.depth_b) < eps * (1.0 + curve.diameter()))
                throw DegenerateProjectionError("projection: depth tie at a crossing");
            c.dir_a = u.normalized();
            c.dir_b = v.normalized();
            ex.crossings.push_back(c);
        }
        active.push_back(j);
    }

    std::sort(ex.crossings.begin(), ex.crossings.end(), [](const Crossing2D& x, const Crossing2D& y) {
        if (x.seg_a != y.seg_a) return x.seg_a < y.seg_a;
        if (x.seg_b != y.seg_b) return x.seg_b < y.seg_b;
        return x.s < y.s;
    });
    for (size_t i = 0; i < ex.crossings.size(); ++i) {
        for (size_t j = i + 1; j < ex.crossings.size(); ++j) {
            if ((ex.crossings[i].point - ex.crossings[j].point).norm() < eps * ex.scale)
                throw DegenerateProjectionError("projection: triple point");
        }
    }
    return ex;
}

}  // namespace

double ClosedCurve::diameter() const {
    Vec3 lo(1e300, 1e300, 1e300), hi(-1e300, -1e300, -1e300);
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return points.empty() ? 0.0 : (hi - lo).norm();
}

double ClosedCurve::length() const {
    double len = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
        len += (points[(i + 1) % points.size()] - points[i]).norm();
    return len;
}

KnotDiagram project(const ClosedCurve& curve, const Vec3& direction,
                    const ProjectionConfig& cfg) {
    const Extraction ex = extract(curve, direction, cfg);
    const int n = static_cast<int>(ex.crossings.size());
    KnotDiagram d;
    d.over_in.resize(static_cast<size_t>(n));
    d.mate.assign(static_cast<size_t>(4 * n), -1);
    if (n == 0) return d;

    struct Pass {
        int seg;
        double param;
        int crossing;
        bool over;
    };
    std::vector<Pass> passes;
    passes.reserve(static_cast<size_t>(2 * n));
    for (int k = 0; k < n; ++k) {
        const auto& c = ex.crossings[static_cast<size_t>(k)];
        const bool a_over = c.depth_a > c.depth_b;
        passes.push_back({c.seg_a, c.s, k, a_over});
        passes.push_back({c.seg_b, c.t, k, !a_over});
        // Under tangent rotated CCW by 90 degrees pointing along the over
        // tangent means the over strand enters at slot 1.
        const Vec2 du = a_over ? c.dir_b : c.dir_a;
        const Vec2 dover = a_over ? c.dir_a : c.dir_b;
        d.over_in[static_cast<size_t>(k)] = cross2(du, dover) > 0.0 ? 1 : 3;
    }
    std::sort(passes.begin(), passes.end(), [](const Pass& x, const Pass& y) {
        if (x.seg != y.seg) return x.seg < y.seg;
        return x.param < y.param;
    });
    const auto entry_dart = [&](const Pass& p) {
        return p.over ? KnotDiagram::dart(p.crossing, d.over_in[static_cast<size_t>(p.crossing)])
                      : KnotDiagram::dart(p.crossing, 0);
    };
    const auto exit_dart = [&](const Pass& p) {
        return p.over
                   ? KnotDiagram::dart(p.crossing, 4 - d.over_in[static_cast<size_t>(p.crossing)])
                   : KnotDiagram::dart(p.crossing, 2);
    };
    for (size_t k = 0; k < passes.size(); ++k) {
        const int out = exit_dart(passes[k]);
        const int in = entry_dart(passes[(k + 1) % passes.size()]);
        d.mate[static_cast<size_t>(out)] = in;
        d.mate[static_cast<size_t>(in)] = out;
    }
    d.validate();
    return d;
}

Vec3 random_direction(std::mt19937_64& rng) {
    const auto uniform = [&rng] {
        return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    };
    double g[3];
    for (int i = 0; i < 3; i += 2) {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        g[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < 3) g[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    Vec3 v(g[0], g[1], g[2]);
    const double n = v.norm();
    return n > 1e-12 ? Vec3(v / n) : Vec3(0, 0, 1);
}

KnotDiagram project_generic(const ClosedCurve& curve, uint64_t seed, int max_retries,
                            Vec3* direction_used) {
    std::mt19937_64 rng(seed);
    std::string last = "projection: no attempts";
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        const Vec3 dir = random_direction(rng);
        try {
            KnotDiagram d = project(curve, dir);
            if (direction_used) *direction_used = dir;
            return d;
        } catch (const DegenerateProjectionError& e) {
            last = e.what();
        }
    }
    throw DegenerateProjectionError(last + std::string(" (retries exhausted)"));
}

std::string render_svg(const ClosedCurve& curve, const Vec3& direction,
                       const std::string& timestamp) {
    const Extraction ex = extract(curve, direction, {});
    const int m = curve.size();

    // Cut the projected polyline at under-passes, leaving a visual gap.
    const double gap = 0.012 * ex.scale;
    struct Cut {
        int seg;
        double param;
    };
    std::vector<Cut> cuts;
    for (const auto& c : ex.crossings) {
        const bool a_over = c.depth_a > c.depth_b;
        cuts.push_back(a_over ? Cut{c.seg_b, c.t} : Cut{c.seg_a, c.s});
    }
    std::sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) {
        if (x.seg != y.seg) return x.seg < y.seg;
        return x.param < y.param;
    });

    const auto point_at = [&](int seg, double t) {
        const Vec2& a = ex.uv[static_cast<size_t>(seg)];
        const Vec2& b = ex.uv[static_cast<size_t>((seg + 1) % m)];
        return Vec2(a + t * (b - a));
    };

    std::vector<std::vector<Vec2>> arcs;
    if (cuts.empty()) {
        std::vector<Vec2> whole = ex.uv;
        whole.push_back(ex.uv.front());
        arcs.push_back(std::move(whole));
    } else {
        for (size_t k = 0; k < cuts.size(); ++k) {
            const Cut& c0 = cuts[k];
            const Cut& c1 = cuts[(k + 1) % cuts.size()];
            const double pos0 = c0.seg + c0.param;
            const double pos1 = c1.seg + c1.param;
            const double delta = std::fmod(pos1 - pos0 + m, static_cast<double>(m));
            std::vector<Vec2> arc;
            arc.push_back(point_at(c0.seg, c0.param));
            for (int v = static_cast<int>(std::floor(pos0)) + 1;
                 v <= static_cast<int>(std::floor(pos0 + delta)); ++v)
                arc.push_back(ex.uv[static_cast<size_t>(v % m)]);
            arc.push_back(point_at(c1.seg, c1.param));
            // Trim both ends by the gap.
            const auto trim = [&](std::vector<Vec2>& a, bool front) {
                double remaining = gap;
                while (a.size() > 1 && remaining > 0.0) {
                    Vec2& end = front ? a.front() : a.back();
                    const Vec2& next2 = front ? a[1] : a[a.size() - 2];
                    const double seg_len = (next2 - end).norm();
                    if (seg_len <= remaining) {
                        remaining -= seg_len;
                        if (front) a.erase(a.begin());
                        else a.pop_back();
                    } else {
                        end = end + (next2 - end) * (remaining / seg_len);
                        remaining = 0.0;
                    }
                }
            };
            trim(arc, true);
            trim(arc, false);
            if (arc.size() > 1) arcs.push_back(std::move(arc));
        }
    }

    Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
    for (const auto& p : ex.uv) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double pad = 0.05 * ex.scale;
    std::ostringstream os;
    os.setf(std::ios::fmtflags(0), std::ios::floatfield);
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo.x() - pad << " "
       << lo.y() - pad << " " << (hi.x() - lo.x()) + 2 * pad << " " << (hi.y() - lo.y()) + 2 * pad
       << "\">\n";
    if (!timestamp.empty()) os << "<!-- generated " << timestamp << " -->\n";
    os << "<g fill=\"none\" stroke=\"#20306a\" stroke-width=\"" << 0.004 * ex.scale
       << "\" stroke-linecap=\"round\">\n";
    for (const auto& arc : arcs) {
        os << "<path d=\"M";
        for (const auto& p : arc) os << " " << p.x() << " " << -p.y();
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace lorenzknot
