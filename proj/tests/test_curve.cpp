#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lorenzknot/invariants.hpp"
#include "lorenzknot/json_io.hpp"
#include "lorenzknot/project.hpp"

using namespace lorenzknot;

namespace {

const TPoint& primary_tpoint() {
    static const TPoint tp =
        find_tpoint(Params{30.0, 10.0, 8.0 / 3.0}, 8.0 / 3.0).tpoint;
    return tp;
}

std::string classify_curve(const ClosedCurve& c, uint64_t seed) {
    const KnotDiagram d = project_generic(c, seed, 20);
    return classify(alexander_polynomial(reidemeister_simplify(d))).text;
}

}  // namespace

TEST_CASE("closure arc endpoints, inflation points, and antipodal handling") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const TrappingSphere ts = make_trapping_sphere(p);
    const Vec3 e_plus = ts.center + ts.radius * Vec3(1, 0, 0).normalized();
    // Generic pair.
    {
        const Vec3 e_minus = ts.center + ts.radius * Vec3(-0.4, 0.8, 0.2).normalized();
        bool antipodal = true;
        const auto arc = close_through_infinity(e_plus, e_minus, ts, 3.0, &antipodal);
        CHECK(!antipodal);
        CHECK((arc.front() - e_plus).norm() == 0.0);
        CHECK((arc.back() - e_minus).norm() == 0.0);
        // Radial legs reach the inflated sphere along the exit rays.
        bool found_inflated = false;
        for (const auto& q : arc)
            found_inflated |= (q - (ts.center + 3.0 * (e_plus - ts.center))).norm() < 1e-9;
        CHECK(found_inflated);
        for (size_t i = 1; i + 1 < arc.size(); ++i)
            CHECK((arc[i] - ts.center).norm() > ts.radius - 1e-9);
    }
    // Exactly antipodal exits still produce an arc, with the flag set.
    {
        const Vec3 e_minus = 2.0 * ts.center - e_plus;
        bool antipodal = false;
        const auto arc = close_through_infinity(e_plus, e_minus, ts, 3.0, &antipodal);
        CHECK(antipodal);
        CHECK(arc.size() > 64);
        CHECK((arc.front() - e_plus).norm() == 0.0);
        CHECK((arc.back() - e_minus).norm() == 0.0);
    }
    CHECK_THROWS_AS(close_through_infinity(e_plus, e_plus, ts, 3.0), DomainError);
    CHECK_THROWS_AS(close_through_infinity(ts.center, e_plus, ts, 3.0), DomainError);
}

TEST_CASE("assembled primary curve carries all markers in cyclic order") {
    const ClosedCurve c = assemble_invariant_curve(primary_tpoint());
    REQUIRE(c.size() > 100);
    REQUIRE(c.size() <= 20000);
    for (const char* m : {"origin", "p_plus", "p_minus", "exit_plus", "exit_minus"})
        REQUIRE(c.markers.count(m) == 1);
    // Equilibria sit exactly at their markers.
    const auto eqs = equilibria(primary_tpoint().params);
    CHECK((c.points[static_cast<size_t>(c.markers.at("origin"))] - eqs[0].location).norm() ==
          0.0);
    CHECK((c.points[static_cast<size_t>(c.markers.at("p_plus"))] - eqs[1].location).norm() ==
          0.0);
    CHECK((c.points[static_cast<size_t>(c.markers.at("p_minus"))] - eqs[2].location).norm() ==
          0.0);
    // Cyclic marker order: origin, wing, infinity (closure), other wing.
    const int o = c.markers.at("origin");
    CHECK(o == 0);
    const int a = std::min(c.markers.at("p_plus"), c.markers.at("p_minus"));
    const int b = std::max(c.markers.at("p_plus"), c.markers.at("p_minus"));
    CHECK(a < c.closure_first);
    CHECK(c.closure_first <= c.closure_last);
    CHECK(c.closure_last < b);
    // The closure stays outside the trapping sphere.
    const TrappingSphere ts = make_trapping_sphere(primary_tpoint().params);
    for (int i = c.closure_first; i <= c.closure_last; ++i)
        CHECK((c.points[static_cast<size_t>(i)] - ts.center).norm() > ts.radius * 0.999);
}

TEST_CASE("assembled curve is mirror symmetric up to reversal") {
    const ClosedCurve c = assemble_invariant_curve(primary_tpoint());
    const ClosedCurve m = mirror(c);
    // Every sampled point of the mirror lies on the original within 1e-6.
    double worst = 0.0;
    for (int i = 0; i < m.size(); i += 13) {
        const Vec3& q = m.points[static_cast<size_t>(i)];
        double best = 1e300;
        for (int j = 0; j < c.size(); ++j) {
            const Vec3& a0 = c.points[static_cast<size_t>(j)];
            const Vec3 d = c.points[static_cast<size_t>((j + 1) % c.size())] - a0;
            const double dn = d.squaredNorm();
            const double t = dn > 0.0 ? std::clamp((q - a0).dot(d) / dn, 0.0, 1.0) : 0.0;
            best = std::min(best, (q - (a0 + t * d)).norm());
        }
        worst = std::max(worst, best);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("classical parameters fail assembly") {
    TPoint fake{classical_params(), 0.0, std::nullopt};
    CHECK_THROWS_AS(assemble_invariant_curve(fake), AssemblyError);
}

TEST_CASE("primary curve classifies as the trefoil; closure inflation is immaterial") {
    AssemblyConfig cfg;
    std::string verdicts[3];
    int k = 0;
    for (const double inflation : {2.0, 3.0, 5.0}) {
        cfg.inflation = inflation;
        const ClosedCurve c = assemble_invariant_curve(primary_tpoint(), cfg);
        verdicts[k++] = classify_curve(c, 7001);
    }
    CHECK(verdicts[0] == "3_1");
    CHECK(verdicts[1] == "3_1");
    CHECK(verdicts[2] == "3_1");
}

TEST_CASE("jones of the assembled curve is seed-independent and chiral") {
    const ClosedCurve c = assemble_invariant_curve(primary_tpoint());
    Laurent jref;
    for (uint64_t seed = 11; seed <= 15; ++seed) {
        const KnotDiagram d = reidemeister_simplify(project_generic(c, seed, 20));
        const Laurent j = kauffman_bracket_jones(d);
        if (seed == 11) jref = j;
        else CHECK(j == jref);
    }
    CHECK(jref != jref.inverted());  // the trefoil is chiral
    // The equivariance map (x,y,z) -> (-x,-y,z) is a rotation, so the
    // rotated curve keeps the same Jones polynomial, chirality included.
    const KnotDiagram md = reidemeister_simplify(project_generic(mirror(c), 11, 20));
    CHECK(kauffman_bracket_jones(md) == jref);
}

TEST_CASE("resampling preserves markers and caps the vertex count") {
    const ClosedCurve c = assemble_invariant_curve(primary_tpoint());
    const ClosedCurve r = resample(c, 4000);
    CHECK(r.size() <= 4000 + 16);
    for (const auto& [name, idx] : c.markers) {
        REQUIRE(r.markers.count(name) == 1);
        CHECK((r.points[static_cast<size_t>(r.markers.at(name))] -
               c.points[static_cast<size_t>(idx)])
                  .norm() == 0.0);
    }
    CHECK(classify_curve(r, 7001) == "3_1");
}

TEST_CASE("curve json round-trips the shape") {
    const ClosedCurve c = assemble_invariant_curve(primary_tpoint());
    const std::string j = curve_json(c);
    CHECK(j.find("\"markers\"") != std::string::npos);
    CHECK(j.find("\"closure\"") != std::string::npos);
    CHECK(j.find("\"points\"") != std::string::npos);
}

TEST_CASE("trajectory and branch json carry the documented keys") {
    const Params p = primary_tpoint().params;
    const Trajectory tr = integrate(p, Vec3(1, 1, 1), 0.5, 1e-8);
    RunConfig cfg;
    cfg.set("tol", "1e-8");
    const std::string tj = trajectory_json(p, 1e-8, tr, &cfg);
    for (const char* key : {"\"rho\"", "\"sigma\"", "\"beta\"", "\"tol\"", "\"direction\"",
                            "\"termination\"", "\"samples\"", "\"config\"", "\"tool\""})
        CHECK(tj.find(key) != std::string::npos);
    CHECK(tj.find("\"forward\"") != std::string::npos);
    CHECK(tj.find("reached-horizon") != std::string::npos);

    const TrappingSphere ts = make_trapping_sphere(p);
    const auto wing = equilibrium(p, EquilibriumKind::p_plus);
    BranchConfig bc;
    const ManifoldBranch br = manifold_branch(p, wing, +1, bc, ts);
    const std::string bj = branch_json(p, bc.tol, br, &cfg);
    for (const char* key : {"\"source\"", "\"stability\"", "\"sign\"", "\"termination\""})
        CHECK(bj.find(key) != std::string::npos);
    CHECK(bj.find("\"stable\"") != std::string::npos);
    CHECK(bj.find("\"backward\"") != std::string::npos);
}

TEST_CASE("run config round-trips losslessly and hashes stably") {
    RunConfig cfg;
    cfg.set("rho", "30.868");
    cfg.set("sigma", "10.1673");
    cfg.set("tol", "1e-10");
    cfg.set("out", "runs/knot");
    const RunConfig back = RunConfig::parse(cfg.serialize());
    CHECK(back.serialize() == cfg.serialize());
    CHECK(back.content_hash() == cfg.content_hash());
    CHECK(back.get_double("tol", 0.0) == 1e-10);
    RunConfig other = back;
    other.set("tol", "1e-11");
    CHECK(other.content_hash() != cfg.content_hash());
}
