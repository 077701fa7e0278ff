#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lorenzknot/equilibria.hpp"
#include "oracles.hpp"

using namespace lorenzknot;

namespace {

double eigen_residual(const Mat3& j, const std::complex<double>& lam,
                      const Equilibrium& eq, int i) {
    if (lam.imag() == 0.0) return (j * eq.eigenvectors[i] - lam.real() * eq.eigenvectors[i]).norm();
    // For a conjugate pair the stored vectors are Re and Im of the eigenvector.
    int re_idx = -1, im_idx = -1;
    for (int k = 0; k < 3; ++k) {
        if (eq.eigenvalues[k] == std::conj(lam) && k != i) {
            re_idx = lam.imag() > 0.0 ? i : k;
            im_idx = lam.imag() > 0.0 ? k : i;
        }
    }
    REQUIRE(re_idx >= 0);
    Eigen::Vector3cd v = eq.eigenvectors[re_idx].cast<std::complex<double>>() +
                         std::complex<double>(0, 1) * eq.eigenvectors[im_idx];
    std::complex<double> lam_pos(lam.real(), std::abs(lam.imag()));
    return (j.cast<std::complex<double>>() * v - lam_pos * v).norm();
}

}  // namespace

TEST_CASE("three singular points at classical parameters") {
    const Params p = classical_params();
    const auto eqs = equilibria(p);
    CHECK(eqs[0].location.norm() == 0.0);
    const double c = std::sqrt(p.beta * (p.rho - 1.0));
    CHECK(c == doctest::Approx(8.48528137423857).epsilon(1e-12));
    CHECK((eqs[1].location - Vec3(c, c, 27.0)).norm() == 0.0);
    CHECK((eqs[2].location - Vec3(-c, -c, 27.0)).norm() == 0.0);
    for (const auto& eq : eqs) {
        CHECK(vector_field(p, eq.location).norm() < 1e-12 * (1.0 + eq.location.norm()));
    }
}

TEST_CASE("rho <= 1 is a domain error") {
    CHECK_THROWS_AS(equilibria(Params{1.0, 10.0, 8.0 / 3.0}), DomainError);
    CHECK_THROWS_AS(equilibria(Params{0.5, 10.0, 8.0 / 3.0}), DomainError);
}

TEST_CASE("origin's unstable eigenvalue solves its characteristic quadratic") {
    const Params p = classical_params();
    const auto eq = equilibrium(p, EquilibriumKind::origin);
    // x,y block of the origin's Jacobian gives lambda^2 + 11 lambda - 270 = 0.
    const double lam_expect = (-11.0 + std::sqrt(1201.0)) / 2.0;
    CHECK(lam_expect == doctest::Approx(11.8277).epsilon(1e-4));
    double lam_max = -1e9;
    for (const auto& l : eq.eigenvalues) lam_max = std::max(lam_max, l.real());
    CHECK(lam_max == doctest::Approx(lam_expect).epsilon(1e-12));
}

TEST_CASE("eigenpairs have small residuals and match a library solver") {
    auto g = oracles::rng(23);
    std::uniform_real_distribution<double> ur(1.5, 200.0), us(2.0, 20.0), ub(0.5, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Params p{ur(g), us(g), ub(g)};
        for (const auto& eq : equilibria(p)) {
            const Mat3 j = jacobian(p, eq.location);
            for (int i = 0; i < 3; ++i) {
                CHECK(eigen_residual(j, eq.eigenvalues[i], eq, i) < 1e-9);
            }
            // Cross-check the eigenvalue multiset against Eigen's solver.
            Eigen::EigenSolver<Mat3> es(j);
            std::array<std::complex<double>, 3> lib{es.eigenvalues()(0), es.eigenvalues()(1),
                                                    es.eigenvalues()(2)};
            auto cmp = [](const std::complex<double>& a, const std::complex<double>& b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            };
            std::sort(lib.begin(), lib.end(), cmp);
            for (int i = 0; i < 3; ++i) {
                CHECK(std::abs(lib[i] - eq.eigenvalues[i]) <
                      1e-8 * (1.0 + std::abs(lib[i])));
            }
        }
    }
}

TEST_CASE("saddle signature at T-point-scale parameters") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const auto eqs = equilibria(p);
    int unstable0 = 0;
    for (const auto& l : eqs[0].eigenvalues) unstable0 += l.real() > 0.0;
    CHECK(unstable0 == 1);
    for (int k = 1; k < 3; ++k) {
        int stable = 0;
        for (const auto& l : eqs[k].eigenvalues) stable += l.real() < 0.0;
        CHECK(stable == 1);
    }
}

TEST_CASE("p+ and p- have identical eigenvalue multisets") {
    auto g = oracles::rng(31);
    std::uniform_real_distribution<double> ur(1.5, 200.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Params p{ur(g), 10.0, 8.0 / 3.0};
        const auto plus = equilibrium(p, EquilibriumKind::p_plus);
        const auto minus = equilibrium(p, EquilibriumKind::p_minus);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(plus.eigenvalues[i] - minus.eigenvalues[i]) < 1e-10);
        }
    }
}

TEST_CASE("one_dim_direction sign convention and symmetry") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const auto o = equilibrium(p, EquilibriumKind::origin);
    const Vec3 vo = one_dim_direction(p, o);
    CHECK(vo.x() > 0.0);
    CHECK(vo.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(vo.z()) < 1e-14);  // z decouples at the origin

    const Vec3 vp = one_dim_direction(p, equilibrium(p, EquilibriumKind::p_plus));
    const Vec3 vm = one_dim_direction(p, equilibrium(p, EquilibriumKind::p_minus));
    // As lines, the two directions are images under (x,y,z)->(-x,-y,z).
    const Vec3 mapped = mirror(vp);
    CHECK(std::min((mapped - vm).norm(), (mapped + vm).norm()) < 1e-12);
}

TEST_CASE("structure error when the saddle type is absent") {
    // For small rho > 1 the wing equilibria are attracting: no 1-D stable
    // eigen-direction signature.
    const Params p{2.0, 10.0, 8.0 / 3.0};
    const auto eq = equilibrium(p, EquilibriumKind::p_plus);
    CHECK_THROWS_AS(one_dim_direction(p, eq), StructureError);
}

TEST_CASE("unstable branches of the origin are exact mirror images") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const TrappingSphere ts = make_trapping_sphere(p);
    const auto o = equilibrium(p, EquilibriumKind::origin);
    BranchConfig cfg;
    cfg.horizon = 3.0;
    const ManifoldBranch plus = manifold_branch(p, o, +1, cfg, ts);
    const ManifoldBranch minus = manifold_branch(p, o, -1, cfg, ts);
    REQUIRE(plus.polyline.samples.size() == minus.polyline.samples.size());
    double worst = 0.0;
    for (size_t i = 0; i < plus.polyline.samples.size(); ++i) {
        worst = std::max(worst, (mirror(plus.polyline.samples[i].state) -
                                 minus.polyline.samples[i].state)
                                    .norm());
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("an outward stable branch of p+ reaches the sphere") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const TrappingSphere ts = make_trapping_sphere(p);
    const auto pp = equilibrium(p, EquilibriumKind::p_plus);
    BranchConfig cfg;
    bool some_branch_exits = false;
    for (int sign : {+1, -1}) {
        const ManifoldBranch br = manifold_branch(p, pp, sign, cfg, ts);
        CHECK(br.termination != BranchTermination::reached_horizon);
        some_branch_exits |= br.termination == BranchTermination::hit_sphere;
        for (const auto& s : br.polyline.samples) {
            CHECK(s.state.norm() <= 2.0 * ts.radius);
        }
    }
    CHECK(some_branch_exits);
}

TEST_CASE("halving eps moves the branch by O(eps)") {
    const Params p{30.8680, 10.1673, 8.0 / 3.0};
    const TrappingSphere ts = make_trapping_sphere(p);
    const auto o = equilibrium(p, EquilibriumKind::origin);
    BranchConfig a, b;
    a.horizon = b.horizon = 2.5;
    a.max_chord = b.max_chord = 0.02;
    a.eps_rel = 1e-5;
    b.eps_rel = 5e-6;
    const ManifoldBranch ba = manifold_branch(p, o, +1, a, ts);
    const ManifoldBranch bb = manifold_branch(p, o, +1, b, ts);
    // Compare over a fixed window of arclength, point-to-polyline.
    auto sup_dist = [](const ManifoldBranch& x, const ManifoldBranch& y, double arc_cap) {
        double sup = 0.0, arc = 0.0;
        for (size_t i = 1; i < x.polyline.samples.size() && arc < arc_cap; ++i) {
            const Vec3& q = x.polyline.samples[i].state;
            arc += (q - x.polyline.samples[i - 1].state).norm();
            double best = 1e300;
            for (size_t jj = 1; jj < y.polyline.samples.size(); ++jj) {
                const Vec3& a0 = y.polyline.samples[jj - 1].state;
                const Vec3& a1 = y.polyline.samples[jj].state;
                const Vec3 d = a1 - a0;
                const double tt = d.squaredNorm() > 0.0
                                      ? std::clamp((q - a0).dot(d) / d.squaredNorm(), 0.0, 1.0)
                                      : 0.0;
                best = std::min(best, (q - (a0 + tt * d)).norm());
            }
            sup = std::max(sup, best);
        }
        return sup;
    };
    const double d = sup_dist(ba, bb, 30.0);
    CHECK(d < 50.0 * a.eps_rel);  // O(eps), generous constant
    CHECK(d > 0.0);
}
