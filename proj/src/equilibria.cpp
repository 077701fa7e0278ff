#include "lorenzknot/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace lorenzknot {

namespace {

using Cplx = std::complex<double>;

struct Cubic {
    // monic: x^3 + a2 x^2 + a1 x + a0
    double a2, a1, a0;
    double operator()(double x) const { return ((x + a2) * x + a1) * x + a0; }
    double deriv(double x) const { return (3.0 * x + 2.0 * a2) * x + a1; }
    Cplx operator()(Cplx x) const { return ((x + a2) * x + a1) * x + a0; }
    Cplx deriv(Cplx x) const { return (3.0 * x + 2.0 * a2) * x + a1; }
};

double polish_real(const Cubic& c, double x) {
    for (int i = 0; i < 4; ++i) {
        const double d = c.deriv(x);
        if (d == 0.0) break;
        const double step = c(x) / d;
        x -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

Cplx polish_complex(const Cubic& c, Cplx x) {
    for (int i = 0; i < 4; ++i) {
        const Cplx d = c.deriv(x);
        if (d == Cplx(0.0)) break;
        const Cplx step = c(x) / d;
        x -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

// Roots of the characteristic polynomial det(A - lambda I) via the
// depressed cubic, one Newton polish per root.
std::array<Cplx, 3> char_roots(const Mat3& a) {
    const double tr = a(0, 0) + a(1, 1) + a(2, 2);
    const double m01 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double m02 = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    const double m12 = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                       a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                       a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    // char(lambda) = lambda^3 - tr lambda^2 + (m01+m02+m12) lambda - det
    const Cubic c{-tr, m01 + m02 + m12, -det};

    // depressed: x = lambda - (-a2)/3... substitute lambda = u - c.a2/3
    const double s = -c.a2 / 3.0;
    const double p = c.a1 - c.a2 * c.a2 / 3.0;
    const double q = c(s);
    const double disc = -4.0 * p * p * p - 27.0 * q * q;

    std::array<Cplx, 3> roots;
    if (disc >= 0.0) {  // three real roots, trigonometric form
        const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        double arg = (m == 0.0) ? 0.0 : 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double u = m * std::cos(phi - 2.0 * M_PI * k / 3.0);
            roots[k] = polish_real(c, s + u);
        }
    } else {  // one real root + conjugate pair
        const double rad = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = std::cbrt(-q / 2.0 + rad) + std::cbrt(-q / 2.0 - rad);
        const double r0 = polish_real(c, s + u);
        // quadratic factor lambda^2 + b lambda + cq
        const double b = c.a2 + r0;
        const double cq = -c.a0 / r0;
        const double half = -b / 2.0;
        const double d2 = cq - half * half;
        const Cplx root1 = polish_complex(c, Cplx(half, std::sqrt(std::max(0.0, d2))));
        roots = {Cplx(r0, 0.0), root1, std::conj(root1)};
    }
    // deterministic order: by real part, then imaginary part
    std::sort(roots.begin(), roots.end(), [](const Cplx& x, const Cplx& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return roots;
}

// Null vector of (A - lambda I) for real lambda via the largest row
// cross product; sign convention applied by the caller.
Vec3 real_eigenvector(const Mat3& a, double lambda) {
    Mat3 m = a;
    m.diagonal().array() -= lambda;
    const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
    const Vec3 c01 = r0.cross(r1), c12 = r1.cross(r2), c02 = r0.cross(r2);
    const double n01 = c01.squaredNorm(), n12 = c12.squaredNorm(), n02 = c02.squaredNorm();
    Vec3 v = c01;
    double best = n01;
    if (n12 > best) { v = c12; best = n12; }
    if (n02 > best) { v = c02; best = n02; }
    return v.normalized();
}

// Bilinear (unconjugated) cross product; Eigen's complex cross() conjugates.
Eigen::Vector3cd bilinear_cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return Eigen::Vector3cd(a.y() * b.z() - a.z() * b.y(),
                            a.z() * b.x() - a.x() * b.z(),
                            a.x() * b.y() - a.y() * b.x());
}

Eigen::Vector3cd complex_eigenvector(const Mat3& a, Cplx lambda) {
    Eigen::Matrix3cd m = a.cast<Cplx>();
    m.diagonal().array() -= lambda;
    const Eigen::Vector3cd r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
    const Eigen::Vector3cd c01 = bilinear_cross(r0, r1), c12 = bilinear_cross(r1, r2),
                           c02 = bilinear_cross(r0, r2);
    const double n01 = c01.squaredNorm(), n12 = c12.squaredNorm(), n02 = c02.squaredNorm();
    Eigen::Vector3cd v = c01;
    double best = n01;
    if (n12 > best) { v = c12; best = n12; }
    if (n02 > best) { v = c02; best = n02; }
    return v / v.norm();
}

Vec3 apply_sign_convention(Vec3 v) {
    const double tie = 1e-12;
    double lead = v.x();
    if (std::abs(lead) <= tie) lead = v.y();
    if (std::abs(lead) <= tie) lead = v.z();
    return lead < 0.0 ? Vec3(-v) : v;
}

Equilibrium decompose(const Params& p, const Vec3& loc, EquilibriumKind kind) {
    Equilibrium eq;
    eq.location = loc;
    eq.kind = kind;
    const Mat3 j = jacobian(p, loc);
    eq.eigenvalues = char_roots(j);
    int pos = -1, neg = -1;
    for (int i = 0; i < 3; ++i) {
        const Cplx lam = eq.eigenvalues[i];
        if (lam.imag() == 0.0) {
            eq.eigenvectors[i] = apply_sign_convention(real_eigenvector(j, lam.real()));
        } else if (lam.imag() > 0.0) {
            pos = i;
        } else {
            neg = i;
        }
    }
    if (pos >= 0) {
        // One eigenvector for the pair; Re and Im span the invariant plane.
        const Eigen::Vector3cd v = complex_eigenvector(j, eq.eigenvalues[pos]);
        eq.eigenvectors[pos] = v.real();
        eq.eigenvectors[neg] = v.imag();
    }
    return eq;
}

}  // namespace

const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::origin: return "origin";
        case EquilibriumKind::p_plus: return "p_plus";
        case EquilibriumKind::p_minus: return "p_minus";
    }
    return "?";
}

bool is_unstable_kind(EquilibriumKind k) { return k == EquilibriumKind::origin; }

Equilibrium equilibrium(const Params& p, EquilibriumKind kind) {
    validate(p);
    if (!(p.rho > 1.0))
        throw DomainError("equilibria: rho must exceed 1 (equilibria merge at rho=1)");
    switch (kind) {
        case EquilibriumKind::origin:
            return decompose(p, Vec3::Zero(), kind);
        case EquilibriumKind::p_plus: {
            const double c = std::sqrt(p.beta * (p.rho - 1.0));
            return decompose(p, Vec3(c, c, p.rho - 1.0), kind);
        }
        case EquilibriumKind::p_minus: {
            const double c = std::sqrt(p.beta * (p.rho - 1.0));
            return decompose(p, Vec3(-c, -c, p.rho - 1.0), kind);
        }
    }
    throw DomainError("equilibria: unknown kind");
}

std::array<Equilibrium, 3> equilibria(const Params& p) {
    return {equilibrium(p, EquilibriumKind::origin),
            equilibrium(p, EquilibriumKind::p_plus),
            equilibrium(p, EquilibriumKind::p_minus)};
}

Vec3 one_dim_direction(const Params& p, const Equilibrium& eq) {
    const bool want_unstable = is_unstable_kind(eq.kind);
    int count = 0, idx = -1;
    for (int i = 0; i < 3; ++i) {
        const double re = eq.eigenvalues[i].real();
        if ((want_unstable && re > 0.0) || (!want_unstable && re < 0.0)) {
            ++count;
            idx = i;
        }
    }
    if (count != 1)
        throw StructureError(std::string("one_dim_direction: ") + to_string(eq.kind) +
                             " does not have exactly one " +
                             (want_unstable ? "unstable" : "stable") + " eigenvalue (found " +
                             std::to_string(count) + ")");
    if (eq.eigenvalues[idx].imag() != 0.0)
        throw StructureError("one_dim_direction: the selected eigenvalue is not real");
    (void)p;
    return eq.eigenvectors[idx];
}

ManifoldBranch manifold_branch(const Params& p, const Equilibrium& eq, int sign,
                               const BranchConfig& cfg, const TrappingSphere& ts) {
    if (sign != 1 && sign != -1) throw DomainError("manifold_branch: sign must be +-1");
    if (!(cfg.eps_rel >= 1e-8 && cfg.eps_rel <= 1e-4))
        throw DomainError("manifold_branch: eps_rel outside [1e-8, 1e-4]");

    const Vec3 dir = one_dim_direction(p, eq);
    const double eps = cfg.eps_rel * (1.0 + eq.location.norm());
    const Vec3 seed = eq.location + sign * eps * dir;
    const bool unstable = is_unstable_kind(eq.kind);

    std::vector<EventSpec> events;
    events.push_back(sphere_exit_event(ts, 0, true));
    const auto eqs = equilibria(p);
    std::vector<EquilibriumKind> ball_kind;
    int next_id = 1;
    for (const auto& other : eqs) {
        if (other.kind == eq.kind) continue;
        const Vec3 c = other.location;
        const double r2 = cfg.delta_conn * cfg.delta_conn;
        events.push_back(EventSpec{
            [c, r2](const Vec3& s) { return (s - c).squaredNorm() - r2; },
            next_id++, true, std::max(r2, 1.0)});
        ball_kind.push_back(other.kind);
    }

    ManifoldBranch br;
    br.source = eq.kind;
    br.stable = !unstable;
    br.sign = sign;
    IntegrateOptions opts;
    opts.max_chord = cfg.max_chord;
    br.polyline = integrate(p, seed, unstable ? cfg.horizon : -cfg.horizon, cfg.tol, events, opts);

    switch (br.polyline.termination) {
        case Termination::reached_horizon:
            br.termination = BranchTermination::reached_horizon;
            break;
        case Termination::step_failure:
            br.termination = BranchTermination::step_failure;
            break;
        case Termination::hit_event: {
            const int id = br.polyline.terminal_event_id;
            if (id == 0) {
                br.termination = BranchTermination::hit_sphere;
            } else {
                br.termination = BranchTermination::converged_to_equilibrium;
                br.converged_to = ball_kind[static_cast<size_t>(id - 1)];
                const Vec3 c = eqs[static_cast<size_t>(br.converged_to)].location;
                br.final_distance = (br.polyline.back() - c).norm();
            }
            break;
        }
    }
    return br;
}

}  // namespace lorenzknot
