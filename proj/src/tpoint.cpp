#include "lorenzknot/tpoint.hpp"

#include <cmath>
#include <cstdio>

#include "lorenzknot/parallel.hpp"

namespace lorenzknot {

namespace {

struct StableSection {
    bool found{false};
    Vec3 first_crossing{Vec3::Zero()};
};

// Backward-traces both halves of the 1-D stable manifold of q; the half
// that stays inside the trapping sphere longer is the inward one. Returns
// its first backward crossing of the plane z = rho-1.
StableSection stable_section(const Params& p, const Equilibrium& q, const TrappingSphere& ts,
                             const MissConfig& cfg) {
    const Vec3 v = one_dim_direction(p, q);
    const double eps = cfg.eps_rel * (1.0 + q.location.norm());
    const std::vector<EventSpec> events{plane_event(Vec3(0, 0, 1), p.rho - 1.0, 0, false),
                                        sphere_exit_event(ts, 1, true)};
    Trajectory runs[2];
    double t_exit[2];
    Vec3 first[2];
    bool crossed[2] = {false, false};
    for (int i = 0; i < 2; ++i) {
        const int sign = i == 0 ? +1 : -1;
        runs[i] = integrate(p, q.location + sign * eps * v, -cfg.horizon_stable, cfg.tol, events);
        t_exit[i] = std::abs(runs[i].samples.back().t);
        for (const auto& ev : runs[i].events) {
            if (ev.event_id == 0 && !ev.ambiguous) {
                crossed[i] = true;
                first[i] = ev.state;
                break;
            }
        }
    }
    // The inward half is the one engaged with the recurrent region: it must
    // cross the section; among crossing halves the one that stays inside
    // the sphere longer wins.
    StableSection out;
    int pick = -1;
    if (crossed[0] && crossed[1]) pick = t_exit[0] >= t_exit[1] ? 0 : 1;
    else if (crossed[0]) pick = 0;
    else if (crossed[1]) pick = 1;
    if (pick >= 0) {
        out.found = true;
        out.first_crossing = first[pick];
    }
    return out;
}

struct UnstableSection {
    MissStatus status{MissStatus::ok};
    Vec3 first_crossing{Vec3::Zero()};
};

UnstableSection unstable_section(const Params& p, const Equilibrium& origin,
                                 const TrappingSphere& ts, int sign, const MissConfig& cfg) {
    const Vec3 v = one_dim_direction(p, origin);
    const double eps = cfg.eps_rel;
    const std::vector<EventSpec> events{plane_event(Vec3(0, 0, 1), p.rho - 1.0, 0, true),
                                        sphere_exit_event(ts, 1, true)};
    const Trajectory tr =
        integrate(p, origin.location + sign * eps * v, cfg.horizon_unstable, cfg.tol, events);
    UnstableSection out;
    switch (tr.termination) {
        case Termination::hit_event:
            if (tr.terminal_event_id == 0) {
                out.first_crossing = tr.samples.back().state;
            } else {
                out.status = MissStatus::undefined_distance;
            }
            break;
        case Termination::reached_horizon:
            out.status = MissStatus::no_section;
            break;
        case Termination::step_failure:
            out.status = MissStatus::step_failure;
            break;
    }
    return out;
}

}  // namespace

const char* to_string(MissStatus s) {
    switch (s) {
        case MissStatus::ok: return "ok";
        case MissStatus::domain_error: return "domain-error";
        case MissStatus::undefined_distance: return "undefined-distance";
        case MissStatus::no_section: return "no-section";
        case MissStatus::step_failure: return "step-failure";
    }
    return "?";
}

MissDistance miss_distance(const Params& p, const MissConfig& cfg) {
    validate(p);
    if (!(p.rho > 1.0)) throw DomainError("miss_distance: rho must exceed 1");

    const TrappingSphere ts = make_trapping_sphere(p);
    const auto origin = equilibrium(p, EquilibriumKind::origin);
    const auto pp = equilibrium(p, EquilibriumKind::p_plus);
    const auto pm = equilibrium(p, EquilibriumKind::p_minus);

    MissDistance out;
    const StableSection sp = stable_section(p, pp, ts, cfg);
    const StableSection sm = stable_section(p, pm, ts, cfg);
    const UnstableSection up = unstable_section(p, origin, ts, +1, cfg);
    const UnstableSection um = unstable_section(p, origin, ts, -1, cfg);

    if (up.status != MissStatus::ok || um.status != MissStatus::ok) {
        out.status = up.status != MissStatus::ok ? up.status : um.status;
        return out;
    }
    if (!sp.found || !sm.found) {
        out.status = MissStatus::no_section;
        return out;
    }

    const auto closer = [](const Vec3& u, const StableSection& a, const StableSection& b) {
        const double da = (u - a.first_crossing).norm();
        const double db = (u - b.first_crossing).norm();
        return da <= db ? std::pair<double, bool>{da, true} : std::pair<double, bool>{db, false};
    };

    const auto [dp, plus_side_p] = closer(up.first_crossing, sp, sm);
    out.d_plus = dp;
    out.witness_plus = up.first_crossing;
    out.paired_plus = plus_side_p ? EquilibriumKind::p_plus : EquilibriumKind::p_minus;
    const Vec3& sp_target = plus_side_p ? sp.first_crossing : sm.first_crossing;
    out.offset_plus = Vec2(up.first_crossing.x() - sp_target.x(),
                           up.first_crossing.y() - sp_target.y());

    const auto [dm, minus_side_p] = closer(um.first_crossing, sp, sm);
    out.d_minus = dm;
    out.witness_minus = um.first_crossing;
    out.paired_minus = minus_side_p ? EquilibriumKind::p_plus : EquilibriumKind::p_minus;
    return out;
}

TPointTrace find_tpoint(const Params& guess, double beta, const TPointConfig& cfg) {
    Params p{guess.rho, guess.sigma, beta};
    validate(p);
    if (!(p.rho > 1.0)) throw DomainError("find_tpoint: rho must exceed 1");

    const auto residual = [&cfg](const Params& q) -> Vec2 {
        const MissDistance m = miss_distance(q, cfg.miss);
        if (m.status != MissStatus::ok)
            throw NoConvergenceError(std::string("find_tpoint: miss distance ") +
                                     to_string(m.status) + " at rho=" + std::to_string(q.rho) +
                                     " sigma=" + std::to_string(q.sigma));
        return m.offset_plus;
    };

    const auto fd_jacobian = [&](const Params& q, const Vec2& r0) {
        Mat2 j;
        const double hr = cfg.fd_step_rel * std::abs(q.rho);
        const double hs = cfg.fd_step_rel * std::abs(q.sigma);
        j.col(0) = (residual(Params{q.rho + hr, q.sigma, q.beta}) - r0) / hr;
        j.col(1) = (residual(Params{q.rho, q.sigma + hs, q.beta}) - r0) / hs;
        return j;
    };

    TPointTrace trace;
    Vec2 r = residual(p);
    trace.accepted_residuals.push_back(r.norm());
    Mat2 jac = fd_jacobian(p, r);
    bool fresh_jacobian = true;

    for (int it = 0; it < cfg.max_iter; ++it) {
        if (r.norm() < cfg.tol_tp) {
            trace.tpoint = TPoint{p, r.norm(), std::nullopt};
            trace.iterations = it;
            return trace;
        }
        const Vec2 step = jac.fullPivLu().solve(-r);

        // Backtrack until the residual norm decreases and rho stays in domain.
        bool accepted = false;
        for (double damp = 1.0; damp >= 1.0 / 64.0; damp *= 0.5) {
            const Params trial{p.rho + damp * step.x(), p.sigma + damp * step.y(), beta};
            if (!(trial.rho > 1.0) || !(trial.sigma > 0.0)) continue;
            const Vec2 rt = residual(trial);
            if (rt.norm() < r.norm()) {
                const Vec2 dp(trial.rho - p.rho, trial.sigma - p.sigma);
                const Vec2 dr = rt - r;
                jac += (dr - jac * dp) * dp.transpose() / dp.squaredNorm();
                p = trial;
                r = rt;
                trace.accepted_residuals.push_back(r.norm());
                accepted = true;
                fresh_jacobian = false;
                break;
            }
        }
        if (!accepted) {
            if (fresh_jacobian)
                throw NoConvergenceError("find_tpoint: stalled with a fresh Jacobian at rho=" +
                                         std::to_string(p.rho) +
                                         " sigma=" + std::to_string(p.sigma));
            jac = fd_jacobian(p, r);
            fresh_jacobian = true;
        }
    }
    if (r.norm() < cfg.tol_tp) {
        trace.tpoint = TPoint{p, r.norm(), std::nullopt};
        trace.iterations = cfg.max_iter;
        return trace;
    }
    throw NoConvergenceError("find_tpoint: no convergence after " +
                             std::to_string(cfg.max_iter) + " iterations (residual " +
                             std::to_string(r.norm()) + ")");
}

std::vector<SweepRow> sweep(const SweepGrid& grid, double beta, const MissConfig& cfg,
                            int jobs) {
    if (grid.n_rho < 2 || grid.n_sigma < 2)
        throw DomainError("sweep: resolution must be at least 2 per axis");
    if (!(grid.rho_max >= grid.rho_min) || !(grid.sigma_max >= grid.sigma_min))
        throw DomainError("sweep: empty grid rectangle");

    const int n = grid.n_rho * grid.n_sigma;
    std::vector<SweepRow> rows(static_cast<size_t>(n));
    parallel_for(n, jobs, [&](int idx) {
        const int i = idx / grid.n_sigma;
        const int j = idx % grid.n_sigma;
        SweepRow& row = rows[static_cast<size_t>(idx)];
        row.rho = grid.rho_min + (grid.rho_max - grid.rho_min) * i / (grid.n_rho - 1);
        row.sigma = grid.sigma_min + (grid.sigma_max - grid.sigma_min) * j / (grid.n_sigma - 1);
        row.beta = beta;
        row.d_plus = row.d_minus = std::numeric_limits<double>::quiet_NaN();
        try {
            const MissDistance m = miss_distance(Params{row.rho, row.sigma, beta}, cfg);
            row.status = m.status;
            if (m.status == MissStatus::ok) {
                row.d_plus = m.d_plus;
                row.d_minus = m.d_minus;
            }
        } catch (const DomainError&) {
            row.status = MissStatus::domain_error;
        } catch (const StructureError&) {
            // Attracting wings: no 1-D stable direction to shoot along.
            row.status = MissStatus::domain_error;
        }
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "rho,sigma,beta,d_plus,d_minus,status\n";
    char buf[256];
    for (const auto& r : rows) {
        const auto fmt = [](double v) -> std::string {
            if (std::isnan(v)) return "nan";
            char b[64];
            std::snprintf(b, sizeof b, "%.17g", v);
            return b;
        };
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%s,%s\n", fmt(r.rho).c_str(),
                      fmt(r.sigma).c_str(), fmt(r.beta).c_str(), fmt(r.d_plus).c_str(),
                      fmt(r.d_minus).c_str(), to_string(r.status));
        out += buf;
    }
    return out;
}

}  // namespace lorenzknot
