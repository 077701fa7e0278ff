#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lorenzknot/equilibria.hpp"

namespace lorenzknot {

enum class MissStatus { ok, domain_error, undefined_distance, no_section, step_failure };

const char* to_string(MissStatus s);

/// How far the two heteroclinic connections are from existing, measured in
/// the section plane z = rho-1: the first crossing of each unstable branch
/// of the origin is compared against the first backward crossing of the
/// nearer inward stable branch of p±. Both distances vanish exactly at a
/// T-point, and d_plus = d_minus by the symmetry of the equations.
struct MissDistance {
    MissStatus status{MissStatus::ok};
    double d_plus{0.0};
    double d_minus{0.0};
    Vec3 witness_plus{Vec3::Zero()};   // section crossing of the (+) unstable branch
    Vec3 witness_minus{Vec3::Zero()};
    EquilibriumKind paired_plus{EquilibriumKind::p_plus};   // whose stable branch is nearest
    EquilibriumKind paired_minus{EquilibriumKind::p_minus};
    Vec2 offset_plus{Vec2::Zero()};    // signed section offsets, the root-finder residual
};

struct MissConfig {
    double tol{1e-10};
    double eps_rel{1e-6};
    double horizon_unstable{30.0};
    double horizon_stable{30.0};
};

MissDistance miss_distance(const Params& p, const MissConfig& cfg = {});

struct TPoint {
    Params params;
    double residual{0.0};
    std::optional<std::string> knot_hint;
};

struct TPointTrace {
    TPoint tpoint;
    std::vector<double> accepted_residuals;  // strictly decreasing by construction
    int iterations{0};
};

struct TPointConfig {
    double tol_tp{1e-8};
    int max_iter{50};
    double fd_step_rel{1e-5};
    MissConfig miss{};
};

/// Solves the two signed section offsets to zero over (rho, sigma) at fixed
/// beta by a Broyden update with a finite-difference initial Jacobian and
/// backtracking damping. Throws NoConvergenceError after max_iter, and
/// DomainError if the iteration leaves rho > 1.
TPointTrace find_tpoint(const Params& guess, double beta, const TPointConfig& cfg = {});

struct SweepGrid {
    double rho_min, rho_max;
    double sigma_min, sigma_max;
    int n_rho, n_sigma;  // >= 2 each
};

struct SweepRow {
    double rho, sigma, beta;
    MissStatus status;
    double d_plus, d_minus;
};

/// Evaluates miss_distance at every grid node. Rows are in row-major order
/// (rho outer, sigma inner) regardless of the worker count; per-cell errors
/// are recorded in the row, never thrown.
std::vector<SweepRow> sweep(const SweepGrid& grid, double beta, const MissConfig& cfg = {},
                            int jobs = 1);

/// CSV with header rho,sigma,beta,d_plus,d_minus,status. Shortest
/// round-trip float formatting, byte-stable across worker counts.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lorenzknot
