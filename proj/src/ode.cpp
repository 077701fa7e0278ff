#include "lorenzknot/ode.hpp"

#include <algorithm>
#include <cmath>

namespace lorenzknot {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// y1 - yhat1 (5th minus embedded 4th order).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Dense-output coefficients (Hairer's contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
    double t0, h;
    Vec3 r1, r2, r3, r4, r5;

    Vec3 eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

double err_norm(const Vec3& err, const Vec3& y0, const Vec3& y1, double tol) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sk;
        sum += q * q;
    }
    return std::sqrt(sum / 3.0);
}

// Hairer's automatic initial step selection, specialized to this field.
double initial_step(const Params& p, const Vec3& y0, const Vec3& f0, double dir, double tol,
                    double hmax) {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = tol + tol * std::abs(y0[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y0[i] / sk) * (y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    const Vec3 y1 = y0 + dir * h * f0;
    const Vec3 f1 = vector_field(p, y1);
    double der2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double sk = tol + tol * std::abs(y0[i]);
        const double q = (f1[i] - f0[i]) / sk;
        der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                 : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

}  // namespace

double max_outward_flux(const Params& p, const TrappingSphere& ts, int samples) {
    // Fibonacci lattice on the sphere; deterministic.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / samples;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * M_PI * std::fmod(i / golden, 1.0);
        const Vec3 n(r * std::cos(phi), r * std::sin(phi), z);
        const Vec3 s = ts.center + ts.radius * n;
        worst = std::max(worst, vector_field(p, s).dot(n));
    }
    return worst;
}

TrappingSphere make_trapping_sphere(const Params& p) {
    validate(p);
    TrappingSphere ts;
    ts.center = Vec3(0.0, 0.0, p.rho + p.sigma);
    ts.radius = 2.0 * (p.rho + p.sigma);
    for (int i = 0; i < 40; ++i) {
        if (max_outward_flux(p, ts) < 0.0) return ts;
        ts.radius *= 2.0;
    }
    throw DomainError("trapping sphere: inward-flow test failed at all radii");
}

EventSpec sphere_exit_event(const TrappingSphere& ts, int id, bool terminal) {
    if (!(ts.radius > 0.0)) throw DomainError("sphere event: radius must be positive");
    const Vec3 c = ts.center;
    const double r2 = ts.radius * ts.radius;
    return EventSpec{[c, r2](const Vec3& s) { return (s - c).squaredNorm() - r2; },
                     id, terminal, r2};
}

EventSpec plane_event(const Vec3& normal, double offset, int id, bool terminal) {
    if (!(normal.norm() > 0.0)) throw DomainError("plane event: normal must be nonzero");
    const Vec3 n = normal;
    return EventSpec{[n, offset](const Vec3& s) { return n.dot(s) - offset; },
                     id, terminal, 1.0 + std::abs(offset)};
}

Trajectory integrate(const Params& p, const Vec3& s0, double horizon, double tol,
                     const std::vector<EventSpec>& events, const IntegrateOptions& opts) {
    validate(p);
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    if (horizon == 0.0) throw DomainError("integrate: horizon must be nonzero");
    if (!s0.allFinite()) throw DomainError("integrate: initial state must be finite");

    const double dir = horizon > 0.0 ? 1.0 : -1.0;
    const double T = std::abs(horizon);

    Trajectory traj;
    traj.direction = dir > 0.0 ? Direction::forward : Direction::backward;
    traj.samples.push_back({0.0, s0});

    std::vector<double> g_prev(events.size());
    for (size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(s0);

    // PI controller on the error per unit step (the estimate scales like
    // C*h^5, so the controlled quantity err/h is 4th order in h; this makes
    // the global error superlinear in tol).
    const double safe = 0.9, beta = 0.04, expo1 = 0.25 - beta * 0.75;
    const double facmin = 0.2, facmax = 10.0;
    double facold = 1e-4;
    bool last_rejected = false;

    double t = 0.0;  // internal nonnegative clock; sample times are dir*t
    Vec3 y = s0;
    Vec3 k1 = vector_field(p, y);
    double h = initial_step(p, y, k1, dir, tol, T);

    const double bisect_tol = 1e-10;
    const int max_steps = 50'000'000;

    for (int step = 0; step < max_steps; ++step) {
        if (t >= T) {
            traj.termination = Termination::reached_horizon;
            return traj;
        }
        h = std::min(h, T - t);
        if (h < 1e-14 * std::max(1.0, t)) {
            traj.termination = Termination::step_failure;
            return traj;
        }

        const double hs = dir * h;
        const Vec3 k2 = vector_field(p, y + hs * (a21 * k1));
        const Vec3 k3 = vector_field(p, y + hs * (a31 * k1 + a32 * k2));
        const Vec3 k4 = vector_field(p, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec3 k5 = vector_field(p, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec3 k6 =
            vector_field(p, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec3 y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const Vec3 k7 = vector_field(p, y1);
        const Vec3 err =
            hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = err_norm(err, y, y1, tol) / h;
        const double fac11 = std::pow(std::max(en, 1e-300), expo1);
        if (en > 1.0) {
            h = h / std::min(1.0 / facmin, fac11 / safe);
            last_rejected = true;
            continue;
        }

        // Accepted step: build the dense interpolant before advancing.
        DenseStep ds;
        ds.t0 = dir * t;
        ds.h = hs;
        ds.r1 = y;
        ds.r2 = y1 - y;
        ds.r3 = hs * k1 - ds.r2;
        ds.r4 = ds.r2 - hs * k7 - ds.r3;
        ds.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

        const double t_new = t + h;
        bool stop = false;
        double stop_t = 0.0;
        Vec3 stop_y = y1;

        if (!events.empty()) {
            // Scan each accepted step at 8 interior nodes for sign changes
            // and near-tangencies of every event function. Candidates are
            // collected first and committed in time order so that a terminal
            // hit truncates exactly at its crossing, regardless of the order
            // the events were supplied in.
            constexpr int kNodes = 8;
            double tg[kNodes + 1];
            Vec3 sg[kNodes + 1];
            for (int j = 0; j <= kNodes; ++j) {
                tg[j] = dir * (t + h * j / kNodes);
                sg[j] = (j == 0) ? y : (j == kNodes ? y1 : ds.eval(tg[j]));
            }
            struct Candidate {
                EventRecord rec;
                bool terminal;
            };
            std::vector<Candidate> found;
            for (size_t e = 0; e < events.size(); ++e) {
                const auto& ev = events[e];
                double gv[kNodes + 1];
                for (int j = 0; j <= kNodes; ++j) gv[j] = ev.g(sg[j]);
                for (int j = 0; j < kNodes; ++j) {
                    double ga = gv[j], gb = gv[j + 1];
                    if (ga == 0.0) ga = (j == 0) ? g_prev[e] : gv[j - 1];  // landed on surface
                    if (ga * gb < 0.0) {
                        double ta = tg[j], tb = tg[j + 1];
                        while (std::abs(tb - ta) > bisect_tol) {
                            const double tm = 0.5 * (ta + tb);
                            const double gm = ev.g(ds.eval(tm));
                            if (ga * gm <= 0.0) {
                                tb = tm;
                                gb = gm;
                            } else {
                                ta = tm;
                                ga = gm;
                            }
                        }
                        const double tc = 0.5 * (ta + tb);
                        EventRecord rec;
                        rec.t = tc;
                        rec.state = ds.eval(tc);
                        rec.event_id = ev.id;
                        rec.sign_forward = (dir * (gb - ga) > 0.0) ? 1 : -1;
                        rec.ambiguous = false;
                        found.push_back({rec, ev.terminal});
                    } else if (std::min(std::abs(ga), std::abs(gb)) < 1e-4 * ev.scale) {
                        // Near the surface without a sign change: refine the
                        // minimum of |g| on the dense output and report a
                        // grazing pass if the surface is touched.
                        double lo = tg[j], hi = tg[j + 1];
                        for (int it = 0; it < 80; ++it) {
                            const double m1 = lo + (hi - lo) / 3.0;
                            const double m2 = hi - (hi - lo) / 3.0;
                            if (std::abs(ev.g(ds.eval(m1))) < std::abs(ev.g(ds.eval(m2))))
                                hi = m2;
                            else
                                lo = m1;
                        }
                        const double tm = 0.5 * (lo + hi);
                        const double gm = ev.g(ds.eval(tm));
                        const bool dup = !found.empty() && found.back().rec.ambiguous &&
                                         found.back().rec.event_id == ev.id &&
                                         std::abs(found.back().rec.t - tm) < 1e-8;
                        if (std::abs(gm) < 1e-9 * ev.scale && !dup) {
                            EventRecord rec;
                            rec.t = tm;
                            rec.state = ds.eval(tm);
                            rec.event_id = ev.id;
                            rec.sign_forward = 0;
                            rec.ambiguous = true;
                            found.push_back({rec, false});
                        }
                    }
                }
                g_prev[e] = gv[kNodes];
            }
            std::stable_sort(found.begin(), found.end(),
                             [dir](const Candidate& a, const Candidate& b) {
                                 return dir * a.rec.t < dir * b.rec.t;
                             });
            for (const auto& cand : found) {
                traj.events.push_back(cand.rec);
                if (cand.terminal) {
                    stop = true;
                    stop_t = cand.rec.t;
                    stop_y = cand.rec.state;
                    traj.terminal_event_id = cand.rec.event_id;
                    break;
                }
            }
        }

        const auto emit = [&](double t_end, const Vec3& y_end) {
            const double t_begin = traj.samples.back().t;
            const Vec3& y_begin = traj.samples.back().state;
            if (std::isfinite(opts.max_chord)) {
                const int n = std::max(
                    1, static_cast<int>(std::ceil((y_end - y_begin).norm() / opts.max_chord)));
                for (int k = 1; k < n; ++k) {
                    const double tk = t_begin + (t_end - t_begin) * k / n;
                    traj.samples.push_back({tk, ds.eval(tk)});
                }
            }
            traj.samples.push_back({t_end, y_end});
        };

        if (stop) {
            emit(stop_t, stop_y);
            traj.termination = Termination::hit_event;
            return traj;
        }

        t = t_new;
        y = y1;
        k1 = k7;  // FSAL
        emit(dir * t, y);

        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(1.0 / facmax, std::min(1.0 / facmin, fac / safe));
        double h_new = h / fac;
        if (last_rejected) h_new = std::min(h_new, h);
        facold = std::max(en, 1e-4);
        last_rejected = false;
        h = h_new;
    }
    traj.termination = Termination::step_failure;
    return traj;
}

}  // namespace lorenzknot
