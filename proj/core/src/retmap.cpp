#include "keplerkit/retmap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "keplerkit/kepler.hpp"
#include "keplerkit/quad.hpp"

namespace keplerkit::retmap {

namespace {

struct DiskGeometry {
    double r1, r2;      // planar turning points
    double scale;       // diameter in r
    double pmax(const SystemParams& p, double r) const {
        const double q = 2.0 * (p.h - planar_potential(r, p));
        return q > 0.0 ? std::sqrt(q) : 0.0;
    }
};

DiskGeometry disk(const SystemParams& params) {
    auto [r1, r2] = quad::planar_turning_points(params);
    return {r1, r2, r2 - r1, };
}

} // namespace

double radicand(const SectionPoint& x, const SystemParams& params) {
    return 2.0 * (params.h - planar_potential(x.r, params)) - x.p_r * x.p_r;
}

PhaseState lift(const SectionPoint& x, const SystemParams& params, double boundary_margin) {
    const double rad = radicand(x, params);
    if (!(rad > boundary_margin))
        fail(ErrorKind::BoundaryTooClose, "section point is on or outside the boundary orbit");
    return PhaseState{x.p_r, -std::sqrt(rad), x.r, 0.0};
}

ReturnResult first_return(const SectionPoint& x, const SystemParams& params,
                          const ReturnOptions& opts) {
    const PhaseState start = lift(x, params, opts.boundary_margin);
    const double t_cap = opts.t_cap_periods * flow::reference_period(params);
    auto stop = flow::integrate_until(start, params, flow::EventKind::ZCrossMinus, t_cap, opts.integ);
    if (!stop.found)
        fail(ErrorKind::NoReturn, "no section return within the time cap");
    ReturnResult out;
    out.image = SectionPoint{stop.event.state.r, stop.event.state.p_r};
    out.return_time = stop.event.t;
    return out;
}

ReturnResult first_return_with_jacobian(const SectionPoint& x, const SystemParams& params,
                                        const ReturnOptions& opts) {
    ReturnResult out = first_return(x, params, opts);
    const DiskGeometry g = disk(params);
    // step shrinks near the boundary so probe points stay inside the disk
    const double dist = radicand(x, params);
    double step = opts.jacobian_step * g.scale;
    step = std::min(step, 0.05 * dist / std::max(1.0, std::abs(x.p_r) + 1.0));
    std::array<double, 4> jac{};
    for (int j = 0; j < 2; ++j) {
        SectionPoint xp = x, xm = x;
        (j == 0 ? xp.r : xp.p_r) += step;
        (j == 0 ? xm.r : xm.p_r) -= step;
        const auto fp = first_return(xp, params, opts);
        const auto fm = first_return(xm, params, opts);
        jac[0 * 2 + j] = (fp.image.r - fm.image.r) / (2.0 * step);
        jac[1 * 2 + j] = (fp.image.p_r - fm.image.p_r) / (2.0 * step);
    }
    out.jacobian = jac;
    out.jacobian_det = jac[0] * jac[3] - jac[1] * jac[2];
    return out;
}

SectionPoint return_k(const SectionPoint& x, int k, const SystemParams& params,
                      const ReturnOptions& opts, double* time_total) {
    SectionPoint cur = x;
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
        const auto r = first_return(cur, params, opts);
        cur = r.image;
        acc += r.return_time;
    }
    if (time_total) *time_total = acc;
    return cur;
}

ReturnResult inverse_return(const SectionPoint& x, const SystemParams& params,
                            const ReturnOptions& opts) {
    // H is even in the momenta, so flipping them reverses time; the previous
    // downward crossing becomes the next upward crossing of the flipped state.
    PhaseState start = lift(x, params, opts.boundary_margin);
    start.p_r = -start.p_r;
    start.p_z = -start.p_z;
    const double t_cap = opts.t_cap_periods * flow::reference_period(params);
    auto stop = flow::integrate_until(start, params, flow::EventKind::ZCrossPlus, t_cap, opts.integ);
    if (!stop.found) fail(ErrorKind::NoReturn, "no backward section return within the time cap");
    ReturnResult out;
    out.image = SectionPoint{stop.event.state.r, -stop.event.state.p_r};
    out.return_time = stop.event.t;
    return out;
}

AreaReport area_preservation_test(const SystemParams& params, const GridSpec& grid,
                                  const ReturnOptions& opts) {
    const DiskGeometry g = disk(params);
    AreaReport rep;
    rep.grid = grid;
    rep.min_return_time = 1e300;
    for (int i = 0; i < grid.n_r; ++i) {
        const double fr = (i + 0.5) / grid.n_r;
        const double r = g.r1 + (g.r2 - g.r1) * (grid.margin + (1.0 - 2.0 * grid.margin) * fr);
        const double pm = g.pmax(params, r);
        if (pm <= 0.0) continue;
        for (int j = 0; j < grid.n_p; ++j) {
            const double fp = (j + 0.5) / grid.n_p;
            const double pr = -pm * (1.0 - 2.0 * grid.margin) + 2.0 * pm * (1.0 - 2.0 * grid.margin) * fp;
            SectionPoint x{r, pr};
            if (radicand(x, params) < 1e-3 * g.scale) continue; // stay clear of the boundary
            const auto res = first_return_with_jacobian(x, params, opts);
            rep.rows.push_back({x, res.jacobian_det, res.return_time});
            rep.max_abs_det_minus_1 =
                std::max(rep.max_abs_det_minus_1, std::abs(res.jacobian_det - 1.0));
            rep.min_return_time = std::min(rep.min_return_time, res.return_time);
        }
    }
    return rep;
}

namespace {

struct NewtonOutcome {
    bool converged = false;
    SectionPoint x{};
    double residual = 0.0;
    double time_k = 0.0;
};

NewtonOutcome newton_periodic(const SectionPoint& seed, int k, const SystemParams& params,
                              const SearchOptions& opts, const DiskGeometry& g) {
    NewtonOutcome out;
    SectionPoint x = seed;
    const double tol = opts.newton_tol * g.scale;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
        if (radicand(x, params) < 1e-6 * g.scale * g.scale) return out; // drifted to the boundary
        double tk = 0.0;
        SectionPoint fx;
        try {
            fx = return_k(x, k, params, opts.ret, &tk);
        } catch (const Error&) {
            return out;
        }
        const double Fr = fx.r - x.r, Fp = fx.p_r - x.p_r;
        const double res = std::hypot(Fr, Fp);
        if (res <= tol) {
            out.converged = true;
            out.x = x;
            out.residual = res;
            out.time_k = tk;
            return out;
        }
        const double step = std::min(opts.newton_fd_step * g.scale,
                                     0.02 * radicand(x, params) / (1.0 + std::abs(x.p_r)));
        double J[4];
        try {
            for (int j = 0; j < 2; ++j) {
                SectionPoint xp = x, xm = x;
                (j == 0 ? xp.r : xp.p_r) += step;
                (j == 0 ? xm.r : xm.p_r) -= step;
                const SectionPoint fp = return_k(xp, k, params, opts.ret);
                const SectionPoint fm = return_k(xm, k, params, opts.ret);
                J[0 + j] = ((fp.r - xp.r) - (fm.r - xm.r)) / (2.0 * step);
                J[2 + j] = ((fp.p_r - xp.p_r) - (fm.p_r - xm.p_r)) / (2.0 * step);
            }
        } catch (const Error&) {
            return out;
        }
        const double det = J[0] * J[3] - J[1] * J[2];
        if (std::abs(det) < 1e-14) return out;
        double dr = (-Fr * J[3] + Fp * J[1]) / det;
        double dp = (-Fp * J[0] + Fr * J[2]) / det;
        const double nrm = std::hypot(dr, dp);
        const double cap = 0.15 * g.scale;
        if (nrm > cap) {
            dr *= cap / nrm;
            dp *= cap / nrm;
        }
        x.r += dr;
        x.p_r += dp;
        if (!(x.r > 0.5 * g.r1 && x.r < 1.5 * g.r2)) return out;
    }
    return out;
}

} // namespace

SearchReport find_periodic_points(const SystemParams& params, const SearchOptions& opts) {
    SearchReport rep;
    rep.opts = opts;
    const DiskGeometry g = disk(params);

    // seed list: brake fixed point surrogate (the symmetry axis near the
    // circular radius), a coarse interior grid, then seeded random points
    std::vector<SectionPoint> seeds;
    seeds.push_back({params.omega / std::sqrt(-2.0 * params.h), 0.0});
    seeds.push_back({-0.5 / params.h, 0.0}); // circular-orbit radius
    for (int i = 0; i < opts.grid_seeds; ++i)
        for (int j = 0; j < opts.grid_seeds; ++j) {
            const double r = g.r1 + (g.r2 - g.r1) * (i + 1.0) / (opts.grid_seeds + 1.0);
            const double pm = g.pmax(params, r);
            seeds.push_back({r, pm * (2.0 * (j + 1.0) / (opts.grid_seeds + 1.0) - 1.0) * 0.8});
        }
    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    int made = 0;
    while (made < opts.random_seeds) {
        const double r = g.r1 + (g.r2 - g.r1) * (0.02 + 0.96 * ur(rng));
        const double pm = g.pmax(params, r);
        if (pm <= 0.0) continue;
        seeds.push_back({r, (2.0 * ur(rng) - 1.0) * 0.9 * pm});
        ++made;
    }

    std::vector<PeriodicPoint> found;
    for (int k = 1; k <= opts.k_max; ++k) {
        for (const auto& s : seeds) {
            ++rep.seeds_tried;
            const auto nw = newton_periodic(s, k, params, opts, g);
            if (!nw.converged) continue;
            ++rep.converged_raw;
            found.push_back({k, nw.x, nw.time_k, nw.residual});
        }
    }

    // reduce to minimal period: if psi^m fixes x for a divisor m of k, keep m
    for (auto& pp : found) {
        for (int m = 1; m < pp.k; ++m) {
            if (pp.k % m != 0) continue;
            try {
                double tm = 0.0;
                const SectionPoint fx = return_k(pp.x, m, params, opts.ret, &tm);
                if (std::hypot(fx.r - pp.x.r, fx.p_r - pp.x.p_r) <= opts.dedup_tol * g.scale) {
                    pp.k = m;
                    pp.return_time = tm;
                    break;
                }
            } catch (const Error&) {
                break;
            }
        }
    }

    // orbit-equivalence dedup: same orbit up to cyclic returns
    std::sort(found.begin(), found.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.x.r != b.x.r) return a.x.r < b.x.r;
        return a.x.p_r < b.x.p_r;
    });
    std::vector<PeriodicPoint> unique;
    for (const auto& cand : found) {
        bool dup = false;
        for (const auto& kept : unique) {
            SectionPoint y = kept.x;
            for (int j = 0; j < std::max(kept.k, cand.k) && !dup; ++j) {
                if (std::hypot(y.r - cand.x.r, y.p_r - cand.x.p_r) <= opts.dedup_tol * g.scale)
                    dup = true;
                else {
                    try {
                        y = first_return(y, params, opts.ret).image;
                    } catch (const Error&) {
                        break;
                    }
                }
            }
            if (dup) break;
        }
        if (!dup) unique.push_back(cand);
    }
    rep.orbits = std::move(unique);
    return rep;
}

} // namespace keplerkit::retmap
