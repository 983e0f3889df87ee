#include "keplerkit/orbits.hpp"

#include <cmath>
#include <numbers>

#include "keplerkit/kepler.hpp"
#include "keplerkit/numerics.hpp"
#include "keplerkit/quad.hpp"

namespace keplerkit::orbits {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

PlanarOrbit planar_orbit(const SystemParams& params, const flow::IntegrateOptions& opts) {
    PlanarOrbit orb;
    auto [r1, r2] = quad::planar_turning_points(params);
    orb.r1 = r1;
    orb.r2 = r2;

    // Launch at the inner turning point; the plane z = p_z = 0 is exactly
    // invariant, so the 4D integrator stays planar. The period is the second
    // p_r zero (aphelion is the first).
    const PhaseState start{0.0, 0.0, r1, 0.0};
    const double t_cap = 40.0 * flow::reference_period(params);
    auto stop = flow::integrate_until(start, params, flow::EventKind::PrZero, t_cap, opts, 1);
    if (!stop.found) fail(ErrorKind::PeriodFailure, "planar orbit did not return to perihelion");
    orb.period_t = stop.event.t;
    orb.period_tau = stop.tau_at_event;
    orb.closure_residual = std::hypot(stop.event.state.p_r, stop.event.state.r - r1);
    if (orb.closure_residual > 1e-8 * std::max(1.0, r2))
        fail(ErrorKind::PeriodFailure, "planar orbit closure residual too large");

    auto traj = flow::integrate(start, params, orb.period_t, opts);
    orb.t = traj.t;
    orb.tau = traj.tau;
    orb.p_r.reserve(traj.states.size());
    orb.r.reserve(traj.states.size());
    orb.coeff.reserve(traj.states.size());
    const double w2 = params.omega * params.omega;
    double emax = 0.0;
    for (const auto& s : traj.states) {
        orb.p_r.push_back(s.p_r);
        orb.r.push_back(s.r);
        double c = w2;
        if (params.eps != 0.0 && !params.perturbation.is_zero())
            c += params.eps * s.r * s.r * params.perturbation.dphi2(s.r);
        orb.coeff.push_back(c);
        emax = std::max(emax, std::abs(hamiltonian(s, params) - params.h));
    }
    orb.energy_residual = emax;
    return orb;
}

RotationResult rotation_number(const SystemParams& params, int periods,
                               const flow::IntegrateOptions& opts) {
    if (periods < 2) fail(ErrorKind::DomainError, "rotation_number needs periods >= 2");
    const auto ap = quad::action_and_period(params);
    RotationResult out;
    out.periods_used = periods;

    const auto full = flow::variational_subsystem2(params, ap.r1, ap.period_tau, periods, opts);
    const auto half = flow::variational_subsystem2(params, ap.r1, ap.period_tau, periods / 2, opts);
    const double rot_full = full.winding / (2.0 * kPi * periods);
    const double rot_half = half.winding / (2.0 * kPi * (periods / 2));
    // Richardson in 1/m removes the leading boundary term of the winding
    out.rot = 2.0 * rot_full - rot_half;
    out.error_estimate = std::abs(rot_full - rot_half);
    out.mean_index = 2.0 * out.rot;
    out.monodromy_trace = full.monodromy.trace;
    out.monodromy_det = full.monodromy.det;
    out.stability = full.monodromy.eigen_kind;
    return out;
}

PhaseState boundary_launch_state(double r_chart, const SystemParams& params) {
    const double w2 = params.omega * params.omega;
    const double z0 = kepler::hill_boundary_z(r_chart, params.omega, params.h);
    const double dx = r_chart - w2, dz = z0;
    const double len = std::hypot(dx, dz);
    if (!(len > 0.0)) fail(ErrorKind::DomainError, "chart point coincides with (omega^2, 0)");
    const double cx = dx / len, cz = dz / len;
    auto g = [&](double s) {
        const double r = w2 + s * cx, z = s * cz;
        if (!(r > 0.0)) return 1e30;
        return effective_potential(r, z, params) - params.h;
    };
    double lo = 0.0, hi = len;
    // expand past the eps=0 boundary until the potential exceeds h
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 1.5;
        if (hi > 1e4 * len) fail(ErrorKind::NotCompact, "no perturbed boundary along the ray");
    }
    const double s = numerics::find_root(g, lo, hi, 1e-15 * std::max(1.0, len));
    return PhaseState{0.0, 0.0, w2 + s * cx, s * cz};
}

double brake_miss_distance(double r_chart, const SystemParams& params, const ShootOptions& opts) {
    const PhaseState launch = boundary_launch_state(r_chart, params);
    const double t_cap = 40.0 * flow::reference_period(params);
    auto stop =
        flow::integrate_until(launch, params, flow::EventKind::ZCrossMinus, t_cap, opts.integ);
    if (!stop.found) fail(ErrorKind::NoReturn, "no downward section crossing from the boundary");
    return stop.event.state.p_r;
}

namespace {

struct ShootSolved {
    double r0;
    double residual;
};

ShootSolved solve_at_eps(const SystemParams& params, double seed, const ShootOptions& opts) {
    auto f2 = [&](double r) { return brake_miss_distance(r, params, opts); };
    const auto ks = kepler::scalars(params.omega, params.h);
    const double slope = 2.0 * params.h / params.omega; // local slope near the root
    double a = seed - 0.02 * ks.r_max, b = seed + 0.02 * ks.r_max;
    a = std::max(a, ks.r_min * 1.001);
    b = std::min(b, ks.r_max * 0.999);
    double fa = f2(a), fb = f2(b);
    int expand = 0;
    while (fa * fb > 0.0) {
        if (++expand > 16) fail(ErrorKind::NoBracket, "brake shooting residual has no sign change");
        const double mid = 0.5 * (a + b), half = 0.7 * (b - a);
        a = std::max(mid - half, ks.r_min * 1.001);
        b = std::min(mid + half, ks.r_max * 0.999);
        fa = f2(a);
        fb = f2(b);
    }
    double root = numerics::find_root(f2, a, b, opts.root_tol * ks.r_max);
    const double res = std::abs(f2(root));
    if (!(res < 1e-3 * std::abs(slope) * ks.r_max))
        fail(ErrorKind::NoBracket, "brake shooting residual did not contract");
    return {root, res};
}

} // namespace

BrakeOrbit shoot_brake_orbit(const SystemParams& params, const ShootOptions& opts) {
    // continuation from the closed-form root of the unperturbed problem
    const double r_kepler = params.omega / std::sqrt(-2.0 * params.h);
    double seed = r_kepler;
    if (params.eps > 0.0) {
        const double de = std::min(params.eps, opts.continuation_step);
        const int steps = std::max(1, static_cast<int>(std::ceil(params.eps / de)));
        for (int i = 1; i <= steps; ++i) {
            SystemParams stage = params;
            stage.eps = params.eps * i / steps;
            seed = solve_at_eps(stage, seed, opts).r0;
        }
    } else {
        seed = solve_at_eps(params, seed, opts).r0;
    }

    BrakeOrbit bo;
    bo.r0 = seed;
    bo.launch = boundary_launch_state(seed, params);
    const double t_cap = 40.0 * flow::reference_period(params);
    auto stop =
        flow::integrate_until(bo.launch, params, flow::EventKind::ZCrossMinus, t_cap, opts.integ);
    if (!stop.found) fail(ErrorKind::NoReturn, "converged launch lost its section crossing");
    bo.crossing = stop.event.state;
    bo.t_cross = stop.event.t;
    bo.shoot_residual = std::abs(bo.crossing.p_r);
    bo.period = 4.0 * bo.t_cross;

    flow::IntegrateOptions io = opts.integ;
    io.record_samples = true;
    bo.trajectory = flow::integrate(bo.launch, params, bo.period, io);

    // z-symmetry about the crossing: xi(t0 + s) = diag(-1, 1, 1, -1) xi(t0 - s),
    // checked by re-integration at matched offsets on both sides of t0.
    double sym = 0.0;
    const int nchk = 17;
    flow::IntegrateOptions quiet = io;
    quiet.detect_events = false;
    for (int i = 1; i <= nchk; ++i) {
        const double s = bo.t_cross * i / (nchk + 1.0);
        const PhaseState plus = flow::integrate(bo.crossing, params, s, quiet).states.back();
        const PhaseState minus =
            flow::integrate(bo.launch, params, bo.t_cross - s, quiet).states.back();
        const double d = std::max(
            std::max(std::abs(plus.p_r + minus.p_r), std::abs(plus.p_z - minus.p_z)),
            std::max(std::abs(plus.r - minus.r), std::abs(plus.z + minus.z)));
        sym = std::max(sym, d);
    }
    bo.symmetry_residual = sym;
    if (sym > opts.symmetry_tol)
        fail(ErrorKind::SymmetryResidual,
             "converged brake orbit broke the z-symmetry check; integration accuracy issue");

    // rest points: launch (exact) and its mirror at 2 t_cross
    auto mid = flow::integrate(bo.launch, params, 2.0 * bo.t_cross, io);
    const PhaseState m = mid.states.back();
    bo.rest_momentum = std::hypot(m.p_r, m.p_z);
    bo.link_count = section_crossing_count(bo.trajectory, params, opts.tangent_tol);
    return bo;
}

int section_crossing_count(const flow::Trajectory& traj, const SystemParams& params,
                           double tangent_tol) {
    int count = 0;
    for (const auto& ev : traj.events) {
        if (ev.kind != flow::EventKind::ZCrossMinus) continue;
        if (std::abs(ev.state.p_z) <= tangent_tol)
            fail(ErrorKind::TangentialCrossing, "section crossing with |p_z| below tolerance");
        // interior of the disk: strictly inside the planar boundary curve
        const double rad = 2.0 * (params.h - planar_potential(ev.state.r, params)) -
                           ev.state.p_r * ev.state.p_r;
        if (rad > 0.0) ++count;
    }
    return count;
}

int hopf_link_check(const BrakeOrbit& brake, const PlanarOrbit& planar, const SystemParams& params,
                    double tangent_tol) {
    // the planar orbit is the section boundary; the brake orbit must thread it
    if (!(brake.crossing.r > planar.r1 && brake.crossing.r < planar.r2))
        fail(ErrorKind::DomainError, "brake crossing lies outside the section disk span");
    return section_crossing_count(brake.trajectory, params, tangent_tol);
}

} // namespace keplerkit::orbits
