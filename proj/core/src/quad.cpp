#include "keplerkit/quad.hpp"

#include <cmath>
#include <numbers>

#include "keplerkit/kepler.hpp"
#include "keplerkit/numerics.hpp"

namespace keplerkit::quad {

namespace {

constexpr double kPi = std::numbers::pi;

void require_compact_kepler(const SystemParams& p) {
    const double x = 2.0 * p.h * p.omega * p.omega;
    if (!(x > -1.0 && x < 0.0))
        fail(ErrorKind::NotCompact, "parameters outside the compact window at eps=0");
}

} // namespace

HillRegion::HillRegion(SystemParams params, const QuadOptions& opts)
    : params_(std::move(params)), opts_(opts), r_ref_(params_.omega * params_.omega) {
    require_compact_kepler(params_);
    const auto ks = kepler::scalars(params_.omega, params_.h);
    cap_ = opts_.ray_cap_factor * ks.r_max;
    // resolve the axis extents, then scan for the z extent
    r_max_ = r_ref_ + boundary_radius(0.0);
    r_min_ = r_ref_ - boundary_radius(kPi);
    if (!(r_min_ > 0.45 * r_ref_))
        fail(ErrorKind::NotCompact, "inner Hill radius fell at or below omega^2/2");
    z_max_ = 0.0;
    for (int i = 1; i < 64; ++i) {
        const double psi = kPi * i / 64.0;
        auto [r, z] = boundary_point(psi);
        z_max_ = std::max(z_max_, z);
    }
}

double HillRegion::boundary_radius(double psi) const {
    const double cx = std::cos(psi), sx = std::sin(psi);
    auto g = [&](double s) {
        const double r = r_ref_ + s * cx;
        const double z = s * sx;
        if (!(r > 0.0)) return 1e30; // past the axis: treat as outside
        return effective_potential(r, z, params_) - params_.h;
    };
    if (!(g(0.0) < 0.0))
        fail(ErrorKind::NotCompact, "reference point (omega^2, 0) is not interior");
    double lo = 0.0, hi = 0.25 * r_ref_;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap_) fail(ErrorKind::NotCompact, "no Hill boundary within the radius cap");
    }
    const double s =
        numerics::find_root([&](double x) { return g(x); }, lo, hi, 1e-15 * std::max(1.0, hi));
    return s;
}

std::pair<double, double> HillRegion::boundary_point(double psi) const {
    const double s = boundary_radius(psi);
    return {r_ref_ + s * std::cos(psi), s * std::sin(psi)};
}

double HillRegion::boundary_residual(double psi) const {
    auto [r, z] = boundary_point(psi);
    return std::abs(effective_potential(r, z, params_) - params_.h);
}

HillRegion hill_region(const SystemParams& params, const QuadOptions& opts) {
    return HillRegion(params, opts);
}

ValueErr integrate_over_hill(const HillRegion& region,
                             const std::function<double(double, double)>& g,
                             const QuadOptions& opts, bool half_plane_doubling) {
    // Rays from (omega^2, 0): midpoint rule in the angle (spectral for smooth
    // periodic integrands), Gauss-Legendre along each ray. The integrand is
    // z-symmetric, so the upper half is integrated and doubled.
    const double r_ref = region.r_ref();
    const auto& radial = numerics::gl_rule(opts.radial_nodes);
    const double span = half_plane_doubling ? kPi : 2.0 * kPi;
    auto level = [&](int m) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            const double psi = span * (j + 0.5) / m;
            const double cx = std::cos(psi), sx = std::sin(psi);
            const double R = region.boundary_radius(psi);
            double inner = 0.0;
            for (std::size_t q = 0; q < radial.x.size(); ++q) {
                const double s = 0.5 * R * (1.0 + radial.x[q]);
                inner += radial.w[q] * g(r_ref + s * cx, s * sx) * s;
            }
            sum += inner * 0.5 * R;
        }
        return (half_plane_doubling ? 2.0 : 1.0) * (span / m) * sum;
    };
    ValueErr out;
    double prev = level(opts.angular_start);
    for (int m = 2 * opts.angular_start; m <= opts.angular_max; m *= 2) {
        const double cur = level(m);
        out.value = cur;
        out.error = std::abs(cur - prev);
        if (out.error <= opts.rel_tol_2d * std::max(1e-300, std::abs(cur))) return out;
        prev = cur;
    }
    fail(ErrorKind::QuadratureFailure, "2D Hill-region quadrature did not converge");
}

ValueErr contact_volume(const SystemParams& params, const QuadOptions& opts) {
    HillRegion region(params, opts);
    // integrand = -2 (V_eff - h); vanishes on the boundary to first order
    auto g = [&](double r, double z) { return -2.0 * (effective_potential(r, z, params) - params.h); };
    ValueErr v = integrate_over_hill(region, g, opts);
    v.value *= 2.0 * kPi;
    v.error *= 2.0 * kPi;
    return v;
}

std::pair<double, double> planar_turning_points(const SystemParams& params) {
    require_compact_kepler(params);
    const auto ks = kepler::scalars(params.omega, params.h);
    auto Q = [&](double r) {
        return r > 1e-12 ? 2.0 * (params.h - planar_potential(r, params)) : -1e30;
    };
    const double mid = 0.5 * (ks.r_min + ks.r_max);
    if (!(Q(mid) > 0.0))
        fail(ErrorKind::TurningPointFailure, "no classically allowed band near the Kepler radii");
    // walk down from the Kepler radius until the centrifugal wall is felt;
    // going too far would enter the region where eps f overwhelms it
    double lo = ks.r_min;
    while (Q(lo) > 0.0) {
        lo *= 0.85;
        if (lo < 0.3 * ks.r_min)
            fail(ErrorKind::TurningPointFailure, "inner turning point not bracketed");
    }
    const double r1 = numerics::find_root(Q, lo, mid, 1e-15 * ks.r_max);
    double hi = ks.r_max * 1.02;
    while (Q(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e3 * ks.r_max)
            fail(ErrorKind::TurningPointFailure, "outer turning point not bracketed");
    }
    const double r2 = numerics::find_root(Q, mid, hi, 1e-15 * ks.r_max);
    if (!(r1 < r2)) fail(ErrorKind::TurningPointFailure, "turning points do not bracket");
    return {r1, r2};
}

ActionPeriod action_and_period(const SystemParams& params, const QuadOptions& opts) {
    ActionPeriod out;
    auto [r1, r2] = planar_turning_points(params);
    out.r1 = r1;
    out.r2 = r2;
    const double c = 0.5 * (r1 + r2), w = 0.5 * (r2 - r1);
    auto Q = [&](double r) { return 2.0 * (params.h - planar_potential(r, params)); };
    // r = c + w sin u maps the simple turning-point zeros of Q to cos^2 u,
    // leaving the smooth factor S >= 0: Q(r(u)) = w^2 cos^2(u) S(u).
    auto S = [&](double u) {
        const double cu = std::cos(u);
        const double r = c + w * std::sin(u);
        return Q(r) / (w * w * cu * cu);
    };
    auto run = [&](const std::function<double(double)>& f, double& val, double& err) {
        auto q = numerics::integrate_gl_doubling(f, -0.5 * kPi, 0.5 * kPi, opts.abs_tol_1d,
                                                 0.25 * opts.abs_tol_1d);
        if (!q.converged) fail(ErrorKind::QuadratureFailure, "turning-point quadrature stalled");
        val = 2.0 * q.value;
        err = 2.0 * q.error;
    };
    run([&](double u) {
        const double cu = std::cos(u);
        return w * w * cu * cu * std::sqrt(std::max(0.0, S(u)));
    }, out.action, out.action_err);
    run([&](double u) { return 1.0 / std::sqrt(std::max(1e-300, S(u))); }, out.period_t,
        out.period_t_err);
    run([&](double u) {
        const double r = c + w * std::sin(u);
        return (params.omega / (r * r)) / std::sqrt(std::max(1e-300, S(u)));
    }, out.period_tau, out.period_tau_err);
    return out;
}

Functionals perturbation_functionals(const SystemParams& params, const QuadOptions& opts) {
    require_compact_kepler(params);
    Functionals out;
    out.fd_partials = params.perturbation.finite_difference_partials;

    const auto ap = action_and_period(params, opts);
    out.action = ap.action;
    out.action_err = ap.action_err;
    out.period = ap.period_t;
    out.period_err = ap.period_t_err;
    out.period_tau = ap.period_tau;
    out.period_tau_err = ap.period_tau_err;

    const auto vol = contact_volume(params, opts);
    out.vol = vol.value;
    out.vol_err = vol.error;

    const Perturbation& f = params.perturbation;
    if (f.is_zero()) return out;

    // first-order functionals live on the eps=0 orbit family
    SystemParams base = params;
    base.eps = 0.0;
    const double w = params.omega;
    const double e = kepler::eccentricity(w, params.h);
    auto rtheta = [&](double th) { return w * w / (1.0 + e * std::cos(th)); };

    auto theta_integral = [&](const std::function<double(double)>& g, double& val, double& err) {
        auto q = numerics::integrate_gk(g, 0.0, kPi, opts.abs_tol_1d, 0.0);
        if (!q.converged) fail(ErrorKind::QuadratureFailure, "theta integral did not converge");
        val = q.value;
        err = q.error;
    };

    theta_integral([&](double th) {
        const double r = rtheta(th);
        return r * r * f.eval(r, 0.0);
    }, out.a_tilde, out.a_tilde_err);

    theta_integral([&](double th) {
        const double r = rtheta(th);
        return r * r * f.fr(r, 0.0) * std::cos(th);
    }, out.t_tilde, out.t_tilde_err);
    out.t_tilde *= 2.0 / e;
    out.t_tilde_err *= 2.0 / e;

    double i0 = 0.0, i0_err = 0.0, i2 = 0.0, i2_err = 0.0;
    theta_integral([&](double th) {
        const double r = rtheta(th);
        return r * r * f.dphi2(r);
    }, i0, i0_err);
    theta_integral([&](double th) {
        const double r = rtheta(th);
        return r * r * f.dphi2(r) * std::cos(2.0 * th);
    }, i2, i2_err);
    out.e_f = i0 + w * w * out.t_tilde;
    out.e_f_err = i0_err + w * w * out.t_tilde_err;
    out.d_f = out.e_f * out.e_f - i2 * i2;
    out.d_f_err = 2.0 * std::abs(out.e_f) * out.e_f_err + 2.0 * std::abs(i2) * i2_err;

    HillRegion kepler_region(base, opts);
    auto vt = integrate_over_hill(kepler_region, [&](double r, double z) { return f.eval(r, z); },
                                  opts);
    out.v_tilde = vt.value;
    out.v_tilde_err = vt.error;
    return out;
}

SelfTestReport integral_selftests(const QuadOptions& opts) {
    SelfTestReport rep;
    auto check = [&](const std::string& name, double computed, double expected) {
        SelfTestCase c;
        c.name = name;
        c.computed = computed;
        c.expected = expected;
        c.abs_err = std::abs(computed - expected);
        c.pass = c.abs_err <= 1e-10;
        rep.cases.push_back(c);
        rep.all_pass = rep.all_pass && c.pass;
    };
    auto gk = [&](const std::function<double(double)>& f, double a, double b) {
        auto q = numerics::integrate_gk(f, a, b, std::min(1e-12, opts.abs_tol_1d), 0.0);
        return q.value;
    };
    for (double a : {0.1, 0.25, 0.5, 0.9}) {
        check("cos^2/(cos^2+a sin^2), a=" + std::to_string(a),
              gk([a](double t) {
                  const double ct = std::cos(t), st = std::sin(t);
                  return ct * ct / (ct * ct + a * st * st);
              }, -0.5 * kPi, 0.5 * kPi),
              kPi / (1.0 + std::sqrt(a)));
        check("cos^2/(1+a sin), a=" + std::to_string(a),
              gk([a](double t) {
                  const double ct = std::cos(t);
                  return ct * ct / (1.0 + a * std::sin(t));
              }, -0.5 * kPi, 0.5 * kPi),
              kPi / (1.0 + std::sqrt(1.0 - a * a)));
    }
    for (int n : {0, 1, 2, 4})
        for (double e : {0.1, 0.5, 0.9})
            check("cos(nt)/(1+e cos t), n=" + std::to_string(n) + " e=" + std::to_string(e),
                  gk([n, e](double t) { return std::cos(n * t) / (1.0 + e * std::cos(t)); }, 0.0,
                     kPi),
                  kepler::cosine_series_integral(n, e));
    return rep;
}

} // namespace keplerkit::quad
