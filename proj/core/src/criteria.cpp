#include "keplerkit/criteria.hpp"

#include <cmath>
#include <numbers>

#include "keplerkit/kepler.hpp"
#include "keplerkit/orbits.hpp"

namespace keplerkit::criteria {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::InfinitelyMany_via_i: return "InfinitelyMany_via_i";
    case Verdict::InfinitelyMany_via_ii: return "InfinitelyMany_via_ii";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(Stability s) {
    switch (s) {
    case Stability::Elliptic: return "Elliptic";
    case Stability::Hyperbolic: return "Hyperbolic";
    case Stability::Parabolic: return "Parabolic";
    }
    return "?";
}

CriteriaReport evaluate(const SystemParams& params, const quad::QuadOptions& opts) {
    CriteriaReport rep;
    rep.omega = params.omega;
    rep.h = params.h;
    rep.eps = params.eps;
    rep.system = params.perturbation.name;
    rep.pyramid_n = params.perturbation.pyramid_n;
    rep.omega_flipped = params.omega_flipped;
    rep.e = kepler::eccentricity(params.omega, params.h);
    rep.C = kepler::C_of_e(rep.e);
    rep.fn = quad::perturbation_functionals(params, opts);

    const double C = rep.C;
    rep.lhs = rep.fn.v_tilde;
    rep.lhs_err = rep.fn.v_tilde_err;
    const double D = rep.fn.d_f, Derr = rep.fn.d_f_err;
    if (D >= 0.0) {
        const double sqrtD = std::sqrt(D);
        rep.rhs = 2.0 * C * rep.fn.a_tilde + 0.5 * C * C * sign_of(rep.fn.e_f) * sqrtD;
        const double sqrtD_err = sqrtD > 0.0 ? 0.5 * Derr / sqrtD : std::sqrt(Derr);
        rep.rhs_err = 2.0 * C * rep.fn.a_tilde_err + 0.5 * C * C * sqrtD_err;
    } else {
        rep.rhs = 0.0;
        rep.rhs_err = 0.0;
    }

    // three-valued verdict with explicit error bars
    if (D < -Derr) {
        rep.verdict = Verdict::InfinitelyMany_via_i;
        rep.margin = -D - Derr;
    } else {
        const double gap = std::abs(rep.lhs - rep.rhs);
        const double bar = rep.lhs_err + rep.rhs_err;
        rep.margin = gap - bar;
        rep.verdict = (D >= -Derr && rep.margin > 0.0) ? Verdict::InfinitelyMany_via_ii
                                                       : Verdict::Inconclusive;
    }
    if (D > Derr)
        rep.stability = Stability::Elliptic;
    else if (D < -Derr)
        rep.stability = Stability::Hyperbolic;
    else
        rep.stability = Stability::Parabolic;
    return rep;
}

quad::Functionals ellipsoid_closed_forms(double omega, double h) {
    const double w = std::abs(omega);
    const double e = kepler::eccentricity(w, h);
    const double w2 = w * w, w4 = w2 * w2;
    quad::Functionals fn;
    fn.action = kepler::action(w, h);
    fn.vol = fn.action * fn.action;
    fn.period = kepler::period(w, h);
    fn.period_tau = 2.0 * kPi;
    fn.v_tilde = -kPi / (4.0 * w2) * e * e * (4.0 - 3.0 * e * e);
    fn.a_tilde = -kPi / w2;
    fn.t_tilde = 6.0 * kPi / w4;
    fn.e_f = 12.0 * kPi / w2;
    fn.d_f = fn.e_f * fn.e_f;
    return fn;
}

PyramidalForms pyramidal_closed_forms(double omega, double h, int n,
                                      const quad::QuadOptions& opts) {
    const double w = std::abs(omega);
    const double e = kepler::eccentricity(w, h);
    const double w2 = w * w;
    const double M = kepler::M_of_n(n);
    const double C = kepler::C_of_e(e);
    const double s = std::sqrt(1.0 - e * e);
    const double G = kepler::G_of_e(e);

    PyramidalForms out;
    out.fn.action = kepler::action(w, h);
    out.fn.vol = out.fn.action * out.fn.action;
    out.fn.period = kepler::period(w, h);
    out.fn.period_tau = 2.0 * kPi;
    out.fn.a_tilde = -M * kPi * w2 / (2.0 * s);
    out.fn.t_tilde = 0.0;
    out.fn.e_f = (2.0 * n - M) * kPi * w2 / (2.0 * s);
    out.fn.d_f = (2.0 * n - M) * (2.0 * n - M) * kPi * kPi * w2 * w2 * G * G / (4.0 * (1.0 - e * e));

    // no closed form for v_tilde: quote the quadrature value plus the bound
    SystemParams p = pyramidal_params(omega, h, 0.0, n);
    quad::HillRegion region(p, opts);
    auto vt = quad::integrate_over_hill(
        region, [&](double r, double z) { return p.perturbation.eval(r, z); }, opts);
    out.fn.v_tilde = vt.value;
    out.fn.v_tilde_err = vt.error;
    out.v_tilde_bound = kPi / 4.0 * (2.0 * n - M) * w2 * C * C - M * kPi * w2 * C / s;
    out.bound_satisfied = out.fn.v_tilde <= out.v_tilde_bound + vt.error;
    return out;
}

CrossCheckReport crosscheck(const SystemParams& params, bool include_rotation,
                            const quad::QuadOptions& opts) {
    CrossCheckReport rep;
    const std::string& sys = params.perturbation.name;
    if (sys != "ellipsoid" && sys != "pyramid")
        fail(ErrorKind::DomainError, "crosscheck needs a built-in system (ellipsoid or pyramid)");

    const auto numeric = quad::perturbation_functionals(params, opts);
    quad::Functionals ref;
    double vt_bound = 0.0;
    bool has_vt_closed = true;
    if (sys == "ellipsoid") {
        ref = ellipsoid_closed_forms(params.omega, params.h);
    } else {
        auto pf = pyramidal_closed_forms(params.omega, params.h, params.perturbation.pyramid_n, opts);
        ref = pf.fn;
        vt_bound = pf.v_tilde_bound;
        has_vt_closed = false;
    }

    auto row = [&](const std::string& name, double num, double refv, double tol) {
        CrossCheckRow r;
        r.name = name;
        r.numeric = num;
        r.reference = refv;
        r.rel_err = std::abs(num - refv) / std::max(std::abs(refv), 1.0e-6);
        r.pass = r.rel_err <= tol;
        rep.rows.push_back(r);
        rep.all_pass = rep.all_pass && r.pass;
    };
    row("a_tilde", numeric.a_tilde, ref.a_tilde, 1e-6);
    row("t_tilde", numeric.t_tilde, ref.t_tilde, 1e-6);
    row("e_f", numeric.e_f, ref.e_f, 1e-6);
    row("d_f", numeric.d_f, ref.d_f, 1e-6);
    if (has_vt_closed) {
        row("v_tilde", numeric.v_tilde, ref.v_tilde, 1e-6);
    } else {
        CrossCheckRow r;
        r.name = "v_tilde <= bound";
        r.numeric = numeric.v_tilde;
        r.reference = vt_bound;
        r.rel_err = 0.0;
        r.pass = numeric.v_tilde <= vt_bound + numeric.v_tilde_err;
        rep.rows.push_back(r);
        rep.all_pass = rep.all_pass && r.pass;
    }

    if (include_rotation) {
        // central difference of the rotation number at eps_fd, against
        // sign(E) sqrt(D) / (2 pi omega^2)
        const double eps_fd = 1e-3;
        SystemParams plus = params;
        plus.eps = eps_fd;
        SystemParams minus = negated_eps_view(plus);
        const auto rp = orbits::rotation_number(plus);
        const auto rm = orbits::rotation_number(minus);
        const double drot = (rp.rot - rm.rot) / (2.0 * eps_fd);
        const double w2 = params.omega * params.omega;
        const double formula =
            numeric.d_f >= 0.0
                ? sign_of(numeric.e_f) * std::sqrt(numeric.d_f) / (2.0 * kPi * w2)
                : 0.0;
        CrossCheckRow r;
        r.name = "dRot/deps";
        r.numeric = drot;
        r.reference = formula;
        r.rel_err = std::abs(drot - formula) / std::max(std::abs(formula), 1e-12);
        r.pass = r.rel_err <= 1e-2;
        rep.rows.push_back(r);
        rep.all_pass = rep.all_pass && r.pass;
    }
    return rep;
}

} // namespace keplerkit::criteria
