#pragma once

#include <string>
#include <utility>
#include <vector>

#include "keplerkit/model.hpp"

namespace keplerkit::quad {

struct QuadOptions {
    double abs_tol_1d = 1e-10;
    double rel_tol_2d = 1e-8;
    double boundary_tol = 1e-11; // |V - h| at boundary points
    double ray_cap_factor = 64.0; // boundary search cap, x Kepler r_max
    int angular_start = 32;       // first midpoint-rule level (upper half-plane)
    int angular_max = 2048;
    int radial_nodes = 48;
};

/// Hill region of one parameter set, star-shaped about (omega^2, 0);
/// the boundary is resolved by root-finding along rays on demand.
class HillRegion {
public:
    HillRegion(SystemParams params, const QuadOptions& opts);

    const SystemParams& params() const { return params_; }
    double r_ref() const { return r_ref_; }
    /// distance from (omega^2, 0) to the boundary along direction psi
    double boundary_radius(double psi) const;
    /// boundary point (r, z) along direction psi
    std::pair<double, double> boundary_point(double psi) const;
    /// |V_eff - h| at the resolved boundary point
    double boundary_residual(double psi) const;

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    double z_extent() const { return z_max_; }

private:
    SystemParams params_;
    QuadOptions opts_;
    double r_ref_;
    double cap_;
    double r_min_, r_max_, z_max_;
};

HillRegion hill_region(const SystemParams& params, const QuadOptions& opts = {});

struct ValueErr {
    double value = 0.0;
    double error = 0.0;
};

/// Contact volume 2*pi * iint_H (2h - w^2/r^2 + 2/sqrt(r^2+z^2) - 2 eps f) dr dz
ValueErr contact_volume(const SystemParams& params, const QuadOptions& opts = {});

/// iint_H g(r, z) dr dz over the Hill region of `params`
ValueErr integrate_over_hill(const HillRegion& region,
                             const std::function<double(double, double)>& g,
                             const QuadOptions& opts = {}, bool half_plane_doubling = true);

/// Turning points of the planar problem: roots of 2(h - V_pl(r)) bracketing
/// the Kepler radii.
std::pair<double, double> planar_turning_points(const SystemParams& params);

struct ActionPeriod {
    double action = 0.0, action_err = 0.0;
    double period_t = 0.0, period_t_err = 0.0;     // period in physical time
    double period_tau = 0.0, period_tau_err = 0.0; // period in rescaled time
    double r1 = 0.0, r2 = 0.0;                     // turning points
};
ActionPeriod action_and_period(const SystemParams& params, const QuadOptions& opts = {});

/// All scalar functionals of one system: the contact volume / action /
/// periods at the given eps plus the first-order perturbation functionals
/// (evaluated on the unperturbed orbit family).
struct Functionals {
    double vol = 0.0, vol_err = 0.0;
    double action = 0.0, action_err = 0.0;
    double period = 0.0, period_err = 0.0;         // time t
    double period_tau = 0.0, period_tau_err = 0.0; // rescaled time
    double v_tilde = 0.0, v_tilde_err = 0.0;
    double a_tilde = 0.0, a_tilde_err = 0.0;
    double t_tilde = 0.0, t_tilde_err = 0.0;
    double e_f = 0.0, e_f_err = 0.0;
    double d_f = 0.0, d_f_err = 0.0;
    bool fd_partials = false;
};
Functionals perturbation_functionals(const SystemParams& params, const QuadOptions& opts = {});

struct SelfTestCase {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double abs_err = 0.0;
    bool pass = false;
};
struct SelfTestReport {
    std::vector<SelfTestCase> cases;
    bool all_pass = true;
};
/// Quadrature engine against closed-form integrals; abs err <= 1e-10 each.
SelfTestReport integral_selftests(const QuadOptions& opts = {});

} // namespace keplerkit::quad
