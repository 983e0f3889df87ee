#pragma once

#include <vector>

#include "keplerkit/flow.hpp"
#include "keplerkit/model.hpp"

namespace keplerkit::orbits {

/// The periodic orbit confined to the (p_r, r)-plane.
struct PlanarOrbit {
    double r1 = 0.0, r2 = 0.0;  // turning points
    double period_t = 0.0;      // period in time t (measured by event return)
    double period_tau = 0.0;    // period in rescaled time
    double closure_residual = 0.0;
    double energy_residual = 0.0;
    std::vector<double> t, tau;
    std::vector<double> p_r, r;
    std::vector<double> coeff; // omega^2 + eps d2(rho^2 f)/dphi^2 along samples
};
PlanarOrbit planar_orbit(const SystemParams& params, const flow::IntegrateOptions& opts = {});

struct RotationResult {
    double rot = 0.0;        // Seifert-normalized rotation number of the transverse subsystem
    double mean_index = 0.0; // winding / (pi * periods)
    flow::EigenKind stability = flow::EigenKind::Parabolic;
    int periods_used = 0;
    double error_estimate = 0.0;
    double monodromy_trace = 0.0;
    double monodromy_det = 0.0;
};
RotationResult rotation_number(const SystemParams& params, int periods = 64,
                               const flow::IntegrateOptions& opts = {});

struct BrakeOrbit {
    double r0 = 0.0;          // ray-chart parameter of the launch boundary point
    PhaseState launch{};      // rest point on the (perturbed) upper Hill boundary
    PhaseState crossing{};    // first downward section crossing, p_r ~ 0
    double t_cross = 0.0;
    double period = 0.0;      // 4 * t_cross by the two reversal symmetries
    double symmetry_residual = 0.0;
    double rest_momentum = 0.0; // max |p| over the two rest points
    int link_count = 0;         // transverse downward section crossings per period
    double shoot_residual = 0.0;
    flow::Trajectory trajectory; // one full period from the launch point
};

struct ShootOptions {
    flow::IntegrateOptions integ{};
    double root_tol = 1e-12;
    double continuation_step = 1e-3;
    double tangent_tol = 1e-8;  // |p_z| below this at a crossing is tangential
    double symmetry_tol = 1e-7; // residual above this raises SymmetryResidual
};

/// p_r at the first downward section crossing for a launch from the boundary
/// point on the ray through the eps=0 boundary point with r-coordinate r_chart.
double brake_miss_distance(double r_chart, const SystemParams& params,
                           const ShootOptions& opts = {});
/// The perturbed boundary point on that ray.
PhaseState boundary_launch_state(double r_chart, const SystemParams& params);

BrakeOrbit shoot_brake_orbit(const SystemParams& params, const ShootOptions& opts = {});

/// Signed count of transverse crossings through the interior of the downward
/// section disk per period of `traj`.
int section_crossing_count(const flow::Trajectory& traj, const SystemParams& params,
                           double tangent_tol = 1e-8);
int hopf_link_check(const BrakeOrbit& brake, const PlanarOrbit& planar,
                    const SystemParams& params, double tangent_tol = 1e-8);

} // namespace keplerkit::orbits
