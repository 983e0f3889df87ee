#pragma once

#include <functional>
#include <string>

#include "keplerkit/error.hpp"

namespace keplerkit {

/// A point (p_r, p_z, r, z) on the reduced phase space.
struct PhaseState {
    double p_r = 0.0;
    double p_z = 0.0;
    double r = 0.0;
    double z = 0.0;
};

/// Axially and z-reflection symmetric perturbation family, reduced to its
/// leading term f(r, z) with the partial derivatives the functionals need.
/// Missing partials fall back to central finite differences and set
/// finite_difference_partials so reports can flag it.
struct Perturbation {
    using Fn = std::function<double(double, double)>;

    std::string name = "zero";
    int pyramid_n = 0; // 0 unless this is a pyramidal family

    Fn f;
    Fn df_dr, df_dz, d2f_dz2;  // first-order machinery
    Fn d2f_dr2, d2f_drdz;      // only needed by the 4x4 variational cross-checks
    bool finite_difference_partials = false;

    double eval(double r, double z) const;
    double fr(double r, double z) const;
    double fz(double r, double z) const;
    double fzz(double r, double z) const;
    double frr(double r, double z) const;
    double frz(double r, double z) const;

    /// Angular second derivative at the equatorial plane,
    /// d^2f/dphi^2|_{phi=0} = r^2 f_zz(r,0) - r f_r(r,0).
    double dphi2(double r) const { return r * r * fzz(r, 0.0) - r * fr(r, 0.0); }

    bool is_zero() const { return !static_cast<bool>(f); }
};

Perturbation zero_perturbation();
Perturbation make_ellipsoid_perturbation();
Perturbation make_pyramidal_perturbation(int n);
Perturbation negated(const Perturbation& p);
Perturbation scaled(const Perturbation& p, double factor);
/// Same f, but with all analytic partials stripped (finite-difference fallback).
Perturbation with_fd_partials(const Perturbation& p);

/// The triple (omega, h, eps) plus a perturbation family.
struct SystemParams {
    double omega = 1.0; // z-axis angular momentum, normalized > 0
    double h = -0.375;  // energy
    double eps = 0.0;   // perturbation scale, 0 <= eps < 1
    Perturbation perturbation;
    bool omega_flipped = false; // input omega was negative and mapped to -omega
};

SystemParams make_params(double omega, double h, double eps, Perturbation pert);
SystemParams kepler_params(double omega, double h);
SystemParams ellipsoid_params(double omega, double h, double eps);
SystemParams pyramidal_params(double omega, double h, double eps, int n);
/// Same system with the perturbation negated (equivalent to eps -> -eps).
SystemParams negated_eps_view(const SystemParams& p);

enum class EnergySurfaceClass { Empty, Point, CompactS3, Unbounded };
const char* to_string(EnergySurfaceClass c);

double hamiltonian(const PhaseState& s, const SystemParams& p);
/// omega^2/(2 r^2) - 1/sqrt(r^2+z^2) + eps f(r,z)
double effective_potential(double r, double z, const SystemParams& p);
/// omega^2/(2 r^2) - 1/r + eps f(r,0)
double planar_potential(double r, const SystemParams& p);

EnergySurfaceClass classify_kepler_surface(double omega, double h, double boundary_tol = 1e-12);
EnergySurfaceClass classify_pyramidal_surface(double omega, double h, double eps, int n,
                                              double boundary_tol = 1e-12);

} // namespace keplerkit
