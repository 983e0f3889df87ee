#pragma once

namespace keplerkit::kepler {

/// Closed-form scalars of the unperturbed problem on a compact energy surface.
/// Each quantity is kept as a separate pure function so any of them can serve
/// as an independent oracle; Scalars just bundles them.
struct Scalars {
    double e;                // eccentricity, sqrt(1 + 2 h omega^2)
    double a;                // semi-major axis, omega^2 / (1 - e^2)
    double r_min, r_max;     // Hill radii omega^2/(1 +- e)
    double action;           // 2 pi omega (1/sqrt(1-e^2) - 1)
    double volume;           // action^2
    double C;                // 1/sqrt(1-e^2) - 1
    double circular_brake_r; // omega / sqrt(-2h)
};

double eccentricity(double omega, double h);
double semi_major_axis(double omega, double h);
double action(double omega, double h);
double volume(double omega, double h);
double C_of_e(double e);
/// t-period of every orbit on the surface, 2 pi a^(3/2)
double period(double omega, double h);
Scalars scalars(double omega, double h);

/// r(theta) = omega^2 / (1 + e cos theta)
double orbit_radius(double theta, double omega, double h);

/// Radial momentum at the first downward section crossing of the orbit
/// launched from rest at the boundary point with r-coordinate r0:
/// (omega^2 + 2 h r0^2) / (2 omega r0)
double brake_pr_oracle(double r0, double omega, double h);

/// Height of the upper Hill boundary over r, for r in (r_min, r_max)
double hill_boundary_z(double r, double omega, double h);

/// M(n) = 1/2 sum_{i=1}^{n-1} csc(i pi / n), summed in (i, n-i) pairs
double M_of_n(int n);

/// G(e) = sqrt(1 - (e/(1+sqrt(1-e^2)))^4)
double G_of_e(double e);

/// int_0^pi cos(n t)/(1 + e cos t) dt = pi/sqrt(1-e^2) * (-e/(1+sqrt(1-e^2)))^n
double cosine_series_integral(int n, double e);

/// energy for a requested eccentricity at given omega (test/sweep helper)
double energy_for_eccentricity(double e, double omega);

} // namespace keplerkit::kepler
