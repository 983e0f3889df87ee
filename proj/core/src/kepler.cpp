#include "keplerkit/kepler.hpp"

#include <cmath>
#include <numbers>

#include "keplerkit/error.hpp"

namespace keplerkit::kepler {

namespace {

constexpr double kPi = std::numbers::pi;

void require_compact(double omega, double h) {
    const double x = 2.0 * h * omega * omega;
    if (!(x > -1.0 && x < 0.0))
        fail(ErrorKind::DomainError, "parameters outside the compact window -1 < 2 h omega^2 < 0");
}

} // namespace

double eccentricity(double omega, double h) {
    require_compact(omega, h);
    return std::sqrt(std::max(0.0, 1.0 + 2.0 * h * omega * omega));
}

double semi_major_axis(double omega, double h) {
    require_compact(omega, h);
    return -1.0 / (2.0 * h);
}

double C_of_e(double e) { return 1.0 / std::sqrt(1.0 - e * e) - 1.0; }

double action(double omega, double h) {
    const double e = eccentricity(omega, h);
    return 2.0 * kPi * std::abs(omega) * C_of_e(e);
}

double volume(double omega, double h) {
    const double a = action(omega, h);
    return a * a;
}

double period(double omega, double h) {
    const double a = semi_major_axis(omega, h);
    return 2.0 * kPi * a * std::sqrt(a);
}

Scalars scalars(double omega, double h) {
    const double w = std::abs(omega);
    const double e = eccentricity(w, h);
    Scalars s;
    s.e = e;
    s.a = semi_major_axis(w, h);
    s.r_min = w * w / (1.0 + e);
    s.r_max = w * w / (1.0 - e);
    s.C = C_of_e(e);
    s.action = 2.0 * kPi * w * s.C;
    s.volume = s.action * s.action;
    s.circular_brake_r = w / std::sqrt(-2.0 * h);
    return s;
}

double orbit_radius(double theta, double omega, double h) {
    const double e = eccentricity(omega, h);
    return omega * omega / (1.0 + e * std::cos(theta));
}

double brake_pr_oracle(double r0, double omega, double h) {
    if (!(r0 > 0.0)) fail(ErrorKind::DomainError, "brake_pr_oracle requires r0 > 0");
    return (omega * omega + 2.0 * h * r0 * r0) / (2.0 * omega * r0);
}

double hill_boundary_z(double r, double omega, double h) {
    // boundary: omega^2/(2 r^2) - 1/rho = h with rho = sqrt(r^2+z^2)
    const double denom = omega * omega / (2.0 * r * r) - h;
    if (!(denom > 0.0)) fail(ErrorKind::DomainError, "no boundary above this r");
    const double rho = 1.0 / denom;
    const double z2 = rho * rho - r * r;
    if (z2 < 0.0) fail(ErrorKind::DomainError, "r outside the Hill boundary range");
    return std::sqrt(z2);
}

double M_of_n(int n) {
    if (n < 2) fail(ErrorKind::DomainError, "M(n) requires n >= 2");
    // pair i with n-i (equal cosecants) to keep the sum short and balanced
    double sum = 0.0;
    for (int i = 1; 2 * i < n; ++i) sum += 2.0 / std::sin(static_cast<double>(i) * kPi / n);
    if (n % 2 == 0) sum += 1.0; // middle term csc(pi/2)
    return 0.5 * sum;
}

double G_of_e(double e) {
    if (!(e >= 0.0 && e < 1.0)) fail(ErrorKind::DomainError, "G(e) requires 0 <= e < 1");
    const double q = e / (1.0 + std::sqrt(1.0 - e * e));
    const double q2 = q * q;
    return std::sqrt(1.0 - q2 * q2);
}

double cosine_series_integral(int n, double e) {
    if (n < 0) fail(ErrorKind::DomainError, "cosine_series_integral requires n >= 0");
    if (!(e >= 0.0 && e < 1.0)) fail(ErrorKind::DomainError, "cosine_series_integral requires 0 <= e < 1");
    if (e == 0.0) return n == 0 ? kPi : 0.0;
    const double s = std::sqrt(1.0 - e * e);
    return kPi / s * std::pow(-e / (1.0 + s), n);
}

double energy_for_eccentricity(double e, double omega) {
    if (!(e >= 0.0 && e < 1.0)) fail(ErrorKind::DomainError, "eccentricity must be in [0,1)");
    return (e * e - 1.0) / (2.0 * omega * omega);
}

} // namespace keplerkit::kepler
