#include "keplerkit/model.hpp"

#include <cmath>

#include "keplerkit/kepler.hpp"

namespace keplerkit {

namespace {

double fd_step(double r) { return std::max(1e-6, 1e-8 * std::abs(r)); }

} // namespace

double Perturbation::eval(double r, double z) const { return f ? f(r, z) : 0.0; }

double Perturbation::fr(double r, double z) const {
    if (df_dr) return df_dr(r, z);
    if (!f) return 0.0;
    const double d = fd_step(r);
    return (f(r + d, z) - f(r - d, z)) / (2.0 * d);
}

double Perturbation::fz(double r, double z) const {
    if (df_dz) return df_dz(r, z);
    if (!f) return 0.0;
    const double d = fd_step(r);
    return (f(r, z + d) - f(r, z - d)) / (2.0 * d);
}

double Perturbation::fzz(double r, double z) const {
    if (d2f_dz2) return d2f_dz2(r, z);
    if (!f) return 0.0;
    const double d = std::sqrt(fd_step(r));
    return (f(r, z + d) - 2.0 * f(r, z) + f(r, z - d)) / (d * d);
}

double Perturbation::frr(double r, double z) const {
    if (d2f_dr2) return d2f_dr2(r, z);
    if (!f) return 0.0;
    const double d = std::sqrt(fd_step(r));
    return (f(r + d, z) - 2.0 * f(r, z) + f(r - d, z)) / (d * d);
}

double Perturbation::frz(double r, double z) const {
    if (d2f_drdz) return d2f_drdz(r, z);
    if (!f) return 0.0;
    const double d = std::sqrt(fd_step(r));
    return (f(r + d, z + d) - f(r + d, z - d) - f(r - d, z + d) + f(r - d, z - d)) / (4.0 * d * d);
}

Perturbation zero_perturbation() {
    Perturbation p;
    p.name = "zero";
    return p;
}

Perturbation make_ellipsoid_perturbation() {
    // f = (2 z^2 - r^2) (r^2 + z^2)^(-5/2); oblateness leading term
    Perturbation p;
    p.name = "ellipsoid";
    p.f = [](double r, double z) {
        const double u = r * r + z * z;
        return (2.0 * z * z - r * r) / (u * u * std::sqrt(u));
    };
    p.df_dr = [](double r, double z) {
        const double u = r * r + z * z;
        const double a = 2.0 * z * z - r * r;
        const double u7 = std::pow(u, 3.5);
        return (-2.0 * r * u - 5.0 * r * a) / u7;
    };
    p.df_dz = [](double r, double z) {
        const double u = r * r + z * z;
        const double a = 2.0 * z * z - r * r;
        const double u7 = std::pow(u, 3.5);
        return (4.0 * z * u - 5.0 * z * a) / u7;
    };
    p.d2f_dz2 = [](double r, double z) {
        const double u = r * r + z * z;
        const double a = 2.0 * z * z - r * r;
        const double u5 = std::pow(u, 2.5);
        const double u7 = u5 * u;
        const double u9 = u7 * u;
        return 4.0 / u5 + (-40.0 * z * z - 5.0 * a) / u7 + 35.0 * z * z * a / u9;
    };
    p.d2f_dr2 = [](double r, double z) {
        const double u = r * r + z * z;
        const double a = 2.0 * z * z - r * r;
        const double u5 = std::pow(u, 2.5);
        const double u7 = u5 * u;
        const double u9 = u7 * u;
        return -2.0 / u5 + (20.0 * r * r - 5.0 * a) / u7 + 35.0 * r * r * a / u9;
    };
    p.d2f_drdz = [](double r, double z) {
        const double u = r * r + z * z;
        const double a = 2.0 * z * z - r * r;
        const double u7 = std::pow(u, 3.5);
        const double u9 = u7 * u;
        return -10.0 * r * z / u7 + 35.0 * r * z * a / u9;
    };
    return p;
}

Perturbation make_pyramidal_perturbation(int n) {
    if (n < 2) fail(ErrorKind::DomainError, "pyramidal perturbation needs n >= 2");
    // Spherical form -M(n)/(2 rho cos phi) + n sin^2 phi/(2 rho) rewritten in
    // cylindrical coordinates: rho cos phi = r, sin phi = z/rho, hence
    //   f(r, z) = -M(n)/(2 r) + n z^2 / (2 (r^2+z^2)^(3/2)).
    // The equivalence is exercised on a grid in the unit tests.
    const double M = kepler::M_of_n(n);
    const double nn = static_cast<double>(n);
    Perturbation p;
    p.name = "pyramid";
    p.pyramid_n = n;
    p.f = [M, nn](double r, double z) {
        const double u = r * r + z * z;
        return -M / (2.0 * r) + nn * z * z / (2.0 * u * std::sqrt(u));
    };
    p.df_dr = [M, nn](double r, double z) {
        const double u = r * r + z * z;
        const double u5 = std::pow(u, 2.5);
        return M / (2.0 * r * r) - 1.5 * nn * r * z * z / u5;
    };
    p.df_dz = [nn](double r, double z) {
        const double u = r * r + z * z;
        const double u3 = u * std::sqrt(u);
        const double u5 = u3 * u;
        return nn * z / u3 - 1.5 * nn * z * z * z / u5;
    };
    p.d2f_dz2 = [nn](double r, double z) {
        const double u = r * r + z * z;
        const double u3 = u * std::sqrt(u);
        const double u5 = u3 * u;
        const double u7 = u5 * u;
        const double z2 = z * z;
        return nn / u3 - 7.5 * nn * z2 / u5 + 7.5 * nn * z2 * z2 / u7;
    };
    p.d2f_dr2 = [M, nn](double r, double z) {
        const double u = r * r + z * z;
        const double u5 = std::pow(u, 2.5);
        const double u7 = u5 * u;
        return -M / (r * r * r) - 1.5 * nn * z * z / u5 + 7.5 * nn * r * r * z * z / u7;
    };
    p.d2f_drdz = [nn](double r, double z) {
        const double u = r * r + z * z;
        const double u5 = std::pow(u, 2.5);
        const double u7 = u5 * u;
        return -3.0 * nn * r * z / u5 + 7.5 * nn * r * z * z * z / u7;
    };
    return p;
}

Perturbation negated(const Perturbation& p) { return scaled(p, -1.0); }

Perturbation scaled(const Perturbation& p, double factor) {
    Perturbation q;
    q.name = p.name + (factor == -1.0 ? " (negated)" : " (scaled)");
    q.pyramid_n = p.pyramid_n;
    q.finite_difference_partials = p.finite_difference_partials;
    auto wrap = [factor](const Perturbation::Fn& g) -> Perturbation::Fn {
        if (!g) return {};
        return [factor, g](double r, double z) { return factor * g(r, z); };
    };
    q.f = wrap(p.f);
    q.df_dr = wrap(p.df_dr);
    q.df_dz = wrap(p.df_dz);
    q.d2f_dz2 = wrap(p.d2f_dz2);
    q.d2f_dr2 = wrap(p.d2f_dr2);
    q.d2f_drdz = wrap(p.d2f_drdz);
    return q;
}

Perturbation with_fd_partials(const Perturbation& p) {
    Perturbation q;
    q.name = p.name;
    q.pyramid_n = p.pyramid_n;
    q.f = p.f;
    q.finite_difference_partials = true;
    return q;
}

SystemParams make_params(double omega, double h, double eps, Perturbation pert) {
    if (omega == 0.0 || !std::isfinite(omega)) fail(ErrorKind::DomainError, "omega must be nonzero");
    if (!(eps >= 0.0 && eps < 1.0)) fail(ErrorKind::DomainError, "eps must satisfy 0 <= eps < 1");
    if (!std::isfinite(h)) fail(ErrorKind::DomainError, "energy must be finite");
    SystemParams p;
    p.omega_flipped = omega < 0.0; // dynamics depend on omega only through omega^2
    p.omega = std::abs(omega);
    p.h = h;
    p.eps = eps;
    p.perturbation = std::move(pert);
    return p;
}

SystemParams kepler_params(double omega, double h) { return make_params(omega, h, 0.0, zero_perturbation()); }

SystemParams ellipsoid_params(double omega, double h, double eps) {
    return make_params(omega, h, eps, make_ellipsoid_perturbation());
}

SystemParams pyramidal_params(double omega, double h, double eps, int n) {
    return make_params(omega, h, eps, make_pyramidal_perturbation(n));
}

SystemParams negated_eps_view(const SystemParams& p) {
    SystemParams q = p;
    q.perturbation = negated(p.perturbation);
    return q;
}

const char* to_string(EnergySurfaceClass c) {
    switch (c) {
    case EnergySurfaceClass::Empty: return "Empty";
    case EnergySurfaceClass::Point: return "Point";
    case EnergySurfaceClass::CompactS3: return "CompactS3";
    case EnergySurfaceClass::Unbounded: return "Unbounded";
    }
    return "?";
}

double hamiltonian(const PhaseState& s, const SystemParams& p) {
    if (!(s.r > 0.0)) fail(ErrorKind::DomainError, "hamiltonian requires r > 0");
    return 0.5 * (s.p_r * s.p_r + s.p_z * s.p_z) + effective_potential(s.r, s.z, p);
}

double effective_potential(double r, double z, const SystemParams& p) {
    if (!(r > 0.0)) fail(ErrorKind::DomainError, "effective_potential requires r > 0");
    const double w2 = p.omega * p.omega;
    double v = 0.5 * w2 / (r * r) - 1.0 / std::sqrt(r * r + z * z);
    if (p.eps != 0.0 && !p.perturbation.is_zero()) v += p.eps * p.perturbation.eval(r, z);
    return v;
}

double planar_potential(double r, const SystemParams& p) { return effective_potential(r, 0.0, p); }

namespace {

EnergySurfaceClass classify_window(double x, double lo, double hi, double tol) {
    // boundary values report the boundary variant (Point below, Unbounded above)
    if (x < lo - tol) return EnergySurfaceClass::Empty;
    if (x <= lo + tol) return EnergySurfaceClass::Point;
    if (x < hi - tol) return EnergySurfaceClass::CompactS3;
    return EnergySurfaceClass::Unbounded;
}

} // namespace

EnergySurfaceClass classify_kepler_surface(double omega, double h, double boundary_tol) {
    if (omega == 0.0) fail(ErrorKind::DomainError, "omega must be nonzero");
    return classify_window(2.0 * h * omega * omega, -1.0, 0.0, boundary_tol);
}

EnergySurfaceClass classify_pyramidal_surface(double omega, double h, double eps, int n,
                                              double boundary_tol) {
    if (omega == 0.0) fail(ErrorKind::DomainError, "omega must be nonzero");
    if (n < 2) fail(ErrorKind::DomainError, "pyramidal system needs n >= 2");
    if (eps < 0.0) fail(ErrorKind::DomainError, "eps must be >= 0");
    const double me = kepler::M_of_n(n) * eps;
    const double lo = -(1.0 + 0.5 * me) * (1.0 + 0.5 * me);
    const double hi = -0.25 * me * me;
    return classify_window(2.0 * h * omega * omega, lo, hi, boundary_tol);
}

} // namespace keplerkit
