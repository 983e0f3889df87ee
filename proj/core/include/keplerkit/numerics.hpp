#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace keplerkit::numerics {

// ---------------------------------------------------------------- roots ----

/// Brent's method on a sign-changing bracket [a, b].
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-14, int max_iter = 200);

/// Expand [a, b] geometrically about its midpoint until f changes sign.
/// Returns false if no bracket was found within max_expand doublings.
bool expand_bracket(const std::function<double(double)>& f, double& a, double& b,
                    int max_expand = 60);

// ----------------------------------------------------------- quadrature ----

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // nested-rule error estimate
    bool converged = false;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod 7/15 with interval bisection.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, double rel_tol = 0.0, int max_intervals = 4000);

/// Gauss-Legendre with node doubling until two consecutive levels agree.
QuadResult integrate_gl_doubling(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol = 1e-10, double rel_tol = 0.0, int n_start = 24,
                                 int n_max = 6144);

/// Gauss-Legendre nodes/weights on [-1, 1], cached per n.
struct GLRule {
    std::vector<double> x, w;
};
const GLRule& gl_rule(int n);

double gl_apply(const GLRule& rule, const std::function<double(double)>& f, double a, double b);

} // namespace keplerkit::numerics
