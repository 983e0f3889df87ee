#include <doctest.h>

#include <cmath>
#include <numbers>

#include "keplerkit/numerics.hpp"

using namespace keplerkit::numerics;
constexpr double kPi = std::numbers::pi;

TEST_CASE("brent finds simple roots") {
    const double r = find_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-15);
    CHECK(r == doctest::Approx(0.5 * kPi).epsilon(1e-15));
    CHECK_THROWS(find_root([](double x) { return 1.0 + x * x; }, -1.0, 1.0, 1e-15));
}

TEST_CASE("bracket expansion") {
    double a = 0.2, b = 0.3;
    CHECK(expand_bracket([](double x) { return x - 1.0; }, a, b));
    CHECK(a < 1.0);
    CHECK(b > 1.0);
    double c = 0.0, d = 1.0;
    CHECK_FALSE(expand_bracket([](double x) { return 1.0 + x * x; }, c, d, 10));
}

TEST_CASE("gauss-kronrod on analytic integrands") {
    auto q = integrate_gk([](double x) { return std::exp(-x * x); }, 0.0, 2.0, 1e-13);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(0.5 * std::sqrt(kPi) * std::erf(2.0)).epsilon(1e-13));
    auto q2 = integrate_gk([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-13);
    CHECK(q2.value == doctest::Approx(kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre rules and doubling") {
    const auto& r8 = gl_rule(8);
    double wsum = 0.0;
    for (double w : r8.w) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
    // degree 15 polynomial integrated exactly by the 8-point rule
    const double exact = 2.0 / 15.0; // int_{-1}^{1} x^14 dx
    CHECK(gl_apply(r8, [](double x) { return std::pow(x, 14); }, -1.0, 1.0) ==
          doctest::Approx(exact).epsilon(1e-14));

    auto q = integrate_gl_doubling([](double x) { return std::sin(3.0 * x); }, 0.0, 1.0, 1e-13);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx((1.0 - std::cos(3.0)) / 3.0).epsilon(1e-14));
}
