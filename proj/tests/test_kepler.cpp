#include <doctest.h>

#include <cmath>
#include <numbers>

#include "keplerkit/error.hpp"
#include "keplerkit/kepler.hpp"
#include "keplerkit/numerics.hpp"
#include "oracles.hpp"

using namespace keplerkit;
namespace kp = keplerkit::kepler;

TEST_CASE("kepler scalars at the reference point") {
    const auto s = kp::scalars(1.0, -0.375);
    CHECK(s.e == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.r_min == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.r_max == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.action == doctest::Approx(oracles::kActionRef).epsilon(1e-15));
    CHECK(s.volume == doctest::Approx(oracles::kVolumeRef).epsilon(1e-15));
    CHECK(s.C == doctest::Approx(oracles::kCofE).epsilon(1e-14));
    CHECK(s.circular_brake_r == doctest::Approx(oracles::kCircularBrakeR).epsilon(1e-15));
    CHECK(kp::period(1.0, -0.375) == doctest::Approx(oracles::kKeplerPeriodRef).epsilon(1e-15));
    CHECK_THROWS_AS(kp::scalars(1.0, -0.5), Error);
    CHECK_THROWS_AS(kp::scalars(1.0, 0.0), Error);

    // r_min > omega^2/2 across the compact window
    for (double w : {0.5, 1.0, 2.0})
        for (double e = 0.05; e < 1.0; e += 0.05) {
            const auto sc = kp::scalars(w, kp::energy_for_eccentricity(e, w));
            CHECK(sc.r_min > 0.5 * w * w);
            CHECK(sc.volume == doctest::Approx(sc.action * sc.action).epsilon(1e-15));
        }
}

TEST_CASE("orbit radius") {
    CHECK(kp::orbit_radius(0.0, 1.0, -0.375) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(kp::orbit_radius(std::numbers::pi, 1.0, -0.375) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(kp::orbit_radius(0.5 * std::numbers::pi, 1.0, -0.375) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("brake momentum closed form and its unique root") {
    CHECK(kp::brake_pr_oracle(oracles::kCircularBrakeR, 1.0, -0.375) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kp::brake_pr_oracle(2.0 / 3.0, 1.0, -0.375) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kp::brake_pr_oracle(2.0, 1.0, -0.375) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_THROWS_AS(kp::brake_pr_oracle(0.0, 1.0, -0.375), Error);

    // bisection localizes the only root at omega/sqrt(-2h)
    for (double w : {0.5, 1.0, 2.0})
        for (double h : {-0.3, -0.18}) {
            const double hh = h / (w * w); // keep 2 h w^2 in the window
            const auto s = kp::scalars(w, hh);
            const double root = numerics::find_root(
                [&](double r) { return kp::brake_pr_oracle(r, w, hh); }, s.r_min * 1.0001,
                s.r_max * 0.9999, 1e-14);
            CHECK(root == doctest::Approx(w / std::sqrt(-2.0 * hh)).epsilon(1e-12));
        }
}

TEST_CASE("M(n) by direct summation") {
    CHECK(kp::M_of_n(2) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(kp::M_of_n(3) == doctest::Approx(oracles::kM3).epsilon(1e-15));
    CHECK_THROWS_AS(kp::M_of_n(1), Error);

    double prev = 0.0;
    for (int n = 2; n <= 120; ++n) {
        const double m = kp::M_of_n(n);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("the 2n > M(n) bound holds exactly up to 472") {
    for (int n = 2; n <= 472; ++n) CHECK(2.0 * n > kp::M_of_n(n));
    CHECK(2.0 * 473 <= kp::M_of_n(473));
}

TEST_CASE("G(e)") {
    CHECK(kp::G_of_e(0.0) == doctest::Approx(1.0).epsilon(1e-16));
    CHECK(kp::G_of_e(0.5) == doctest::Approx(oracles::kG05).epsilon(1e-15));
    for (double e : {0.1, 0.5, 0.9}) CHECK(kp::G_of_e(e) / std::sqrt(1.0 - e * e) > 1.0);
}

TEST_CASE("cosine series closed form") {
    CHECK(kp::cosine_series_integral(0, 0.5) == doctest::Approx(oracles::kCosSeries0).epsilon(1e-15));
    CHECK(kp::cosine_series_integral(1, 0.5) == doctest::Approx(oracles::kCosSeries1).epsilon(1e-15));
    CHECK(kp::cosine_series_integral(2, 0.5) == doctest::Approx(oracles::kCosSeries2).epsilon(1e-15));
    CHECK(kp::cosine_series_integral(4, 0.5) == doctest::Approx(oracles::kCosSeries4).epsilon(1e-15));
    for (int n : {1, 2, 5}) CHECK(std::abs(kp::cosine_series_integral(n, 1e-12)) < 1e-11);
    CHECK(kp::cosine_series_integral(1, 0.0) == 0.0);
}
