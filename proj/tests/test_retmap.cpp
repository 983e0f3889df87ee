#include <doctest.h>

#include <cmath>

#include "keplerkit/kepler.hpp"
#include "keplerkit/orbits.hpp"
#include "keplerkit/retmap.hpp"
#include "oracles.hpp"

using namespace keplerkit;
namespace rm = keplerkit::retmap;

TEST_CASE("lift respects the negative branch and the boundary") {
    auto p = kepler_params(1.0, -0.375);
    rm::SectionPoint x{1.2, 0.1};
    const auto s = rm::lift(x, p);
    CHECK(s.p_z < 0.0);
    CHECK(s.z == 0.0);
    CHECK(hamiltonian(s, p) == doctest::Approx(-0.375).epsilon(1e-14));
    // boundary curve: radicand = 0
    const double pr_edge = std::sqrt(2.0 * (p.h - planar_potential(1.2, p)));
    CHECK_THROWS_AS(rm::lift({1.2, pr_edge * (1.0 + 1e-12)}, p), Error);
}

TEST_CASE("unperturbed first return is the identity with the Kepler return time") {
    auto p = kepler_params(1.0, -0.375);
    const double T = kepler::period(1.0, -0.375);
    double worst = 0.0, worst_t = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double r = 2.0 / 3.0 + (2.0 - 2.0 / 3.0) * (0.08 + 0.84 * (i + 0.5) / 10.0);
            const double pm = std::sqrt(std::max(0.0, 2.0 * (p.h - planar_potential(r, p))));
            rm::SectionPoint x{r, pm * (2.0 * (j + 0.5) / 10.0 - 1.0) * 0.85};
            auto res = rm::first_return(x, p);
            worst = std::max(worst, std::hypot(res.image.r - x.r, res.image.p_r - x.p_r));
            worst_t = std::max(worst_t, std::abs(res.return_time - T));
        }
    CHECK(worst <= 1e-7);
    CHECK(worst_t <= 1e-6);
}

TEST_CASE("area preservation: identity at eps = 0, symplectic at eps = 1e-3") {
    auto p0 = kepler_params(1.0, -0.375);
    auto rep0 = rm::area_preservation_test(p0, {6, 6, 0.1});
    CHECK(rep0.max_abs_det_minus_1 <= 1e-7);
    CHECK(rep0.min_return_time > 0.0);

    auto p1 = ellipsoid_params(1.0, -0.375, 1e-3);
    auto rep1 = rm::area_preservation_test(p1, {6, 6, 0.1});
    CHECK(rep1.max_abs_det_minus_1 <= 1e-5);
}

TEST_CASE("brake-orbit crossing is a fixed point of the return map") {
    for (auto p : {ellipsoid_params(1.0, -0.375, 1e-3), pyramidal_params(1.0, -0.375, 1e-2, 2)}) {
        auto bo = orbits::shoot_brake_orbit(p);
        rm::SectionPoint x{bo.crossing.r, bo.crossing.p_r};
        auto res = rm::first_return(x, p);
        CHECK(std::hypot(res.image.r - x.r, res.image.p_r - x.p_r) <= 1e-6);
    }
}

TEST_CASE("forward and backward returns are inverse to each other") {
    auto p = ellipsoid_params(1.0, -0.375, 1e-2);
    rm::SectionPoint x{1.25, 0.12};
    auto fwd = rm::first_return(x, p);
    auto back = rm::inverse_return(fwd.image, p);
    CHECK(std::hypot(back.image.r - x.r, back.image.p_r - x.p_r) <= 1e-7);
    CHECK(back.return_time == doctest::Approx(fwd.return_time).epsilon(1e-9));
    // images stay strictly inside the disk
    CHECK(rm::radicand(fwd.image, p) > 0.0);
}

TEST_CASE("periodic point search at eps = 0 converges from every seed") {
    auto p = kepler_params(1.0, -0.375);
    rm::SearchOptions so;
    so.k_max = 1;
    so.random_seeds = 6;
    so.grid_seeds = 2;
    so.ret.integ.tol = 1e-11;
    auto rep = rm::find_periodic_points(p, so);
    CHECK(rep.converged_raw == rep.seeds_tried);
    CHECK(!rep.orbits.empty());
}

TEST_CASE("search finds several distinct orbits where the averaged twist degenerates") {
    // (omega, h) = (1, -0.08): the section disk contains the inclination where
    // the averaged oblateness precession changes sign, so isolated fixed
    // points appear away from the center.
    auto p = ellipsoid_params(1.0, -0.08, 1e-2);
    rm::SearchOptions so;
    so.k_max = 1;
    so.random_seeds = 10;
    so.grid_seeds = 3;
    so.ret.integ.tol = 1e-10;
    auto rep = rm::find_periodic_points(p, so);
    CHECK(rep.orbits.size() >= 2);
    for (const auto& orb : rep.orbits) {
        CHECK(orb.residual <= so.newton_tol * 12.0);
        CHECK(rm::radicand(orb.x, p) > 0.0);
    }
}

TEST_CASE("orbit set grows monotonically with the seed set") {
    auto p = ellipsoid_params(1.0, -0.08, 1e-2);
    rm::SearchOptions small;
    small.k_max = 1;
    small.random_seeds = 4;
    small.ret.integ.tol = 1e-10;
    rm::SearchOptions big = small;
    big.random_seeds = 10;
    auto a = rm::find_periodic_points(p, small);
    auto b = rm::find_periodic_points(p, big);
    for (const auto& orb : a.orbits) {
        bool found = false;
        for (const auto& other : b.orbits)
            if (std::hypot(orb.x.r - other.x.r, orb.x.p_r - other.x.p_r) <= 1e-4) found = true;
        CHECK(found);
    }
}
