#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "keplerkit/flow.hpp"
#include "keplerkit/kepler.hpp"
#include "keplerkit/model.hpp"
#include "oracles.hpp"

using namespace keplerkit;
namespace fl = keplerkit::flow;
constexpr double kPi = std::numbers::pi;

TEST_CASE("critical point stays put") {
    auto p = make_params(1.0, -0.5, 0.0, zero_perturbation());
    auto traj = fl::integrate({0, 0, 1, 0}, p, 5.0);
    for (const auto& s : traj.states) {
        CHECK(s.r == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(s.p_r) < 1e-13);
        CHECK(std::abs(s.p_z) < 1e-13);
    }
}

TEST_CASE("kepler orbit closes after one period") {
    auto p = kepler_params(1.0, -0.375);
    const auto ks = kepler::scalars(1.0, -0.375);
    const double T = kepler::period(1.0, -0.375);
    auto traj = fl::integrate({0, 0, ks.r_min, 0}, p, T);
    const PhaseState end = traj.states.back();
    CHECK(std::abs(end.r - ks.r_min) < 1e-8);
    CHECK(std::abs(end.p_r) < 1e-8);
    CHECK(std::abs(end.z) < 1e-12);
    CHECK(traj.ok);
}

TEST_CASE("energy drift over ten periods at tol 1e-10") {
    auto p = kepler_params(1.0, -0.375);
    const auto ks = kepler::scalars(1.0, -0.375);
    fl::IntegrateOptions opts;
    opts.tol = 1e-10;
    opts.record_samples = true;
    auto traj = fl::integrate({0, 0, ks.r_min, 0}, p, 10.0 * kepler::period(1.0, -0.375), opts);
    CHECK(traj.energy_drift <= 1e-9);
    CHECK(traj.ok);
}

TEST_CASE("reversibility through the momentum flip") {
    auto p = ellipsoid_params(1.0, -0.375, 1e-3);
    const PhaseState x0{0.15, -0.3, 1.1, 0.2};
    const double T = 17.0;
    fl::IntegrateOptions opts;
    opts.detect_events = false;
    auto fwd = fl::integrate(x0, p, T, opts);
    PhaseState y = fwd.states.back();
    y.p_r = -y.p_r;
    y.p_z = -y.p_z;
    auto bwd = fl::integrate(y, p, T, opts);
    PhaseState back = bwd.states.back();
    back.p_r = -back.p_r;
    back.p_z = -back.p_z;
    CHECK(std::abs(back.p_r - x0.p_r) < 1e-8);
    CHECK(std::abs(back.p_z - x0.p_z) < 1e-8);
    CHECK(std::abs(back.r - x0.r) < 1e-8);
    CHECK(std::abs(back.z - x0.z) < 1e-8);
}

TEST_CASE("planar orbits produce no z crossings") {
    auto p = kepler_params(1.0, -0.375);
    const auto ks = kepler::scalars(1.0, -0.375);
    auto traj = fl::integrate({0, 0, ks.r_min, 0}, p, 3.2 * kepler::period(1.0, -0.375));
    CHECK(fl::locate_event(traj, fl::EventKind::ZCrossPlus).empty());
    CHECK(fl::locate_event(traj, fl::EventKind::ZCrossMinus).empty());
    // two p_r zeros per radial period; the start itself is not an event
    CHECK(fl::locate_event(traj, fl::EventKind::PrZero).size() == 6);
}

TEST_CASE("brake launch crosses the section downward and rests twice per period") {
    auto p = kepler_params(1.0, -0.375);
    const double r0 = oracles::kCircularBrakeR;
    const double z0 = kepler::hill_boundary_z(r0, 1.0, -0.375);
    const PhaseState launch{0, 0, r0, z0};

    auto stop = fl::integrate_until(launch, p, fl::EventKind::ZCrossMinus,
                                    4.0 * kepler::period(1.0, -0.375));
    REQUIRE(stop.found);
    CHECK(stop.event.state.p_z < 0.0);
    CHECK(std::abs(stop.event.state.z) < 1e-10);
    // the z-symmetric launch returns with p_r = 0 at the crossing
    CHECK(std::abs(stop.event.state.p_r) < 1e-9);

    fl::IntegrateOptions opts;
    opts.rest_tol = 1e-5;
    auto traj = fl::integrate(launch, p, 4.04 * stop.event.t, opts);
    const auto rests = fl::locate_event(traj, fl::EventKind::RestPoint);
    CHECK(rests.size() == 2); // interior rest touches at 2 t0 and 4 t0
    for (const auto& ev : rests) CHECK(std::hypot(ev.state.p_r, ev.state.p_z) < 1e-6);
}

TEST_CASE("event residuals are polished below 1e-11 of the length scale") {
    auto p = ellipsoid_params(1.0, -0.375, 5e-3);
    const auto ks = kepler::scalars(1.0, -0.375);
    const PhaseState start{0.1, -0.4, 1.2, 0.0};
    auto stop = fl::integrate_until(start, p, fl::EventKind::ZCrossMinus,
                                    4.0 * kepler::period(1.0, -0.375));
    REQUIRE(stop.found);
    CHECK(std::abs(stop.event.state.z) <= 1e-11 * ks.r_max);
}

TEST_CASE("unperturbed transverse subsystem winds by exactly one turn per period") {
    for (double w : {1.0, 1.6}) {
        const double h = -0.375 / (w * w);
        auto p = kepler_params(w, h);
        const auto ks = kepler::scalars(w, h);
        auto res = fl::variational_subsystem2(p, ks.r_min, 2.0 * kPi, 8);
        CHECK(res.winding / (2.0 * kPi * 8) == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(res.monodromy.det == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(res.monodromy.trace == doctest::Approx(2.0).epsilon(1e-7));
        // winding is initial-vector independent up to one turn over the run
        CHECK(std::abs(res.winding - res.winding_second) <= 2.0 * kPi);
    }
}

TEST_CASE("perturbed winding picks up the first-order drift") {
    // one-sided check at eps = 1e-3: Delta theta/(2 pi m) - 1 ~ 6 eps
    const double eps = 1e-3;
    auto p = ellipsoid_params(1.0, -0.375, eps);
    // tau-period of the perturbed planar orbit comes from the quad module in
    // production; a short event-measured value is enough here
    auto stop = fl::integrate_until({0, 0, kepler::scalars(1.0, -0.375).r_min, 0},
                                    kepler_params(1.0, -0.375), fl::EventKind::PrZero,
                                    2.0 * kepler::period(1.0, -0.375), {}, 1);
    REQUIRE(stop.found);
    (void)stop;
    // turning point of the perturbed planar problem, bracketed near Kepler's
    const double rk = kepler::scalars(1.0, -0.375).r_min;
    double r1 = rk;
    {
        auto Q = [&](double r) { return 2.0 * (p.h - planar_potential(r, p)); };
        double lo = rk * 0.9, hi = rk * 1.05;
        while (Q(lo) > 0) lo *= 0.98;
        while (Q(hi) < 0) hi *= 1.01;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (Q(mid) < 0 ? lo : hi) = mid;
        }
        r1 = 0.5 * (lo + hi);
    }
    // tau-period shifts by O(eps); measure it from the winding run itself by
    // using the closed 2 pi plus the first-order shift bound
    const double tau_T = 2.0 * kPi + eps * oracles::kEllTt; // first-order estimate
    auto res = fl::variational_subsystem2(p, r1, tau_T, 64);
    const double rot = res.winding / (2.0 * kPi * 64);
    CHECK(std::abs(rot - 1.0 - 6.0 * eps) <= 0.05 * 6.0 * eps);
    CHECK(res.monodromy.det == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.monodromy.eigen_kind == fl::EigenKind::Elliptic);
}

TEST_CASE("full variational flow is symplectic") {
    for (auto p : {kepler_params(1.0, -0.375), ellipsoid_params(1.0, -0.375, 1e-3)}) {
        auto v = fl::integrate_variational4({0.1, -0.2, 1.2, 0.15}, p,
                                            2.5 * kepler::period(1.0, -0.375));
        CHECK(std::abs(v.det - 1.0) <= 1e-8);
    }
}

TEST_CASE("blowup guard") {
    auto p = make_params(1.0, 7.5, 0.0, zero_perturbation());
    CHECK_THROWS_AS(fl::integrate({0, 0, 0.2, 0}, p, 10.0), Error);
}

TEST_CASE("csv dump format") {
    auto p = kepler_params(1.0, -0.375);
    auto traj = fl::integrate({0, 0, 1.0, 0.1}, p, 0.5);
    std::ostringstream os;
    fl::write_csv(traj, os);
    const std::string s = os.str();
    CHECK(s.rfind("t,p_r,p_z,r,z\n", 0) == 0);
    CHECK(s.find("0.1") != std::string::npos);
}
