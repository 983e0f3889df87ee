#include <doctest.h>

#include <cmath>
#include <numbers>

#include "keplerkit/criteria.hpp"
#include "keplerkit/kepler.hpp"
#include "keplerkit/selftest.hpp"
#include "oracles.hpp"

using namespace keplerkit;
namespace cr = keplerkit::criteria;
constexpr double kPi = std::numbers::pi;

TEST_CASE("ellipsoid criteria report at the reference point") {
    auto rep = cr::evaluate(ellipsoid_params(1.0, -0.375, 0.0));
    CHECK(rep.e == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.lhs == doctest::Approx(oracles::kEllVt).epsilon(1e-7));
    CHECK(rep.rhs == doctest::Approx(oracles::kEllRhs).epsilon(1e-7));
    CHECK(rep.verdict == cr::Verdict::InfinitelyMany_via_ii);
    CHECK(rep.stability == cr::Stability::Elliptic);
    CHECK(rep.margin > 0.0);
}

TEST_CASE("pyramid criteria report") {
    auto rep = cr::evaluate(pyramidal_params(1.0, -0.375, 0.0, 2));
    CHECK(rep.fn.d_f == doctest::Approx(oracles::kPyr2Df).epsilon(1e-7));
    CHECK(rep.fn.e_f > 0.0);
    CHECK(rep.verdict == cr::Verdict::InfinitelyMany_via_ii);
    CHECK(rep.stability == cr::Stability::Elliptic);
    CHECK(rep.rhs == doctest::Approx(oracles::kPyr2Rhs).epsilon(1e-7));
}

TEST_CASE("zero perturbation is inconclusive") {
    auto rep = cr::evaluate(kepler_params(1.0, -0.375));
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.verdict == cr::Verdict::Inconclusive);
    CHECK(rep.stability == cr::Stability::Parabolic);
}

TEST_CASE("ellipsoid closed forms") {
    auto fn = cr::ellipsoid_closed_forms(1.0, -0.375);
    CHECK(fn.v_tilde == doctest::Approx(oracles::kEllVt).epsilon(1e-15));
    CHECK(fn.a_tilde == doctest::Approx(oracles::kEllAt).epsilon(1e-15));
    CHECK(fn.t_tilde == doctest::Approx(oracles::kEllTt).epsilon(1e-15));
    CHECK(fn.e_f == doctest::Approx(oracles::kEllEf).epsilon(1e-15));
    CHECK(fn.d_f == doctest::Approx(oracles::kEllDf).epsilon(1e-15));
    for (double w : {0.5, 1.0, 2.0})
        CHECK(cr::ellipsoid_closed_forms(w, -0.2 / (w * w)).e_f * w * w ==
              doctest::Approx(12.0 * kPi).epsilon(1e-14));
    for (double e = 0.05; e < 1.0; e += 0.05)
        CHECK(cr::ellipsoid_closed_forms(1.0, kepler::energy_for_eccentricity(e, 1.0)).v_tilde <
              0.0);
}

TEST_CASE("pyramidal closed forms") {
    auto pf = cr::pyramidal_closed_forms(1.0, -0.375, 2);
    CHECK(pf.fn.a_tilde == doctest::Approx(oracles::kPyr2At).epsilon(1e-14));
    CHECK(std::sqrt(pf.fn.d_f) == doctest::Approx(oracles::kPyr2SqrtDf).epsilon(1e-14));
    CHECK(pf.fn.t_tilde == 0.0);
    CHECK(pf.fn.v_tilde == doctest::Approx(oracles::kPyr2VtNum).epsilon(1e-7));
    CHECK(pf.v_tilde_bound == doctest::Approx(oracles::kPyr2VtBound).epsilon(1e-12));
    CHECK(pf.bound_satisfied);
    for (int n : {3, 10, 100, 472}) {
        auto q = cr::pyramidal_closed_forms(1.0, -0.375, n);
        CHECK(q.fn.t_tilde == 0.0);
        CHECK(q.fn.e_f > 0.0); // 2n > M(n) in this range
        CHECK(q.bound_satisfied);
    }
}

TEST_CASE("crosscheck: numeric functionals against closed forms") {
    auto rep = cr::crosscheck(ellipsoid_params(1.0, -0.375, 0.0), false);
    for (const auto& row : rep.rows) {
        INFO(row.name, " rel err ", row.rel_err);
        CHECK(row.pass);
    }
    auto rep3 = cr::crosscheck(pyramidal_params(1.0, -0.375, 0.0, 3), false);
    for (const auto& row : rep3.rows) {
        INFO(row.name, " rel err ", row.rel_err);
        CHECK(row.pass);
    }
    CHECK_THROWS_AS(cr::crosscheck(kepler_params(1.0, -0.375), false), Error);
}

TEST_CASE("crosscheck with the rotation-number derivative") {
    auto rep = cr::crosscheck(ellipsoid_params(1.0, -0.375, 1e-3), true);
    bool saw_rot = false;
    for (const auto& row : rep.rows) {
        INFO(row.name, " rel err ", row.rel_err);
        CHECK(row.pass);
        if (row.name == "dRot/deps") {
            saw_rot = true;
            CHECK(row.reference == doctest::Approx(oracles::kEllRotSlope).epsilon(1e-9));
        }
    }
    CHECK(saw_rot);
}

TEST_CASE("verdicts are stable under tighter quadrature") {
    quad::QuadOptions tight;
    tight.abs_tol_1d = 1e-11;
    tight.rel_tol_2d = 1e-9;
    for (auto p : {ellipsoid_params(1.0, -0.375, 0.0), pyramidal_params(1.0, -0.18, 0.0, 3)}) {
        auto a = cr::evaluate(p);
        auto b = cr::evaluate(p, tight);
        if (a.margin > 0.0) CHECK(a.verdict == b.verdict);
    }
}

TEST_CASE("negating the perturbation flips lhs and keeps the stability class") {
    auto a = cr::evaluate(ellipsoid_params(1.0, -0.375, 0.0));
    auto b = cr::evaluate(negated_eps_view(ellipsoid_params(1.0, -0.375, 0.0)));
    CHECK(b.lhs == doctest::Approx(-a.lhs).epsilon(1e-12));
    CHECK(b.fn.d_f == doctest::Approx(a.fn.d_f).epsilon(1e-12));
    CHECK(b.stability == a.stability);
}

TEST_CASE("selftest battery is green") {
    auto rep = selftest::run_all();
    for (const auto& c : rep.checks) {
        INFO(c.name, " ", c.detail);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass);
}
