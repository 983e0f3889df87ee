#include <benchmark/benchmark.h>

#include <cmath>

#include "keplerkit/flow.hpp"
#include "keplerkit/kepler.hpp"
#include "keplerkit/model.hpp"
#include "keplerkit/orbits.hpp"
#include "keplerkit/quad.hpp"
#include "keplerkit/retmap.hpp"

using namespace keplerkit;

namespace {

static void BM_IntegrateOnePeriod(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    auto p = ellipsoid_params(1.0, -0.375, 1e-3);
    const auto ks = kepler::scalars(1.0, -0.375);
    const double T = kepler::period(1.0, -0.375);
    flow::IntegrateOptions opts;
    opts.tol = tol;
    opts.record_samples = false;
    opts.detect_events = false;
    for (auto _ : state) {
        auto traj = flow::integrate({0, 0, ks.r_min, 0}, p, T, opts);
        benchmark::DoNotOptimize(traj.energy_drift);
    }
}
BENCHMARK(BM_IntegrateOnePeriod)->Arg(8)->Arg(10)->Arg(12);

static void BM_ContactVolume(benchmark::State& state) {
    auto p = ellipsoid_params(1.0, -0.375, 1e-3);
    for (auto _ : state) {
        auto v = quad::contact_volume(p);
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_ContactVolume);

static void BM_PerturbationFunctionals(benchmark::State& state) {
    auto p = pyramidal_params(1.0, -0.375, 0.0, 3);
    for (auto _ : state) {
        auto fn = quad::perturbation_functionals(p);
        benchmark::DoNotOptimize(fn.d_f);
    }
}
BENCHMARK(BM_PerturbationFunctionals);

static void BM_FirstReturn(benchmark::State& state) {
    auto p = ellipsoid_params(1.0, -0.375, 1e-2);
    retmap::ReturnOptions ro;
    ro.integ.tol = 1e-11;
    for (auto _ : state) {
        auto res = retmap::first_return({1.2, 0.1}, p, ro);
        benchmark::DoNotOptimize(res.image.r);
    }
}
BENCHMARK(BM_FirstReturn);

static void BM_RotationWinding(benchmark::State& state) {
    auto p = ellipsoid_params(1.0, -0.375, 1e-3);
    const auto ap = quad::action_and_period(p);
    for (auto _ : state) {
        auto res = flow::variational_subsystem2(p, ap.r1, ap.period_tau, 16);
        benchmark::DoNotOptimize(res.winding);
    }
}
BENCHMARK(BM_RotationWinding);

static void BM_BrakeShooting(benchmark::State& state) {
    auto p = ellipsoid_params(1.0, -0.375, 1e-3);
    for (auto _ : state) {
        auto bo = orbits::shoot_brake_orbit(p);
        benchmark::DoNotOptimize(bo.r0);
    }
}
BENCHMARK(BM_BrakeShooting);

} // namespace

BENCHMARK_MAIN();
