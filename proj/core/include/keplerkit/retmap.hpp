#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "keplerkit/flow.hpp"
#include "keplerkit/model.hpp"

namespace keplerkit::retmap {

/// Chart coordinates (r, p_r) on the downward section disk.
struct SectionPoint {
    double r = 0.0;
    double p_r = 0.0;
};

/// 2(h - V_pl(r)) - p_r^2; positive inside the disk, zero on the boundary orbit.
double radicand(const SectionPoint& x, const SystemParams& params);
/// Lift to (p_r, p_z, r, 0) with the negative p_z branch.
PhaseState lift(const SectionPoint& x, const SystemParams& params, double boundary_margin = 1e-12);

struct ReturnOptions {
    flow::IntegrateOptions integ{};
    double t_cap_periods = 60.0;
    double boundary_margin = 1e-12; // radicand floor for lifting
    double jacobian_step = 1e-4;    // central-difference step, x disk scale
};

struct ReturnResult {
    SectionPoint image{};
    double return_time = 0.0;
    std::optional<std::array<double, 4>> jacobian; // row-major d(image)/d(point)
    double jacobian_det = 0.0;
};

ReturnResult first_return(const SectionPoint& x, const SystemParams& params,
                          const ReturnOptions& opts = {});
ReturnResult first_return_with_jacobian(const SectionPoint& x, const SystemParams& params,
                                        const ReturnOptions& opts = {});
/// k-fold return; accumulated time in *time_total if given.
SectionPoint return_k(const SectionPoint& x, int k, const SystemParams& params,
                      const ReturnOptions& opts = {}, double* time_total = nullptr);
/// Backward-time return, realized through the momentum-flip reversal.
ReturnResult inverse_return(const SectionPoint& x, const SystemParams& params,
                            const ReturnOptions& opts = {});

struct GridSpec {
    int n_r = 10;
    int n_p = 10;
    double margin = 0.08; // fraction of the half-width kept clear of the boundary
};

struct AreaRow {
    SectionPoint x;
    double det = 0.0;
    double return_time = 0.0;
};
struct AreaReport {
    GridSpec grid;
    std::vector<AreaRow> rows;
    double max_abs_det_minus_1 = 0.0;
    double min_return_time = 0.0;
};
AreaReport area_preservation_test(const SystemParams& params, const GridSpec& grid = {},
                                  const ReturnOptions& opts = {});

struct PeriodicPoint {
    int k = 0; // minimal period found
    SectionPoint x{};
    double return_time = 0.0; // over the k returns
    double residual = 0.0;
};

struct SearchOptions {
    int k_max = 5;
    int random_seeds = 64;
    std::uint64_t rng_seed = 0x5eed5eedULL;
    int grid_seeds = 3; // per axis, coarse interior grid added to the seed list
    double newton_tol = 1e-10;   // on ||psi^k(x) - x||, x disk scale
    double newton_fd_step = 1e-6; // Jacobian step inside the Newton iteration
    int newton_max_iter = 48;
    double dedup_tol = 1e-6; // orbit-equivalence tolerance, x disk scale
    ReturnOptions ret{};
};

struct SearchReport {
    std::vector<PeriodicPoint> orbits; // deduplicated, sorted by (k, r, p_r)
    int converged_raw = 0;
    int seeds_tried = 0;
    SearchOptions opts;
};
SearchReport find_periodic_points(const SystemParams& params, const SearchOptions& opts = {});

} // namespace keplerkit::retmap
