#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "keplerkit/model.hpp"

namespace keplerkit::flow {

enum class EventKind { ZCrossPlus, ZCrossMinus, RestPoint, PrZero };
const char* to_string(EventKind k);

struct EventRecord {
    EventKind kind;
    double t;
    PhaseState state;
};

struct IntegrateOptions {
    double tol = 1e-12;       // drift tolerance per reference period
    double event_tol = 1e-11; // residual of the event coordinate, x length scale
    double max_step = 0.0;    // 0 = auto
    double r_floor = 0.0;     // 0 = auto (omega^2 / 4)
    double rest_tol = 1e-6;   // |p| threshold below which a momentum minimum is a rest point
    bool record_samples = true;
    bool detect_events = true;
    double drift_budget = 0.0; // 0 = auto
};

struct Trajectory {
    std::vector<double> t;
    std::vector<PhaseState> states;
    std::vector<double> tau; // rescaled time accumulated along samples
    std::vector<EventRecord> events;
    double energy_drift = 0.0;
    bool ok = true;
    std::string failure;
};

Trajectory integrate(const PhaseState& start, const SystemParams& params, double t_end,
                     const IntegrateOptions& opts = {});

/// Stop at the (skip+1)-th event of the given kind. found=false if t_cap hit first.
struct EventStop {
    bool found = false;
    EventRecord event{};
    double tau_at_event = 0.0;
    double t_reached = 0.0;
};
EventStop integrate_until(const PhaseState& start, const SystemParams& params, EventKind kind,
                          double t_cap, const IntegrateOptions& opts = {}, int skip = 0);

std::vector<EventRecord> locate_event(const Trajectory& traj, EventKind kind);

enum class EigenKind { Elliptic, Hyperbolic, Parabolic };
const char* to_string(EigenKind k);

struct Monodromy2 {
    std::array<double, 4> m{}; // row-major [[m00,m01],[m10,m11]]
    double det = 0.0;
    double trace = 0.0;
    EigenKind eigen_kind = EigenKind::Parabolic;
};
Monodromy2 classify_monodromy(const std::array<double, 4>& m, double parabolic_band = 1e-7);

/// Transverse 2x2 variational subsystem along the planar orbit, integrated in
/// the rescaled time tau together with the orbit itself. Returns the
/// one-period monodromy and the winding angle of two solution vectors over
/// `periods` periods.
struct VariationalResult {
    Monodromy2 monodromy;
    double winding = 0.0;        // vector (1,0), over all periods
    double winding_second = 0.0; // vector (0,1)
    double tau_period = 0.0;
    int periods = 0;
};
VariationalResult variational_subsystem2(const SystemParams& params, double r_perihelion,
                                         double tau_period, int periods,
                                         const IntegrateOptions& opts = {});

/// Full 4x4 variational flow (cross-check path).
struct Variational4 {
    PhaseState state;
    std::array<double, 16> transition{}; // row-major
    double det = 0.0;
};
Variational4 integrate_variational4(const PhaseState& start, const SystemParams& params,
                                    double t_end, const IntegrateOptions& opts = {});

/// Characteristic time (the circular/Kepler period for the window, else omega^3 based).
double reference_period(const SystemParams& params);
/// Characteristic length (r_max on compact surfaces).
double length_scale(const SystemParams& params);

/// CSV dump, header `t,p_r,p_z,r,z`, full double precision.
void write_csv(const Trajectory& traj, std::ostream& os);

} // namespace keplerkit::flow
