#include "keplerkit/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "dopri5.hpp"
#include "keplerkit/kepler.hpp"

namespace keplerkit::flow {

namespace {

constexpr double kPi = std::numbers::pi;

// state layout: p_r, p_z, r, z, tau
using S5 = std::array<double, 5>;

struct ReducedRhs {
    const SystemParams* p;
    void operator()(double, const S5& y, S5& dy) const {
        const double pr = y[0], pz = y[1], r = y[2], z = y[3];
        const double w2 = p->omega * p->omega;
        const double s2 = r * r + z * z;
        const double s3 = s2 * std::sqrt(s2);
        double fr = 0.0, fz = 0.0;
        if (p->eps != 0.0 && !p->perturbation.is_zero()) {
            fr = p->perturbation.fr(r, z);
            fz = p->perturbation.fz(r, z);
        }
        dy[0] = w2 / (r * r * r) - r / s3 - p->eps * fr;
        dy[1] = -z / s3 - p->eps * fz;
        dy[2] = pr;
        dy[3] = pz;
        dy[4] = p->omega / (r * r);
    }
};

PhaseState to_state(const S5& y) { return PhaseState{y[0], y[1], y[2], y[3]}; }

struct EventSpec {
    EventKind kind;
    double t;
    S5 y;
};

class EventScanner {
public:
    EventScanner(const SystemParams& params, const IntegrateOptions& opts, double lscale)
        : params_(params), opts_(opts), lscale_(lscale) {}

    template <class Stepper>
    void scan(const Stepper& st, std::vector<EventSpec>& out) const {
        const S5 &y0 = st.y_prev(), &y1 = st.y();
        const double h = st.last_h();
        // z = 0 crossings
        if (sign_change(y0[3], y1[3])) {
            double te;
            S5 ye;
            if (refine(st, 3, te, ye))
                out.push_back({ye[1] > 0.0 ? EventKind::ZCrossPlus : EventKind::ZCrossMinus, te, ye});
        }
        // p_r = 0 crossings
        if (sign_change(y0[0], y1[0])) {
            double te;
            S5 ye;
            if (refine(st, 0, te, ye)) out.push_back({EventKind::PrZero, te, ye});
        }
        // momentum-norm minima dipping to zero (rest points)
        const double g0 = pdot(st.t_prev(), y0), g1 = pdot(st.t_prev() + h, y1);
        if (g0 < 0.0 && g1 > 0.0) {
            double te;
            S5 ye;
            if (refine_rest(st, te, ye) && std::hypot(ye[0], ye[1]) <= opts_.rest_tol)
                out.push_back({EventKind::RestPoint, te, ye});
        }
        std::sort(out.begin(), out.end(), [](const EventSpec& a, const EventSpec& b) { return a.t < b.t; });
    }

private:
    static bool sign_change(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

    double pdot(double t, const S5& y) const {
        S5 dy;
        ReducedRhs{&params_}(t, y, dy);
        return y[0] * dy[0] + y[1] * dy[1];
    }

    // safeguarded Newton on component `ci` inside the accepted step
    template <class Stepper>
    bool refine(const Stepper& st, int ci, double& te, S5& ye) const {
        const double h = st.last_h();
        double lo = 0.0, hi = h;
        double glo = st.y_prev()[ci];
        double dt = 0.5 * h;
        S5 y = st.substep(dt);
        const double gtol = opts_.event_tol * (ci == 3 ? lscale_ : 1.0);
        for (int it = 0; it < 80; ++it) {
            const double g = y[ci];
            if ((g < 0.0) == (glo < 0.0)) {
                lo = dt;
                glo = g;
            } else {
                hi = dt;
            }
            S5 dy;
            ReducedRhs{&params_}(st.t_prev() + dt, y, dy);
            double step = dy[ci] != 0.0 ? -g / dy[ci] : 0.0;
            double next = dt + step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(g) <= gtol || hi - lo < 1e-16 * std::max(1.0, std::abs(st.t_prev()))) {
                te = st.t_prev() + dt;
                ye = y;
                return true;
            }
            dt = next;
            y = st.substep(dt);
        }
        te = st.t_prev() + dt;
        ye = y;
        return true;
    }

    template <class Stepper>
    bool refine_rest(const Stepper& st, double& te, S5& ye) const {
        const double h = st.last_h();
        double lo = 0.0, hi = h;
        double dt = 0.5 * h;
        S5 y = st.substep(dt);
        for (int it = 0; it < 80; ++it) {
            const double g = pdot(st.t_prev() + dt, y);
            if (g < 0.0)
                lo = dt;
            else
                hi = dt;
            if (hi - lo < 1e-14 * std::max(1.0, h)) break;
            dt = 0.5 * (lo + hi);
            y = st.substep(dt);
        }
        te = st.t_prev() + dt;
        ye = y;
        return true;
    }

    const SystemParams& params_;
    const IntegrateOptions& opts_;
    double lscale_;
};

struct DriverCallbacks {
    // return true to stop the run
    std::function<bool(double, const S5&)> on_sample;
    std::function<bool(const EventSpec&)> on_event;
};

void run_reduced(const PhaseState& start, const SystemParams& params, double t_end,
                 const IntegrateOptions& opts, const DriverCallbacks& cb) {
    if (!(start.r > 0.0)) fail(ErrorKind::DomainError, "integration requires r > 0");
    if (!(t_end > 0.0)) fail(ErrorKind::DomainError, "t_end must be positive");

    const double t_ref = reference_period(params);
    const double lscale = length_scale(params);
    const double tol_rate = opts.tol * (1.0 + std::abs(params.h));
    const double r_floor =
        opts.r_floor > 0.0 ? opts.r_floor : 0.25 * params.omega * params.omega;

    detail::Dopri5<5, ReducedRhs> st(ReducedRhs{&params}, tol_rate, t_ref);
    S5 y0{start.p_r, start.p_z, start.r, start.z, 0.0};
    st.init(0.0, y0, 1e-3 * t_ref);
    const double max_step = opts.max_step > 0.0 ? opts.max_step : t_ref / 16.0;
    const double h_min = 1e-14 * std::max(1.0, t_ref);

    if (cb.on_sample && cb.on_sample(0.0, y0)) return;
    EventScanner scanner(params, opts, lscale);
    std::vector<EventSpec> evs;
    while (true) {
        st.clamp_next(max_step);
        if (!st.step(t_end, h_min)) break;
        if (st.y()[2] < r_floor)
            fail(ErrorKind::RBlowup, "r fell below omega^2/4; parameters look non-compact");
        if (!(st.y()[2] < 1e6 * lscale))
            fail(ErrorKind::RBlowup, "r escaped; parameters look non-compact");
        if (opts.detect_events && cb.on_event) {
            evs.clear();
            scanner.scan(st, evs);
            for (const auto& ev : evs)
                if (cb.on_event(ev)) return;
        }
        if (cb.on_sample && cb.on_sample(st.t(), st.y())) return;
        if (st.t() >= t_end) break;
    }
}

} // namespace

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::ZCrossPlus: return "ZCross+";
    case EventKind::ZCrossMinus: return "ZCross-";
    case EventKind::RestPoint: return "RestPoint";
    case EventKind::PrZero: return "PrZero";
    }
    return "?";
}

const char* to_string(EigenKind k) {
    switch (k) {
    case EigenKind::Elliptic: return "Elliptic";
    case EigenKind::Hyperbolic: return "Hyperbolic";
    case EigenKind::Parabolic: return "Parabolic";
    }
    return "?";
}

double reference_period(const SystemParams& params) {
    const double x = 2.0 * params.h * params.omega * params.omega;
    if (x > -1.0 && x < 0.0) return kepler::period(params.omega, params.h);
    const double w = params.omega;
    return 2.0 * kPi * w * w * w;
}

double length_scale(const SystemParams& params) {
    const double x = 2.0 * params.h * params.omega * params.omega;
    if (x > -1.0 && x < 0.0) return kepler::scalars(params.omega, params.h).r_max;
    return std::max(1.0, params.omega * params.omega);
}

Trajectory integrate(const PhaseState& start, const SystemParams& params, double t_end,
                     const IntegrateOptions& opts) {
    Trajectory traj;
    const double h0 = hamiltonian(start, params);
    const double t_ref = reference_period(params);
    double drift = 0.0;

    DriverCallbacks cb;
    cb.on_sample = [&](double t, const S5& y) {
        const PhaseState s = to_state(y);
        drift = std::max(drift, std::abs(hamiltonian(s, params) - params.h));
        if (opts.record_samples) {
            traj.t.push_back(t);
            traj.states.push_back(s);
            traj.tau.push_back(y[4]);
        }
        return false;
    };
    cb.on_event = [&](const EventSpec& ev) {
        traj.events.push_back({ev.kind, ev.t, to_state(ev.y)});
        return false;
    };
    run_reduced(start, params, t_end, opts, cb);

    traj.energy_drift = std::abs(h0 - params.h) > drift ? std::abs(h0 - params.h) : drift;
    const double budget = opts.drift_budget > 0.0
                              ? opts.drift_budget
                              : 20.0 * opts.tol * (1.0 + std::abs(params.h)) *
                                    (1.0 + t_end / t_ref) + std::abs(h0 - params.h);
    if (traj.energy_drift > budget) {
        traj.ok = false;
        traj.failure = "energy drift above tolerance";
    }
    return traj;
}

EventStop integrate_until(const PhaseState& start, const SystemParams& params, EventKind kind,
                          double t_cap, const IntegrateOptions& opts, int skip) {
    EventStop out;
    int seen = 0;
    IntegrateOptions o = opts;
    o.record_samples = false;
    DriverCallbacks cb;
    cb.on_sample = [&](double t, const S5&) {
        out.t_reached = t;
        return false;
    };
    cb.on_event = [&](const EventSpec& ev) {
        if (ev.kind != kind) return false;
        if (seen++ < skip) return false;
        out.found = true;
        out.event = {ev.kind, ev.t, to_state(ev.y)};
        out.tau_at_event = ev.y[4];
        return true;
    };
    run_reduced(start, params, t_cap, o, cb);
    return out;
}

std::vector<EventRecord> locate_event(const Trajectory& traj, EventKind kind) {
    std::vector<EventRecord> out;
    for (const auto& ev : traj.events)
        if (ev.kind == kind) out.push_back(ev);
    return out;
}

Monodromy2 classify_monodromy(const std::array<double, 4>& m, double parabolic_band) {
    Monodromy2 out;
    out.m = m;
    out.det = m[0] * m[3] - m[1] * m[2];
    out.trace = m[0] + m[3];
    const double t = std::abs(out.trace);
    if (t < 2.0 - parabolic_band)
        out.eigen_kind = EigenKind::Elliptic;
    else if (t > 2.0 + parabolic_band)
        out.eigen_kind = EigenKind::Hyperbolic;
    else
        out.eigen_kind = EigenKind::Parabolic;
    return out;
}

namespace {

// tau-time co-integration of the planar orbit with the transverse 2x2
// subsystem and the winding angles of two solution vectors
struct TauRhs {
    const SystemParams* p;
    void operator()(double, const std::array<double, 8>& y, std::array<double, 8>& dy) const {
        const double pr = y[0], r = y[1];
        const double w = p->omega;
        const double w2 = w * w;
        double fr = 0.0, coeff = w2;
        if (p->eps != 0.0 && !p->perturbation.is_zero()) {
            fr = p->perturbation.fr(r, 0.0);
            coeff += p->eps * r * r * p->perturbation.dphi2(r);
        }
        const double r2w = r * r / w;
        dy[0] = r2w * (w2 / (r * r * r) - 1.0 / (r * r) - p->eps * fr);
        dy[1] = r2w * pr;
        const double cw = coeff / w;
        dy[2] = -cw * y[3];
        dy[3] = y[2] / w;
        dy[4] = -cw * y[5];
        dy[5] = y[4] / w;
        dy[6] = (y[2] * y[2] / w + cw * y[3] * y[3]) / (y[2] * y[2] + y[3] * y[3]);
        dy[7] = (y[4] * y[4] / w + cw * y[5] * y[5]) / (y[4] * y[4] + y[5] * y[5]);
    }
};

} // namespace

VariationalResult variational_subsystem2(const SystemParams& params, double r_perihelion,
                                         double tau_period, int periods,
                                         const IntegrateOptions& opts) {
    if (periods < 1) fail(ErrorKind::DomainError, "periods must be >= 1");
    VariationalResult out;
    out.tau_period = tau_period;
    out.periods = periods;

    const double tol_rate = opts.tol * (1.0 + std::abs(params.h));
    detail::Dopri5<8, TauRhs> st(TauRhs{&params}, tol_rate, 2.0 * kPi);
    std::array<double, 8> y0{0.0, r_perihelion, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    st.init(0.0, y0, 1e-3 * tau_period);
    const double h_min = 1e-14 * tau_period;

    auto run_to = [&](double tau_stop) {
        while (st.step(tau_stop, h_min)) {
            if (!(st.y()[1] > 0.0)) fail(ErrorKind::RBlowup, "planar radius collapsed");
        }
    };
    run_to(tau_period);
    out.monodromy = classify_monodromy({st.y()[2], st.y()[4], st.y()[3], st.y()[5]});
    if (periods > 1) run_to(tau_period * periods);
    out.winding = st.y()[6];
    out.winding_second = st.y()[7];
    return out;
}

namespace {

struct Var4Rhs {
    const SystemParams* p;
    void operator()(double, const std::array<double, 20>& y, std::array<double, 20>& dy) const {
        const double pr = y[0], pz = y[1], r = y[2], z = y[3];
        const double w2 = p->omega * p->omega;
        const double s2 = r * r + z * z;
        const double s = std::sqrt(s2);
        const double s3 = s2 * s, s5 = s3 * s2;
        double fr = 0.0, fz = 0.0, frr = 0.0, frz = 0.0, fzz = 0.0;
        if (p->eps != 0.0 && !p->perturbation.is_zero()) {
            fr = p->perturbation.fr(r, z);
            fz = p->perturbation.fz(r, z);
            frr = p->perturbation.frr(r, z);
            frz = p->perturbation.frz(r, z);
            fzz = p->perturbation.fzz(r, z);
        }
        dy[0] = w2 / (r * r * r) - r / s3 - p->eps * fr;
        dy[1] = -z / s3 - p->eps * fz;
        dy[2] = pr;
        dy[3] = pz;
        const double vrr = 3.0 * w2 / (r * r * r * r) + 1.0 / s3 - 3.0 * r * r / s5 + p->eps * frr;
        const double vrz = -3.0 * r * z / s5 + p->eps * frz;
        const double vzz = 1.0 / s3 - 3.0 * z * z / s5 + p->eps * fzz;
        // dPhi = A Phi, A rows ordered (dp_r, dp_z, dr, dz)
        for (int c = 0; c < 4; ++c) {
            const double dpr = y[4 + 0 * 4 + c], dpz = y[4 + 1 * 4 + c];
            const double dr = y[4 + 2 * 4 + c], dz = y[4 + 3 * 4 + c];
            dy[4 + 0 * 4 + c] = -vrr * dr - vrz * dz;
            dy[4 + 1 * 4 + c] = -vrz * dr - vzz * dz;
            dy[4 + 2 * 4 + c] = dpr;
            dy[4 + 3 * 4 + c] = dpz;
        }
    }
};

double det4(const std::array<double, 16>& a_in) {
    std::array<double, 16> a = a_in;
    double det = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 4; ++rr)
            if (std::abs(a[rr * 4 + c]) > std::abs(a[piv * 4 + c])) piv = rr;
        if (piv != c) {
            for (int k = 0; k < 4; ++k) std::swap(a[c * 4 + k], a[piv * 4 + k]);
            det = -det;
        }
        const double d = a[c * 4 + c];
        if (d == 0.0) return 0.0;
        det *= d;
        for (int rr = c + 1; rr < 4; ++rr) {
            const double f = a[rr * 4 + c] / d;
            for (int k = c; k < 4; ++k) a[rr * 4 + k] -= f * a[c * 4 + k];
        }
    }
    return det;
}

} // namespace

Variational4 integrate_variational4(const PhaseState& start, const SystemParams& params,
                                    double t_end, const IntegrateOptions& opts) {
    if (!(start.r > 0.0)) fail(ErrorKind::DomainError, "integration requires r > 0");
    const double t_ref = reference_period(params);
    const double tol_rate = opts.tol * (1.0 + std::abs(params.h));
    detail::Dopri5<20, Var4Rhs> st(Var4Rhs{&params}, tol_rate, t_ref);
    std::array<double, 20> y0{};
    y0[0] = start.p_r;
    y0[1] = start.p_z;
    y0[2] = start.r;
    y0[3] = start.z;
    for (int i = 0; i < 4; ++i) y0[4 + i * 4 + i] = 1.0;
    st.init(0.0, y0, 1e-3 * t_ref);
    const double h_min = 1e-14 * std::max(1.0, t_ref);
    const double r_floor = opts.r_floor > 0.0 ? opts.r_floor : 0.25 * params.omega * params.omega;
    while (st.step(t_end, h_min)) {
        if (st.y()[2] < r_floor) fail(ErrorKind::RBlowup, "r fell below omega^2/4");
    }
    Variational4 out;
    out.state = PhaseState{st.y()[0], st.y()[1], st.y()[2], st.y()[3]};
    for (int i = 0; i < 16; ++i) out.transition[i] = st.y()[4 + i];
    out.det = det4(out.transition);
    return out;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,p_r,p_z,r,z\n";
    char buf[160];
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const PhaseState& s = traj.states[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.t[i], s.p_r, s.p_z,
                      s.r, s.z);
        os << buf;
    }
}

} // namespace keplerkit::flow
