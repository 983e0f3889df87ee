#pragma once

// Dormand-Prince 5(4) with FSAL, PI step control, and error-per-unit-step
// scaling so accumulated drift tracks tol * (elapsed / t_ref).

#include <algorithm>
#include <array>
#include <cmath>

#include "keplerkit/error.hpp"

namespace keplerkit::detail {

template <int N, class RHS>
class Dopri5 {
public:
    using State = std::array<double, N>;

    Dopri5(RHS rhs, double tol_rate, double t_ref)
        : rhs_(std::move(rhs)), tol_rate_(tol_rate), t_ref_(t_ref) {}

    void init(double t0, const State& y0, double h_guess) {
        t_ = t0;
        y_ = y0;
        rhs_(t_, y_, k_[0]);
        h_ = h_guess;
        err_prev_ = 1.0;
        first_ = true;
    }

    double t() const { return t_; }
    const State& y() const { return y_; }
    const State& f() const { return k_[0]; } // RHS at current point
    double last_h() const { return h_acc_; }
    const State& y_prev() const { return yp_; }
    double t_prev() const { return tp_; }
    const State& f_prev() const { return fp_; }

    void clamp_next(double h_max) { h_ = std::min(h_, h_max); }

    /// Advance by one accepted step, not exceeding t_stop.
    /// Returns false when t_stop was reached exactly.
    bool step(double t_stop, double h_min) {
        if (t_ >= t_stop) return false;
        for (int attempt = 0; attempt < 400; ++attempt) {
            double h = std::min(h_, t_stop - t_);
            const bool clipped = h < h_ * 0.999999;
            if (h < h_min) fail(ErrorKind::StepFailure, "step size underflow");
            State y1;
            const double err = attempt_step(h, y1);
            if (err <= 1.0) {
                tp_ = t_;
                yp_ = y_;
                fp_ = k_[0];
                t_ += h;
                y_ = y1;
                k_[0] = k_[6]; // FSAL
                h_acc_ = h;
                if (!clipped) update_controller(err, h);
                first_ = false;
                return true;
            }
            h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        fail(ErrorKind::StepFailure, "too many rejected steps");
    }

    /// One fixed raw step of size dt from (t_prev, y_prev); used to evaluate
    /// the solution inside an accepted step when polishing events.
    State substep(double dt) const {
        State y1;
        raw_step(tp_, yp_, fp_, dt, y1);
        return y1;
    }

private:
    double attempt_step(double h, State& y1) {
        raw_step(t_, y_, k_[0], h, y1, k_.data());
        // error estimate vs the embedded 4th-order solution
        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            double de = 0.0;
            for (int s = 0; s < 7; ++s) de += kE[s] * k_[s][i];
            de *= h;
            const double sc = tol_rate_ * std::abs(h) / t_ref_ *
                              (1.0 + std::max(std::abs(y_[i]), std::abs(y1[i])));
            const double q = de / std::max(sc, 1e-300);
            err += q * q;
        }
        return std::sqrt(err / N);
    }

    void update_controller(double err, double h) {
        err = std::max(err, 1e-10);
        double fac = 0.9 * std::pow(err, -0.2);
        if (!first_) fac *= std::pow(err_prev_, 0.08);
        fac = std::clamp(fac, 0.2, 6.0);
        h_ = h * fac;
        err_prev_ = err;
    }

    void raw_step(double t0, const State& y0, const State& f0, double h, State& y1,
                  State* kout = nullptr) const {
        State ks[7];
        ks[0] = f0;
        State tmp;
        for (int s = 1; s < 7; ++s) {
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += kA[s][j] * ks[j][i];
                tmp[i] = y0[i] + h * acc;
            }
            rhs_(t0 + kC[s] * h, tmp, ks[s]);
        }
        // stage 7 already lands on the 5th-order solution (FSAL): tmp == y1
        y1 = tmp;
        if (kout)
            for (int s = 0; s < 7; ++s) kout[s] = ks[s];
    }

    static constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double kA[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double kE[7] = {71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    RHS rhs_;
    double tol_rate_;
    double t_ref_;
    double t_ = 0.0, h_ = 1e-3, h_acc_ = 0.0, err_prev_ = 1.0;
    double tp_ = 0.0;
    State y_{}, yp_{}, fp_{};
    std::array<State, 7> k_{};
    bool first_ = true;
};

} // namespace keplerkit::detail
