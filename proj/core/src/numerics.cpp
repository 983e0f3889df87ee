#include "keplerkit/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "keplerkit/error.hpp"

namespace keplerkit::numerics {

double find_root(const std::function<double(double)>& f, double a, double b, double xtol,
                 int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) fail(ErrorKind::NoBracket, "find_root: no sign change on bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 2.2204460492503131e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
    }
    return b;
}

bool expand_bracket(const std::function<double(double)>& f, double& a, double& b, int max_expand) {
    double fa = f(a), fb = f(b);
    if (fa * fb <= 0.0) return true;
    for (int i = 0; i < max_expand; ++i) {
        const double mid = 0.5 * (a + b), half = 0.75 * (b - a);
        a = mid - half;
        b = mid + half;
        fa = f(a);
        fb = f(b);
        if (fa * fb <= 0.0) return true;
    }
    return false;
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkInterval {
    double a, b, value, error;
};

GkInterval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hw * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kron *= hw;
    gauss *= hw;
    double err = std::abs(kron - gauss);
    err = 200.0 * err * std::sqrt(std::max(err, 0.0));
    if (!(err < std::abs(kron - gauss))) err = std::abs(kron - gauss);
    return {a, b, kron, err};
}

} // namespace

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        double rel_tol, int max_intervals) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<GkInterval> heap;
    heap.push_back(gk15(f, a, b));
    out.evaluations = 15;
    auto totals = [&heap]() {
        double v = 0.0, e = 0.0;
        for (const auto& iv : heap) {
            v += iv.value;
            e += iv.error;
        }
        return std::pair{v, e};
    };
    while (static_cast<int>(heap.size()) < max_intervals) {
        auto [v, e] = totals();
        const double target = std::max(abs_tol, rel_tol * std::abs(v));
        if (e <= target) {
            out.value = v;
            out.error = e;
            out.converged = true;
            return out;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].error > heap[worst].error) worst = i;
        const GkInterval iv = heap[worst];
        const double mid = 0.5 * (iv.a + iv.b);
        heap[worst] = gk15(f, iv.a, mid);
        heap.push_back(gk15(f, mid, iv.b));
        out.evaluations += 30;
    }
    auto [v, e] = totals();
    out.value = v;
    out.error = e;
    out.converged = e <= std::max(abs_tol, rel_tol * std::abs(v));
    return out;
}

const GLRule& gl_rule(int n) {
    static std::map<int, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GLRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton on P_n with the Chebyshev-based initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double gl_apply(const GLRule& rule, const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(c + hw * rule.x[i]);
    return hw * sum;
}

QuadResult integrate_gl_doubling(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, double rel_tol, int n_start, int n_max) {
    QuadResult out;
    double prev = gl_apply(gl_rule(n_start), f, a, b);
    out.evaluations = n_start;
    for (int n = 2 * n_start; n <= n_max; n *= 2) {
        const double cur = gl_apply(gl_rule(n), f, a, b);
        out.evaluations += n;
        const double err = std::abs(cur - prev);
        out.value = cur;
        out.error = err;
        if (err <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

} // namespace keplerkit::numerics
