#include "keplerkit/selftest.hpp"

#include <cmath>
#include <sstream>

#include "keplerkit/kepler.hpp"
#include "keplerkit/model.hpp"
#include "keplerkit/orbits.hpp"
#include "keplerkit/quad.hpp"

namespace keplerkit::selftest {

namespace {

void add(Report& rep, const std::string& name, bool pass, const std::string& detail = "") {
    rep.checks.push_back({name, pass, detail});
    rep.all_pass = rep.all_pass && pass;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool symmetry_grid(const Perturbation& f) {
    for (int i = 1; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j) {
            const double r = 0.3 + 0.15 * i, z = -1.5 + 0.15 * j;
            const double a = f.eval(r, z), b = f.eval(r, -z);
            if (std::abs(a - b) > 1e-15 * std::max(1.0, std::abs(a))) return false;
        }
    return true;
}

bool partials_vs_fd(const Perturbation& f) {
    for (double r : {0.7, 1.1, 1.9})
        for (double z : {-0.8, 0.0, 0.5}) {
            const double d = 1e-6;
            const double fr_fd = (f.eval(r + d, z) - f.eval(r - d, z)) / (2.0 * d);
            const double fz_fd = (f.eval(r, z + d) - f.eval(r, z - d)) / (2.0 * d);
            if (std::abs(f.fr(r, z) - fr_fd) > 1e-6 * std::max(1.0, std::abs(fr_fd))) return false;
            if (std::abs(f.fz(r, z) - fz_fd) > 1e-6 * std::max(1.0, std::abs(fz_fd))) return false;
        }
    return true;
}

} // namespace

Report run_all() {
    Report rep;

    auto qt = quad::integral_selftests();
    for (const auto& c : qt.cases)
        add(rep, "quadrature: " + c.name, c.pass, "abs err " + num(c.abs_err));

    for (const auto& f : {make_ellipsoid_perturbation(), make_pyramidal_perturbation(2),
                          make_pyramidal_perturbation(5)}) {
        add(rep, "reflection symmetry: " + f.name, symmetry_grid(f));
        add(rep, "analytic partials vs finite differences: " + f.name, partials_vs_fd(f));
    }

    {
        bool mono = true;
        EnergySurfaceClass prev = EnergySurfaceClass::Empty;
        for (double h = -0.9; h <= 0.3; h += 0.01) {
            const auto c = classify_kepler_surface(1.0, h);
            if (static_cast<int>(c) < static_cast<int>(prev)) mono = false;
            prev = c;
        }
        add(rep, "classification monotone in h", mono);
    }

    {
        const auto ks = kepler::scalars(1.0, -0.375);
        const auto vol = quad::contact_volume(kepler_params(1.0, -0.375));
        add(rep, "volume identity vol = action^2",
            std::abs(vol.value - ks.volume) <= 1e-6 * ks.volume,
            num(vol.value) + " vs " + num(ks.volume));
    }

    {
        SystemParams p = kepler_params(1.0, -0.375);
        double worst = 0.0;
        for (int i = 1; i <= 8; ++i) {
            const double r = 0.70 + (1.95 - 0.70) * i / 9.0;
            const double miss = orbits::brake_miss_distance(r, p);
            worst = std::max(worst, std::abs(miss - kepler::brake_pr_oracle(r, 1.0, -0.375)));
        }
        add(rep, "brake residual matches closed form", worst <= 1e-7, "max dev " + num(worst));
    }

    {
        const auto rot = orbits::rotation_number(kepler_params(1.0, -0.375), 16);
        add(rep, "unperturbed rotation number is 1", std::abs(rot.rot - 1.0) <= 1e-6,
            num(rot.rot));
    }

    return rep;
}

} // namespace keplerkit::selftest
