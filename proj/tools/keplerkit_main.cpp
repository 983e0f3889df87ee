// keplerkit command line: classification, closed-form scalars, integral
// functionals, periodic-orbit criteria, brake-orbit shooting, return-map
// studies, self tests, and parameter sweeps over the reduced problem.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "keplerkit/criteria.hpp"
#include "keplerkit/flow.hpp"
#include "keplerkit/kepler.hpp"
#include "keplerkit/model.hpp"
#include "keplerkit/orbits.hpp"
#include "keplerkit/parallel.hpp"
#include "keplerkit/quad.hpp"
#include "keplerkit/report.hpp"
#include "keplerkit/retmap.hpp"
#include "keplerkit/selftest.hpp"

using namespace keplerkit;
using report::json;

namespace {

struct CommonArgs {
    double omega = 1.0;
    double energy = -0.375;
    double eps = 0.0;
    std::string system = "kepler";
    int n = 2;
    double tol = 1e-12;
    double quad_tol = 1e-10;
    int periods = 64;
    std::string grid = "10x10";
    int seeds = 64;
    std::uint64_t seed = 0x5eed5eedULL;
    std::string out;
    std::string format = "json";
};

// flat key=value file; '#' comments
std::map<std::string, std::string> read_kv(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::IoError, "cannot read " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

Perturbation load_custom(const std::string& path) {
    const auto kv = read_kv(path);
    const auto kind = kv.count("kind") ? kv.at("kind") : "zero";
    Perturbation p;
    if (kind == "zero")
        p = zero_perturbation();
    else if (kind == "ellipsoid")
        p = make_ellipsoid_perturbation();
    else if (kind == "pyramid")
        p = make_pyramidal_perturbation(kv.count("n") ? std::stoi(kv.at("n")) : 2);
    else
        fail(ErrorKind::DomainError, "custom perturbation kind must be zero|ellipsoid|pyramid");
    if (kv.count("scale")) p = scaled(p, std::stod(kv.at("scale")));
    if (kv.count("fd_partials") && kv.at("fd_partials") == "true") p = with_fd_partials(p);
    p.name = "custom:" + kind;
    return p;
}

SystemParams build_params(const CommonArgs& a) {
    std::string sys = a.system;
    int n = a.n;
    if (sys.rfind("pyramid:", 0) == 0) {
        n = std::stoi(sys.substr(8));
        sys = "pyramid";
    }
    if (sys == "kepler") {
        if (a.eps != 0.0)
            fail(ErrorKind::DomainError, "the kepler system has no perturbation; eps must be 0");
        return kepler_params(a.omega, a.energy);
    }
    if (sys == "ellipsoid") return ellipsoid_params(a.omega, a.energy, a.eps);
    if (sys == "pyramid") return pyramidal_params(a.omega, a.energy, a.eps, n);
    if (sys.rfind("custom:", 0) == 0)
        return make_params(a.omega, a.energy, a.eps, load_custom(sys.substr(7)));
    fail(ErrorKind::DomainError,
         "--system must be kepler|ellipsoid|pyramid|pyramid:N|custom:PATH, got " + sys);
}

quad::QuadOptions quad_options(const CommonArgs& a) {
    quad::QuadOptions q;
    q.abs_tol_1d = a.quad_tol;
    q.rel_tol_2d = std::max(1e-12, 100.0 * a.quad_tol);
    return q;
}

json config_json(const CommonArgs& a, const std::string& subcommand) {
    json c;
    c["subcommand"] = subcommand;
    c["system"] = a.system;
    c["omega"] = a.omega;
    c["energy"] = a.energy;
    c["eps"] = a.eps;
    c["n"] = a.n;
    c["tol"] = a.tol;
    c["quad_tol"] = a.quad_tol;
    c["periods"] = a.periods;
    c["grid"] = a.grid;
    c["seeds"] = a.seeds;
    c["seed"] = a.seed;
    c["out"] = a.out;
    c["format"] = a.format;
    return c;
}

json wrap_report(const CommonArgs& a, const std::string& subcommand, json payload) {
    json j;
    j["schema"] = 1;
    j["config"] = config_json(a, subcommand);
    j["result"] = std::move(payload);
    return j;
}

void emit_json(const CommonArgs& a, const json& j) {
    const std::string text = report::dump_17g(j);
    if (a.out.empty() && a.format != "csv") std::cout << text;
    if (!a.out.empty() && (a.format == "json" || a.format == "both"))
        report::write_text_file(a.out + ".json", text);
}

void emit_csv(const CommonArgs& a, const std::string& csv) {
    if (a.out.empty()) {
        if (a.format != "json") std::cout << csv;
        return;
    }
    if (a.format == "csv" || a.format == "both") report::write_text_file(a.out + ".csv", csv);
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) {
        const int n = std::stoi(s);
        return {n, n};
    }
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

struct Range {
    double lo = 0.0, hi = 0.0;
    int count = 1;
};

Range parse_range(const std::string& s) {
    Range r;
    std::stringstream ss(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() == 1) {
        r.lo = r.hi = std::stod(parts[0]);
        r.count = 1;
        return r;
    }
    if (parts.size() != 3) fail(ErrorKind::DomainError, "range must be LO:HI:COUNT, got " + s);
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    r.count = std::stoi(parts[2]);
    if (r.count < 1) fail(ErrorKind::DomainError, "range count must be >= 1");
    return r;
}

double range_at(const Range& r, int i) {
    if (r.count == 1) return r.lo;
    return r.lo + (r.hi - r.lo) * i / (r.count - 1.0);
}

int run_classify(const CommonArgs& a) {
    std::string sys = a.system;
    EnergySurfaceClass cls;
    if (sys == "pyramid" || sys.rfind("pyramid:", 0) == 0) {
        const int n = sys.rfind("pyramid:", 0) == 0 ? std::stoi(sys.substr(8)) : a.n;
        cls = classify_pyramidal_surface(a.omega, a.energy, a.eps, n);
    } else {
        cls = classify_kepler_surface(a.omega, a.energy);
    }
    std::cout << to_string(cls) << "\n";
    if (!a.out.empty()) {
        json payload;
        payload["class"] = to_string(cls);
        payload["two_h_omega_sq"] = 2.0 * a.energy * a.omega * a.omega;
        emit_json(a, wrap_report(a, "classify", payload));
    }
    return 0;
}

int run_scalars(const CommonArgs& a) {
    const auto s = kepler::scalars(a.omega, a.energy);
    json payload;
    payload["e"] = s.e;
    payload["a"] = s.a;
    payload["r_min"] = s.r_min;
    payload["r_max"] = s.r_max;
    payload["action"] = s.action;
    payload["volume"] = s.volume;
    payload["C"] = s.C;
    payload["circular_brake_r"] = s.circular_brake_r;
    payload["period"] = kepler::period(a.omega, a.energy);
    emit_json(a, wrap_report(a, "scalars", payload));
    return 0;
}

int run_functionals(const CommonArgs& a) {
    const auto params = build_params(a);
    const auto fn = quad::perturbation_functionals(params, quad_options(a));
    emit_json(a, wrap_report(a, "functionals", report::to_json(fn)));
    return 0;
}

int run_criteria(const CommonArgs& a) {
    const auto params = build_params(a);
    auto rep = criteria::evaluate(params, quad_options(a));
    json payload = report::to_json(rep);
    if (params.perturbation.name == "ellipsoid" || params.perturbation.name == "pyramid") {
        const auto cc = criteria::crosscheck(params, false, quad_options(a));
        json rows = json::array();
        for (const auto& row : cc.rows) {
            json rj;
            rj["name"] = row.name;
            rj["numeric"] = row.numeric;
            rj["reference"] = row.reference;
            rj["rel_err"] = row.rel_err;
            rj["pass"] = row.pass;
            rows.push_back(rj);
        }
        payload["crosscheck"] = rows;
        payload["crosscheck_pass"] = cc.all_pass;
    }
    emit_json(a, wrap_report(a, "criteria", payload));
    return 0;
}

int run_orbit(const CommonArgs& a) {
    const auto params = build_params(a);
    flow::IntegrateOptions io;
    io.tol = a.tol;
    const auto orb = orbits::planar_orbit(params, io);
    const auto rot = orbits::rotation_number(params, a.periods, io);
    json payload;
    payload["r1"] = orb.r1;
    payload["r2"] = orb.r2;
    payload["period"] = orb.period_t;
    payload["period_tau"] = orb.period_tau;
    payload["closure_residual"] = orb.closure_residual;
    payload["energy_residual"] = orb.energy_residual;
    payload["rot"] = rot.rot;
    payload["mean_index"] = rot.mean_index;
    payload["rot_error_estimate"] = rot.error_estimate;
    payload["periods_used"] = rot.periods_used;
    payload["stability"] = flow::to_string(rot.stability);
    payload["monodromy_trace"] = rot.monodromy_trace;
    payload["monodromy_det"] = rot.monodromy_det;
    emit_json(a, wrap_report(a, "orbit", payload));

    std::ostringstream csv;
    csv << "t,p_r,p_z,r,z\n";
    for (std::size_t i = 0; i < orb.t.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", orb.t[i], orb.p_r[i],
                      0.0, orb.r[i], 0.0);
        csv << buf;
    }
    emit_csv(a, csv.str());
    return 0;
}

int run_brake(const CommonArgs& a) {
    const auto params = build_params(a);
    orbits::ShootOptions so;
    so.integ.tol = a.tol;
    const auto bo = orbits::shoot_brake_orbit(params, so);
    json payload;
    payload["r0"] = bo.r0;
    payload["launch_r"] = bo.launch.r;
    payload["launch_z"] = bo.launch.z;
    payload["crossing_r"] = bo.crossing.r;
    payload["crossing_p_z"] = bo.crossing.p_z;
    payload["t_cross"] = bo.t_cross;
    payload["period"] = bo.period;
    payload["shoot_residual"] = bo.shoot_residual;
    payload["symmetry_residual"] = bo.symmetry_residual;
    payload["rest_momentum"] = bo.rest_momentum;
    payload["link_count"] = bo.link_count;
    payload["energy_drift"] = bo.trajectory.energy_drift;
    emit_json(a, wrap_report(a, "brake", payload));

    std::ostringstream csv;
    flow::write_csv(bo.trajectory, csv);
    emit_csv(a, csv.str());
    return 0;
}

int run_return_map(const CommonArgs& a) {
    const auto params = build_params(a);
    const auto [gn, gp] = parse_grid(a.grid);
    retmap::ReturnOptions ro;
    ro.integ.tol = a.tol;
    const auto area = retmap::area_preservation_test(params, {gn, gp, 0.08}, ro);

    retmap::SearchOptions so;
    so.random_seeds = a.seeds;
    so.rng_seed = a.seed;
    so.ret.integ.tol = std::max(a.tol, 1e-11);
    const auto search = retmap::find_periodic_points(params, so);

    json payload;
    payload["grid"] = a.grid;
    payload["points_tested"] = static_cast<int>(area.rows.size());
    payload["max_abs_det_minus_1"] = area.max_abs_det_minus_1;
    payload["min_return_time"] = area.min_return_time;
    payload["seeds_tried"] = search.seeds_tried;
    payload["converged_raw"] = search.converged_raw;
    payload["distinct_orbits"] = static_cast<int>(search.orbits.size());
    payload["rng_seed"] = a.seed;
    json orbs = json::array();
    for (const auto& o : search.orbits) {
        json oj;
        oj["k"] = o.k;
        oj["r"] = o.x.r;
        oj["p_r"] = o.x.p_r;
        oj["return_time"] = o.return_time;
        oj["residual"] = o.residual;
        orbs.push_back(oj);
    }
    payload["orbits"] = orbs;
    emit_json(a, wrap_report(a, "return-map", payload));

    std::ostringstream csv;
    csv << "k,r,p_r,return_time,residual\n";
    for (const auto& o : search.orbits) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", o.k, o.x.r, o.x.p_r,
                      o.return_time, o.residual);
        csv << buf;
    }
    emit_csv(a, csv.str());
    return 0;
}

int run_selftest(const CommonArgs& a) {
    const auto rep = selftest::run_all();
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    std::cout << (rep.all_pass ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
    if (!a.out.empty()) {
        json payload;
        payload["all_pass"] = rep.all_pass;
        json checks = json::array();
        for (const auto& c : rep.checks) {
            json cj;
            cj["name"] = c.name;
            cj["pass"] = c.pass;
            if (!c.detail.empty()) cj["detail"] = c.detail;
            checks.push_back(cj);
        }
        payload["checks"] = checks;
        emit_json(a, wrap_report(a, "selftest", payload));
    }
    return rep.all_pass ? 0 : 1;
}

int run_sweep(const CommonArgs& a, const std::string& omega_range, const std::string& energy_range,
              const std::string& eps_range, const std::string& n_list) {
    const Range rw = omega_range.empty() ? Range{a.omega, a.omega, 1} : parse_range(omega_range);
    const Range rh = energy_range.empty() ? Range{a.energy, a.energy, 1} : parse_range(energy_range);
    const Range re = eps_range.empty() ? Range{a.eps, a.eps, 1} : parse_range(eps_range);
    std::vector<int> ns;
    const bool pyramid = a.system == "pyramid" || a.system.rfind("pyramid:", 0) == 0;
    if (pyramid) {
        std::stringstream ss(n_list.empty() ? std::to_string(a.n) : n_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) ns.push_back(std::stoi(tok));
    } else {
        ns.push_back(0);
    }

    std::vector<std::array<double, 4>> points; // omega, h, eps, n
    for (int iw = 0; iw < rw.count; ++iw)
        for (int ih = 0; ih < rh.count; ++ih)
            for (int ie = 0; ie < re.count; ++ie)
                for (int n : ns)
                    points.push_back({range_at(rw, iw), range_at(rh, ih), range_at(re, ie),
                                      static_cast<double>(n)});
    std::vector<std::string> rows(points.size());
    int evaluated = 0;
    const auto qopts = quad_options(a);
    parallel::parallel_for(points.size(), [&](std::size_t i) {
        const auto [w, h, eps, nd] = points[i];
        try {
            CommonArgs local = a;
            local.omega = w;
            local.energy = h;
            local.eps = eps;
            local.n = std::max(2, static_cast<int>(nd));
            const auto params = build_params(local);
            const auto rep = criteria::evaluate(params, qopts);
            char buf[512];
            if (pyramid)
                std::snprintf(
                    buf, sizeof buf,
                    "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n", w, h,
                    rep.e, static_cast<int>(nd), rep.fn.v_tilde, rep.fn.a_tilde, rep.fn.t_tilde,
                    rep.fn.e_f, rep.fn.d_f, rep.lhs, rep.rhs, criteria::to_string(rep.verdict),
                    criteria::to_string(rep.stability));
            else
                std::snprintf(buf, sizeof buf,
                              "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n",
                              w, h, rep.e, rep.fn.v_tilde, rep.fn.a_tilde, rep.fn.t_tilde,
                              rep.fn.e_f, rep.fn.d_f, rep.lhs, rep.rhs,
                              criteria::to_string(rep.verdict), criteria::to_string(rep.stability));
            rows[i] = buf;
        } catch (const std::exception& ex) {
            rows[i] = std::string("# skipped point: ") + ex.what() + "\n";
        }
    });
    for (const auto& row : rows)
        if (row.rfind("#", 0) != 0) ++evaluated;

    std::ostringstream csv;
    csv << (pyramid ? "omega,h,e,n,V,A,T,E,D,lhs,rhs,verdict,stability\n"
                    : "omega,h,e,V,A,T,E,D,lhs,rhs,verdict,stability\n");
    for (const auto& row : rows) csv << row;
    emit_csv(a, csv.str());
    if (!a.out.empty() && (a.format == "json" || a.format == "both")) {
        json payload;
        payload["points"] = static_cast<int>(points.size());
        payload["evaluated"] = evaluated;
        emit_json(a, wrap_report(a, "sweep", payload));
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--omega", a.omega, "z-axis angular momentum (nonzero)");
    cmd->add_option("--energy", a.energy, "energy h");
    cmd->add_option("--eps", a.eps, "perturbation scale, 0 <= eps < 1")
        ->check(CLI::Range(0.0, 0.9999999));
    cmd->add_option("--system", a.system, "kepler|ellipsoid|pyramid|pyramid:N|custom:PATH");
    cmd->add_option("--n", a.n, "pyramid vertex count (n >= 2)")->check(CLI::Range(2, 1000000));
    cmd->add_option("--tol", a.tol, "integrator tolerance")->check(CLI::Range(1e-14, 1e-4));
    cmd->add_option("--quad-tol", a.quad_tol, "quadrature tolerance")
        ->check(CLI::Range(1e-14, 1e-4));
    cmd->add_option("--periods", a.periods, "periods for the rotation-number winding")
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--grid", a.grid, "grid spec N or NxM");
    cmd->add_option("--seeds", a.seeds, "random seeds in the periodic-point search")
        ->check(CLI::Range(0, 100000));
    cmd->add_option("--seed", a.seed, "random generator seed");
    cmd->add_option("--out", a.out, "output base path (writes BASE.json / BASE.csv)");
    cmd->add_option("--format", a.format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"keplerkit: numerics for the symmetrically perturbed spatial Kepler problem"};
    app.set_config("--config", "", "flat key=value config file (flags win over file values)");
    app.require_subcommand(1);

    CommonArgs a;
    std::string omega_range, energy_range, eps_range, n_list;

    auto* classify = app.add_subcommand("classify", "energy-surface classification");
    auto* scalars = app.add_subcommand("scalars", "closed-form scalars of the unperturbed problem");
    auto* functionals =
        app.add_subcommand("functionals", "contact volume, action, periods, first-order functionals");
    auto* crit = app.add_subcommand("criteria", "periodic-orbit criteria verdict with crosschecks");
    auto* orbit = app.add_subcommand("orbit", "planar orbit and its rotation number");
    auto* brake = app.add_subcommand("brake", "z-symmetric brake orbit by shooting");
    auto* retm =
        app.add_subcommand("return-map", "section return map: grid test and periodic points");
    auto* self = app.add_subcommand("selftest", "quadrature oracles and module invariants");
    auto* sweep = app.add_subcommand("sweep", "criteria over a parameter grid, CSV output");
    add_common(&app, a);
    for (auto* cmd : {classify, scalars, functionals, crit, orbit, brake, retm, self, sweep})
        cmd->fallthrough();
    sweep->add_option("--omega-range", omega_range, "LO:HI:COUNT");
    sweep->add_option("--energy-range", energy_range, "LO:HI:COUNT");
    sweep->add_option("--eps-range", eps_range, "LO:HI:COUNT");
    sweep->add_option("--n-list", n_list, "comma-separated pyramid n values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (classify->parsed()) return run_classify(a);
        if (scalars->parsed()) return run_scalars(a);
        if (functionals->parsed()) return run_functionals(a);
        if (crit->parsed()) return run_criteria(a);
        if (orbit->parsed()) return run_orbit(a);
        if (brake->parsed()) return run_brake(a);
        if (retm->parsed()) return run_return_map(a);
        if (self->parsed()) return run_selftest(a);
        if (sweep->parsed()) return run_sweep(a, omega_range, energy_range, eps_range, n_list);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
