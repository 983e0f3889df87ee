#pragma once

#include <string>
#include <vector>

#include "keplerkit/model.hpp"
#include "keplerkit/quad.hpp"

namespace keplerkit::criteria {

enum class Verdict { InfinitelyMany_via_i, InfinitelyMany_via_ii, Inconclusive };
enum class Stability { Elliptic, Hyperbolic, Parabolic };
const char* to_string(Verdict v);
const char* to_string(Stability s);

/// Everything the periodic-orbit criterion needs for one parameter set:
/// lhs = V~, rhs = 2 C(e) A~ + C(e)^2 sign(E) sqrt(D) / 2 (for D >= 0),
/// with three-valued verdicts carrying quadrature error bars.
struct CriteriaReport {
    double omega = 0.0, h = 0.0, eps = 0.0;
    std::string system;
    int pyramid_n = 0;
    bool omega_flipped = false;
    double e = 0.0, C = 0.0;
    quad::Functionals fn;
    double lhs = 0.0, lhs_err = 0.0;
    double rhs = 0.0, rhs_err = 0.0;
    double margin = 0.0; // |lhs - rhs| - combined error bar
    Verdict verdict = Verdict::Inconclusive;
    Stability stability = Stability::Parabolic;
};

CriteriaReport evaluate(const SystemParams& params, const quad::QuadOptions& opts = {});

/// Oblateness closed forms; vol/action/periods filled with the eps=0 values.
quad::Functionals ellipsoid_closed_forms(double omega, double h);

struct PyramidalForms {
    quad::Functionals fn; // v_tilde is the numeric quadrature value
    double v_tilde_bound = 0.0;
    bool bound_satisfied = false;
};
PyramidalForms pyramidal_closed_forms(double omega, double h, int n,
                                      const quad::QuadOptions& opts = {});

struct CrossCheckRow {
    std::string name;
    double numeric = 0.0;
    double reference = 0.0;
    double rel_err = 0.0;
    bool pass = false;
};
struct CrossCheckReport {
    std::vector<CrossCheckRow> rows;
    bool all_pass = true;
};
/// Numeric functionals against the closed forms (rel err <= 1e-6) and, when
/// requested, the rotation-number derivative against its formula (<= 1e-2).
CrossCheckReport crosscheck(const SystemParams& params, bool include_rotation = true,
                            const quad::QuadOptions& opts = {});

} // namespace keplerkit::criteria
