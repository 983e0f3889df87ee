#pragma once

#include <string>
#include <vector>

namespace keplerkit::selftest {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;
    bool all_pass = true;
};

/// Quadrature oracles plus a condensed battery of the module invariants:
/// perturbation symmetry and partials, classification monotonicity, the
/// volume identity, the brake-residual closed form, and the unperturbed
/// rotation number.
Report run_all();

} // namespace keplerkit::selftest
