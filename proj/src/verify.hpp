#pragma once

// Self-contained invariant suites runnable from the command line: quick
// versions of the identities the solver must satisfy (discretization
// convergence against semi-analytic values, exact scaling, disjoint-union
// spectra, ball optimality sampling, agreement of the two eigensolver
// routes). Each suite is deterministic and needs no external fixtures.

#include <string>
#include <vector>

namespace rshapes {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
    std::string table() const;  // aligned PASS/FAIL lines plus a summary row
};

// Runs every suite whose name contains `filter` (all when empty).
// `inject_fault` is a testing hook: "boundary_scale_1.01" perturbs the
// boundary matrix inside the scaling suite, which must then fail.
VerifyReport run_verification(const std::string& filter = "",
                              const std::string& inject_fault = "");

}  // namespace rshapes
