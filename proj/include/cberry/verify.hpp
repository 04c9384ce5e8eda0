#ifndef CBERRY_VERIFY_HPP
#define CBERRY_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cberry {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // max deviations, skip notes
};

// Runs the full verification grid.  tol_scale multiplies every tolerance
// (1.0 for the standard run; smaller values tighten the gates and are
// expected to produce controlled failures).  Progress lines go to `progress`
// when non-null.
std::vector<CheckResult> run_acceptance_checks(double tol_scale,
                                               std::ostream* progress);

// Prints one pass/fail line per check; returns 0 iff all passed.
int report_checks(const std::vector<CheckResult>& checks, std::ostream& out);

} // namespace cberry

#endif
