// Verification-grid runner: executes every check at its pinned tolerance and
// prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <iostream>

#include "cberry/verify.hpp"

int main() {
    const auto checks = cberry::run_acceptance_checks(1.0, &std::cerr);
    return cberry::report_checks(checks, std::cout);
}
