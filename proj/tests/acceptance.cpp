// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Runs the same battery as the `suite` CLI subcommand.

#include <iostream>

#include "dilat/suite.hpp"

int main() {
    dilat::SuiteConfig cfg;
    cfg.seed = 2024;
    cfg.check_determinism = true;
    const auto result = dilat::run_acceptance_suite(cfg);
    dilat::print_criteria(std::cout, result);
    std::cout << "wall_ms=" << result.report.wall_ms << "\n";
    return result.all_pass() ? 0 : 1;
}
