#pragma once

#include <cstdint>
#include <iosfwd>

#include "dilat/report_io.hpp"

namespace dilat {

struct SuiteConfig {
    std::uint64_t seed = 2024;
    bool check_determinism = true;  // criterion 12 re-runs the battery
    int jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    RunReport report;

    bool all_pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

/// The full acceptance battery. Every tolerance is pinned in code; the
/// returned report is deterministic for a given seed (wall clock aside).
SuiteResult run_acceptance_suite(const SuiteConfig& cfg = {});

/// One line per criterion: "[PASS] 3. heisenberg tangent operations ...".
void print_criteria(std::ostream& os, const SuiteResult& result);

}  // namespace dilat
