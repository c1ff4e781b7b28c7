#pragma once

#include <cstdint>

#include "dilat/report.hpp"
#include "dilat/schedule.hpp"
#include "dilat/structure.hpp"

namespace dilat {

struct AuditConfig {
    int sample_count = 50;
    double radius = 0.6;         // base points and exact-identity probes
    double probe_radius = 0.005;  // offsets for the A4 limit (see below)
    std::uint64_t seed = 7;
    // The base schedule bottoms out near 6e-5. Structures whose dilatations
    // rescale a graded coordinate by 1/eps^2 amplify coordinate roundoff
    // like ulp/eps^2, which drowns traces below ~1e-5; small probe offsets
    // keep the genuine eps-linear residual under the tolerance inside that
    // window. Structures with linear rescales converge further down, so the
    // A3/A4 classification extends the schedule adaptively until the trace
    // either converges or hits its own noise floor.
    EpsSchedule schedule{0.5, 0.5, 14};
    double exact_tol = 1e-10;    // A0/A1/A2 identities
    double metric_tol = 1e-12;   // metric symmetry / indiscernibles
    double limit_tol = 1e-6;     // A3/A4 residuals
    double degenerate_floor = 1e-8;
    int jobs = 1;
};

/// Audits A0-A4 plus the metric axioms on seeded samples. A1/A2 are exact
/// identities; A3/A4 are classified limits; a vanishing A3 limit between
/// distinct points flags the structure as degenerate. Deterministic given
/// seed and config regardless of jobs.
Report audit_axioms(const DilatationStructure& S, const AuditConfig& cfg = {});

Report audit_axioms(const DilatationStructure& S, int sample_count, double radius,
                    const EpsSchedule& schedule, std::uint64_t seed);

}  // namespace dilat
