#pragma once

#include <cstdint>

#include "dilat/curve.hpp"
#include "dilat/report.hpp"
#include "dilat/schedule.hpp"
#include "dilat/structure.hpp"
#include "dilat/tangent.hpp"

namespace dilat {

struct VariationResult {
    double value = 0.0;   // a lower bound when !converged
    bool converged = true;
    int depth = 0;
};

/// Var(c) over dyadic partitions, refined until the level-to-level increase
/// drops below refine_tol. Partition sums only grow under refinement, so the
/// result is a monotone lower approximation of the supremum.
VariationResult variation(const Curve& c, const DilatationStructure& S, double refine_tol = 1e-5,
                          int max_depth = 20);

/// Lip(c)(t): the limsup of chord ratios over shrinking windows. Returns
/// +infinity when the per-window sups keep growing (unbounded dilatation).
double upper_dilatation(const Curve& c, double t, const DilatationStructure& S,
                        double window = 0.1, int window_scales = 6, int pairs_per_window = 16);

/// md(c)(t) = lim d(c(s), c(t)) / |s - t|, taken along both one-sided
/// schedules; the sides must agree or the estimate is inconclusive.
LimitEstimate<double> metric_derivative(const Curve& c, double t, const DilatationStructure& S,
                                        const EpsSchedule& schedule = {0.5, 0.5, 20});

struct LengthResult {
    double value = 0.0;
    bool variation_fallback = false;  // Lipschitz failed somewhere; value is Var(c)
    double lip_failure_t = 0.0;
};

/// L(c) = integral of the upper dilatation (composite Simpson). A +infinity
/// integrand node means the curve is not Lipschitz; the variation value is
/// returned instead, flagged.
LengthResult length_via_dilatation(const Curve& c, const DilatationStructure& S,
                                   int quad_intervals = 1024, double window = 0.1);

/// Covering estimate of the one-dimensional Hausdorff measure of the path:
/// adaptive chord covering with segments of image diameter <= mesh. Cells
/// that never resolve (jump discontinuities) are excluded at the bisection
/// floor, matching the infimum over coverings, which may cover an isolated
/// jump point at zero cost. Caller asserts injectivity.
double hausdorff_length_estimate(const Curve& c, const DilatationStructure& S, double mesh,
                                 int max_depth = 48);

/// Arc-length reparametrization on [0, Var(c)] by monotone interpolation of
/// the cumulative variation on a uniform grid. Throws on zero-length curves.
Curve reparametrize_arclength(const Curve& c, const DilatationStructure& S, int grid = 8192);

struct DerivabilityResult {
    double t = 0.0;
    LimitEstimate<Point> forward;   // candidate cdot(t)
    LimitEstimate<Point> backward;  // candidate inv^{c(t)}(cdot(t))
    bool derivable = false;
    double inv_residual = 0.0;  // distance between backward candidate and inv(forward)
};

/// Dilatation derivability at t: the forward candidate is
/// delta^{c(t)}_{1/eps} c(t+eps); derivable demands both one-sided limits
/// converged and the backward candidate equal to inv^{c(t)}(cdot(t)).
DerivabilityResult derivative_at(const Curve& c, double t, const DilatationStructure& S,
                                 const EpsSchedule& schedule = tangent_schedule(),
                                 double match_tol = 1e-5);

struct RnProbeResult {
    Report report;
    double derivable_fraction = 0.0;
    int samples = 0;
    int oscillating_failures = 0;
    std::vector<double> failure_ts;
};

/// The Radon-Nikodym probe: arc-length reparametrize, sample parameters,
/// count the derivable fraction. Pass iff fraction >= threshold.
RnProbeResult rn_probe(const DilatationStructure& S, const Curve& c, int t_samples,
                       const EpsSchedule& schedule = tangent_schedule(),
                       std::uint64_t seed = 11, double threshold = 0.95);

struct LengthFormulaResult {
    double lhs = 0.0;     // variation-based length
    double rhs = 0.0;     // integral of d^{c(t)}(c(t), cdot(t))
    double rel_err = 0.0;
    bool refused = false;  // insufficient derivability at quadrature nodes
    double derivable_node_fraction = 0.0;
    Report report;
};

/// Both sides of the length formula, computed independently: Var-based
/// length against the integral of tangent norms of the derivative.
LengthFormulaResult length_formula_check(const DilatationStructure& S, const Curve& c,
                                         int quad_intervals = 256,
                                         const EpsSchedule& schedule = tangent_schedule(),
                                         double min_derivable_fraction = 0.95);

}  // namespace dilat
