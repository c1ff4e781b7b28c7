#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dilat/report.hpp"
#include "dilat/schedule.hpp"
#include "dilat/structure.hpp"

namespace dilat {

/// A tangent object at `base`, encoded as a nearby point of the model space
/// (the tangent space here is (U(x), Sigma^x, delta^x), whose carrier is the
/// space itself). magnitude = d^x(base, rep).
struct TangentVector {
    Point base;
    Point rep;
    double magnitude = 0.0;
};

/// Defaults for tangent-group limits. The traces of Delta^x_eps on the
/// shipped structures are affine in eps, so a shallow tail refined by one
/// Richardson step carries more precision than a deep schedule: the 1/eps
/// rescale inside delta_op amplifies coordinate roundoff, and on the gauge
/// side a vertical coordinate error h costs 2*sqrt(h). Point traces are
/// therefore classified in model-space coordinates, with the classifier
/// tolerance matched to the shallow tail.
inline EpsSchedule tangent_schedule() { return {0.5, 0.5, 14}; }
inline LimitOptions tangent_options() {
    LimitOptions o;
    o.tol = 2e-4;  // covers eps_min * |u - x| residuals at desk-scale offsets
    return o;
}

/// (1/eps) d(delta^x_eps u, delta^x_eps v); the quantity whose eps -> 0 limit
/// is the tangent distance d^x(u, v).
double rescaled_distance(const DilatationStructure& S, const Point& x, Scale eps, const Point& u,
                         const Point& v);

/// d^x(u, v) as a classified limit of rescaled distances.
LimitEstimate<double> tangent_distance(const DilatationStructure& S, const Point& x,
                                       const Point& u, const Point& v,
                                       const EpsSchedule& schedule = tangent_schedule(),
                                       const LimitOptions& opt = tangent_options());

/// Delta^x_eps(u, v) = delta^{delta^x_eps u}_{1/eps} delta^x_eps v, the
/// finite-scale approximate sum.
Point delta_op(const DilatationStructure& S, const Point& x, Scale eps, const Point& u,
               const Point& v);

/// lim Delta^x_eps(u, v): the approximate-difference limit. On the shipped
/// instances it evaluates to x + v - u (linear case) and x . u^-1 . v
/// (group case); it relates to the tangent-group sum below through
/// Delta^x(u, v) = Sigma^x(inv^x(u), v).
LimitEstimate<Point> tangent_sum(const DilatationStructure& S, const Point& x, const Point& u,
                                 const Point& v,
                                 const EpsSchedule& schedule = tangent_schedule(),
                                 const LimitOptions& opt = tangent_options());

/// The tangent-group operation itself,
/// Sigma^x(u, v) = lim delta^x_{1/eps} delta^{delta^x_eps u}_eps (v):
/// the local group law of T_x X, with x neutral on both sides. The group
/// axioms (associativity, inverses, one-parameter membership) are stated
/// for this operation.
LimitEstimate<Point> tangent_group_sum(const DilatationStructure& S, const Point& x,
                                       const Point& u, const Point& v,
                                       const EpsSchedule& schedule = tangent_schedule(),
                                       const LimitOptions& opt = tangent_options());

/// inv^x(u) = lim Delta^x_eps(u, x): tangent-group inverse at x.
LimitEstimate<Point> tangent_inv(const DilatationStructure& S, const Point& x, const Point& u,
                                 const EpsSchedule& schedule = tangent_schedule(),
                                 const LimitOptions& opt = tangent_options());

TangentVector make_tangent_vector(const DilatationStructure& S, const Point& x, const Point& rep,
                                  const EpsSchedule& schedule = tangent_schedule());

/// Verifies d^x(u,v) = (1/mu) d^x(delta^x_mu u, delta^x_mu v) for the given
/// mu values; d^x always goes through tangent_distance.
Report check_cone_property(const DilatationStructure& S, const Point& x, const Point& u,
                           const Point& v, const std::vector<double>& mus,
                           const EpsSchedule& schedule = tangent_schedule(), double tol = 1e-6);

/// Verifies d^x(Sigma^x(w,u), Sigma^x(w,v)) = d^x(u,v) on sampled (w,u,v).
Report check_left_invariance(const DilatationStructure& S, const Point& x, int samples,
                             double radius, std::uint64_t seed,
                             const EpsSchedule& schedule = tangent_schedule(),
                             double tol = 1e-5);

/// The metric-tangent-space sup check: per scale eps, samples pairs in the
/// metric eps-ball around x and reports whether
/// (1/eps) sup |d(u,v) - d^x(u,v)| trends to 0. Scales below the coordinate
/// roundoff floor are skipped rather than reported as noise.
Report check_metric_tangent(const DilatationStructure& S, const Point& x,
                            const EpsSchedule& schedule = {}, int pairs_per_scale = 8,
                            std::uint64_t seed = 1, double tol = 1e-6);

/// The tangent group at a base point, with its own schedule for the limits.
struct TangentGroup {
    const DilatationStructure* S = nullptr;
    Point x;
    EpsSchedule schedule = tangent_schedule();
    LimitOptions opt = tangent_options();

    Point dilate(double eps, const Point& u) const { return S->dilate(x, Scale(eps), u); }
    LimitEstimate<Point> sum(const Point& u, const Point& v) const {
        return tangent_group_sum(*S, x, u, v, schedule, opt);
    }
    LimitEstimate<Point> inv(const Point& u) const {
        return tangent_inv(*S, x, u, schedule, opt);
    }
};

struct MembershipResult {
    bool member = false;
    bool all_converged = true;
    double worst_residual = 0.0;
    std::string witness;
};

inline std::vector<std::pair<double, double>> default_membership_pairs() {
    std::vector<std::pair<double, double>> p;
    for (double a : {0.25, 0.5, 1.0})
        for (double b : {0.25, 0.5, 1.0}) p.emplace_back(a, b);
    return p;
}

/// Is eps |-> delta_eps u a semigroup morphism (0,inf) -> N? True membership
/// in D(N) demands delta_{a+b} u = Sigma(delta_a u, delta_b u) for all a,b;
/// a single violation on the sampled pairs rejects.
MembershipResult one_param_membership(const TangentGroup& g, const Point& u,
                                      const std::vector<std::pair<double, double>>& alpha_beta =
                                          default_membership_pairs(),
                                      double tol = 1e-8);

}  // namespace dilat
