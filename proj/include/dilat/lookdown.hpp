#pragma once

#include <cstdint>
#include <functional>

#include "dilat/curve.hpp"
#include "dilat/report.hpp"
#include "dilat/schedule.hpp"
#include "dilat/structures.hpp"
#include "dilat/tangent.hpp"

namespace dilat {

/// Two dilatation structures on one model space, the upper one (A) looking
/// down at the lower one (B). The shipped pair is A = Heisenberg with the
/// gauge metric and graded dilatations, B = the same space with isotropic
/// dilatations and the Euclidean norm read in group coordinates; the
/// horizontal plane emerges as the topological distribution.
struct LookdownPair {
    StructurePtr upper;  // A: d_A, delta
    StructurePtr lower;  // B: d_B, delta-bar
    std::string name;
};

/// "heisenberg-euclidean" (the shipped pair) or "euclidean-heisenberg"
/// (reversed; violates condition (a), kept as a negative fixture).
LookdownPair make_lookdown_pair(const std::string& spec);

/// Q^x_eps = delta-bar^x_{1/eps} delta^x_eps, evaluated exactly.
Point q_eps(const LookdownPair& P, const Point& x, Scale eps, const Point& z);

/// d^x_A(x,z) - (1/eps) d^x_B(x, delta^x_eps z), both tangent distances
/// estimated through their limits. Refuses probes outside the distribution
/// ball d^x_A(x,z) <= ball_radius (the filter of Def 3.8 lives in radius 2;
/// condition (c) stated radius 3/2 -- the radius is a parameter).
double distribution_gap(const LookdownPair& P, const Point& x, Scale eps, const Point& z,
                        const EpsSchedule& schedule = tangent_schedule(),
                        double ball_radius = 2.0);

/// Least-squares power-law fit v ~ C * eps^p over trace points with
/// eps <= eps_max and v above roundoff.
struct DecayFit {
    double C = 0.0;
    double p = 0.0;
    bool valid = false;
};
DecayFit fit_power_decay(const std::vector<std::pair<double, double>>& trace,
                         double eps_max = 0.1);

/// Does a nonnegative trace vanish as eps -> 0? Either it is already at
/// roundoff, or it decays with a positive fitted rate and a real reduction.
struct VanishingCheck {
    bool vanishing = false;
    double last = 0.0;
    DecayFit fit;
};
VanishingCheck classify_vanishing(const std::vector<std::pair<double, double>>& trace,
                                  double zero_tol = 1e-8);

struct ConditionCResult {
    Report report;
    std::vector<std::pair<double, double>> gap_trace;
    std::vector<std::pair<double, double>> vertical_trace;
    bool hypothesis_met = false;   // gap -> 0
    bool conclusion_holds = false; // vertical part -> 0
    DecayFit vertical_fit;
};

/// Condition (c) of the lookdown relation as an implication probe: if the
/// distribution gap of z(eps) vanishes then so must the vertical part
/// d^x_A(Q^x_eps z(eps), z(eps)). Curves that never enter the distribution
/// report vacuously.
ConditionCResult check_condition_c(const LookdownPair& P, const Point& x,
                                   const std::function<Point(double)>& z_curve,
                                   const EpsSchedule& schedule = {0.5, 0.5, 13},
                                   double ball_radius = 2.0);

/// D id(x)(u) = lim Q^x_eps u, classified with the lower distance.
LimitEstimate<Point> identity_derivative(const LookdownPair& P, const Point& x, const Point& u,
                                         const EpsSchedule& schedule = tangent_schedule());

/// Idempotence of D id(x) on sampled probes, plus the dilatation commutation
/// delta^x_eps w = delta-bar^x_eps w at fixed points of the projector (the
/// identity behind Eq. (3.3.2) of the transfer proof).
Report check_projector(const LookdownPair& P, const Point& x, int samples, double radius,
                       std::uint64_t seed, const EpsSchedule& schedule = tangent_schedule(),
                       double idem_tol = 1e-9, double commute_tol = 1e-10);

struct TransferProbeResult {
    Report report;
    int samples = 0;
    double b_derivable_fraction = 0.0;  // stage (i)
    double gap_vanish_fraction = 0.0;   // stage (ii)
    double vertical_vanish_fraction = 0.0;  // stage (iii)
    double a_converged_fraction = 0.0;  // stage (iv)
    double agreement_fraction = 0.0;    // A-candidate equals B-derivative
    double var_upper = 0.0, var_lower = 0.0;  // hypothesis (a') comparison
};

/// The proof pipeline of the transfer theorem, run numerically at sampled
/// parameters of a d_A-Lipschitz curve (arc-length reparametrized first):
/// (i) B-derivability, (ii) the length-gap trace, (iii) the vertical-part
/// trace, (iv) A-derivability with the A-candidate checked against the
/// B-derivative. Throws on curves that are not d_A-Lipschitz.
TransferProbeResult transfer_probe(const LookdownPair& P, const Curve& c, int t_samples,
                                   const EpsSchedule& schedule = tangent_schedule(),
                                   std::uint64_t seed = 5, double agree_tol = 1e-5);

struct LookdownAuditConfig {
    int samples = 40;
    double ball_radius = 0.5;
    std::uint64_t seed = 13;
    EpsSchedule schedule = tangent_schedule();
    double lipschitz_slack = 1e-9;  // (a): d_B <= d_A * (1 + slack)
    double idem_tol = 1e-9;
};

/// Conditions (a), (b), (c) on seeded samples; also scans for the radius at
/// which (a) starts failing so the validity region is visible in the report.
Report lookdown_audit(const LookdownPair& P, const LookdownAuditConfig& cfg = {});

}  // namespace dilat
