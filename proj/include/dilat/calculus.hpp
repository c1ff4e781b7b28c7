#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dilat/report.hpp"
#include "dilat/schedule.hpp"
#include "dilat/structures.hpp"
#include "dilat/tangent.hpp"

namespace dilat {

/// A continuous map between dilatation structures, with an optional inverse
/// for transport. Maps are registered by name for the CLI.
struct StructureMap {
    StructurePtr source;
    StructurePtr target;
    std::function<Point(const Point&)> eval_fn;
    std::function<Point(const Point&)> inverse_fn;  // empty when not invertible
    std::string name;

    Point eval(const Point& p) const {
        require_finite(p, "StructureMap::eval");
        return eval_fn(p);
    }
    bool has_inverse() const { return static_cast<bool>(inverse_fn); }
    Point eval_inverse(const Point& p) const {
        if (!has_inverse())
            throw std::invalid_argument("StructureMap: '" + name + "' has no inverse");
        return inverse_fn(p);
    }
};

/// Map registry: "identity", "square" (complex square, dim 2), "conjugate"
/// (dim 2), "affine:<r11,r12,...;r21,...>[;t:<t1,...>]", "hgraded:<lambda>"
/// (dim 3), "cubic" (componentwise w + w^3, invertible), "quadbump"
/// (componentwise w + w^2, the non-morphism fixture).
StructureMap make_map(const std::string& spec, StructurePtr source, StructurePtr target);

/// Candidate derivative value Q^x(u) = lim delta-bar^{f(x)}_{1/eps} f(delta^x_eps u),
/// classified over the schedule with the target distance.
LimitEstimate<Point> pansu_derivative(const StructureMap& F, const Point& x, const Point& u,
                                      const EpsSchedule& schedule = {0.5, 0.5, 18},
                                      const LimitOptions& opt = {});

/// Extensional representation of a derivative at x: probe points in, limit
/// estimates out. Conical morphisms on Carnot groups are not matrices, so no
/// coefficients are materialized.
struct DerivativeEstimate {
    const StructureMap* F = nullptr;
    Point x;
    Point fx;
    EpsSchedule schedule{0.5, 0.5, 18};
    LimitOptions opt{};

    LimitEstimate<Point> apply(const Point& u) const {
        return pansu_derivative(*F, x, u, schedule, opt);
    }
};

inline DerivativeEstimate make_derivative(const StructureMap& F, const Point& x,
                                          const EpsSchedule& schedule = {0.5, 0.5, 18}) {
    return DerivativeEstimate{&F, x, F.eval(x), schedule, {}};
}

/// Residual of the defining limit at scale eps with a candidate value Qu:
/// (1/eps) d-bar( f(delta^x_eps u), delta-bar^{f(x)}_eps Qu ).
double pansu_residual(const StructureMap& F, const Point& x, const Point& u, const Point& Qu,
                      double eps);

/// Checks that `Q` behaves like a conical-group morphism between the tangent
/// groups at x and fx: homogeneity against dilatations (eps in {0.25,0.5,1})
/// and additivity over the tangent sums.
Report check_conical_morphism(const std::function<Point(const Point&)>& Q,
                              const DilatationStructure& Ssrc, const Point& x,
                              const DilatationStructure& Stgt, const Point& fx, int samples,
                              double radius, std::uint64_t seed,
                              const EpsSchedule& schedule = tangent_schedule(), double tol = 1e-5);

/// D(g o f)(x) vs Dg(f(x)) o Df(x) on sampled probes.
Report chain_rule_check(const StructureMap& F, const StructureMap& G, const Point& x, int samples,
                        double radius, std::uint64_t seed,
                        const EpsSchedule& schedule = {0.5, 0.5, 18}, double tol = 1e-6);

/// The defining limits of structure equivalence.
LimitEstimate<Point> equivalence_q_limit(const DilatationStructure& S1,
                                         const DilatationStructure& S2, const Point& x,
                                         const Point& u,
                                         const EpsSchedule& schedule = tangent_schedule());
LimitEstimate<Point> equivalence_p_limit(const DilatationStructure& S1,
                                         const DilatationStructure& S2, const Point& x,
                                         const Point& u,
                                         const EpsSchedule& schedule = tangent_schedule());

struct EquivalenceResult {
    bool equivalent = false;
    Report report;
};

/// Bilipschitz spot-check of the identity plus convergence of both Q^x and
/// P^x limits on sampled (x, u).
EquivalenceResult equivalence_check(const DilatationStructure& S1, const DilatationStructure& S2,
                                    int samples, double radius, std::uint64_t seed,
                                    const EpsSchedule& schedule = tangent_schedule());

/// The transport f*delta: dilatations conjugated through f, target distance
/// kept. Requires an invertible map.
StructurePtr transport_structure(StructurePtr S, const StructureMap& f);

/// Tangent-bundle isomorphism identity for equivalent structures:
/// Sigma-bar^x(u,v) = Q^x( Sigma^x( P^x(u), P^x(v) ) ).
Report tangent_iso_check(const DilatationStructure& S1, const DilatationStructure& S2,
                         const Point& x, int samples, double radius, std::uint64_t seed,
                         const EpsSchedule& schedule = tangent_schedule(), double tol = 1e-8);

/// Max re-substitution residual of an estimated derivative over an x-grid;
/// the numerical stand-in for uniform differentiability.
Report uniform_differentiability_check(const StructureMap& F, const std::vector<Point>& x_grid,
                                       int u_samples, double radius, std::uint64_t seed,
                                       const EpsSchedule& schedule = {0.5, 0.5, 18},
                                       double tol = 1e-5);

}  // namespace dilat
