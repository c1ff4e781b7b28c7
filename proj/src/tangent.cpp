#include "dilat/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dilat {

namespace {
double abs_metric(double a, double b) { return std::abs(a - b); }
}  // namespace

double rescaled_distance(const DilatationStructure& S, const Point& x, Scale eps, const Point& u,
                         const Point& v) {
    return S.distance(S.dilate(x, eps, u), S.dilate(x, eps, v)) / eps.value();
}

LimitEstimate<double> tangent_distance(const DilatationStructure& S, const Point& x,
                                       const Point& u, const Point& v,
                                       const EpsSchedule& schedule, const LimitOptions& opt) {
    return estimate_limit<double>(
        [&](double e) { return rescaled_distance(S, x, Scale(e), u, v); }, abs_metric, schedule,
        opt);
}

Point delta_op(const DilatationStructure& S, const Point& x, Scale eps, const Point& u,
               const Point& v) {
    const Point du = S.dilate(x, eps, u);
    return S.dilate(du, eps.inverse(), S.dilate(x, eps, v));
}

LimitEstimate<Point> tangent_sum(const DilatationStructure& S, const Point& x, const Point& u,
                                 const Point& v, const EpsSchedule& schedule,
                                 const LimitOptions& opt) {
    return estimate_limit<Point>([&](double e) { return delta_op(S, x, Scale(e), u, v); },
                                 [](const Point& a, const Point& b) { return dist2(a, b); },
                                 schedule, opt);
}

LimitEstimate<Point> tangent_inv(const DilatationStructure& S, const Point& x, const Point& u,
                                 const EpsSchedule& schedule, const LimitOptions& opt) {
    return tangent_sum(S, x, u, x, schedule, opt);
}

LimitEstimate<Point> tangent_group_sum(const DilatationStructure& S, const Point& x,
                                       const Point& u, const Point& v,
                                       const EpsSchedule& schedule, const LimitOptions& opt) {
    return estimate_limit<Point>(
        [&](double e) {
            const Scale eps(e);
            return S.dilate(x, eps.inverse(), S.dilate(S.dilate(x, eps, u), eps, v));
        },
        [](const Point& a, const Point& b) { return dist2(a, b); }, schedule, opt);
}

TangentVector make_tangent_vector(const DilatationStructure& S, const Point& x, const Point& rep,
                                  const EpsSchedule& schedule) {
    TangentVector t;
    t.base = x;
    t.rep = rep;
    t.magnitude = tangent_distance(S, x, x, rep, schedule).value;
    return t;
}

Report check_cone_property(const DilatationStructure& S, const Point& x, const Point& u,
                           const Point& v, const std::vector<double>& mus,
                           const EpsSchedule& schedule, double tol) {
    Report rep;
    rep.title = "cone-property";
    auto lhs = tangent_distance(S, x, u, v, schedule);
    if (!lhs.converged()) {
        rep.add("cone", CheckStatus::fail, lhs.residual, "d^x(u,v) did not converge");
        return rep;
    }
    for (double mu : mus) {
        if (!(mu > 0.0 && mu < S.domain_radius_A()))
            throw std::invalid_argument("check_cone_property: mu outside (0, A)");
        auto rhs = tangent_distance(S, x, S.dilate(x, Scale(mu), u), S.dilate(x, Scale(mu), v),
                                    schedule);
        const double resid = std::abs(lhs.value - rhs.value / mu);
        const CheckStatus st =
            (rhs.converged() && resid <= tol) ? CheckStatus::pass : CheckStatus::fail;
        rep.merge_worst("cone", st, resid, "mu=" + std::to_string(mu));
    }
    return rep;
}

Report check_left_invariance(const DilatationStructure& S, const Point& x, int samples,
                             double radius, std::uint64_t seed, const EpsSchedule& schedule,
                             double tol) {
    Report rep;
    rep.title = "left-invariance";
    SeededRng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Point w = rng.point_in_box(x, radius);
        const Point u = rng.point_in_box(x, radius);
        const Point v = rng.point_in_box(x, radius);
        auto su = tangent_group_sum(S, x, w, u, schedule);
        auto sv = tangent_group_sum(S, x, w, v, schedule);
        auto duv = tangent_distance(S, x, u, v, schedule);
        if (!su.converged() || !sv.converged() || !duv.converged()) {
            rep.merge_worst("left-invariance", CheckStatus::fail, 0.0,
                            "tangent operation did not converge at sample " + std::to_string(i));
            continue;
        }
        auto dsum = tangent_distance(S, x, su.value, sv.value, schedule);
        const double resid = std::abs(dsum.value - duv.value);
        const CheckStatus st =
            (dsum.converged() && resid <= tol) ? CheckStatus::pass : CheckStatus::fail;
        rep.merge_worst("left-invariance", st, resid,
                        "w=" + format_point(w) + " u=" + format_point(u) + " v=" + format_point(v));
    }
    return rep;
}

namespace {

/// Largest per-axis offset h with d(x, x + h e_i) <= eps, by doubling and
/// bisection. Gives a bounding box of the metric ball for rejection sampling.
double axis_extent(const DilatationStructure& S, const Point& x, std::size_t axis, double eps) {
    auto inside = [&](double h) {
        Point p = x;
        p[axis] += h;
        return S.distance(x, p) <= eps;
    };
    double lo = 0.0, hi = eps;
    for (int i = 0; i < 80 && inside(hi); ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 50; ++i) {
        double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

Report check_metric_tangent(const DilatationStructure& S, const Point& x,
                            const EpsSchedule& schedule, int pairs_per_scale, std::uint64_t seed,
                            double tol) {
    Report rep;
    rep.title = "metric-tangent";

    // Coordinate roundoff floors: below eps_floor the ball offsets fall into
    // the noise of |x| and the (1/eps)-normalized sup would measure the
    // rounding of the inner tangent-distance estimates, not geometry.
    const double coord_scale = 1.0 + norm2(x);
    const double eps_floor = 1e-5 * coord_scale;
    EpsSchedule inner = tangent_schedule();

    SeededRng rng(seed);
    std::vector<std::pair<double, double>> trace;  // (eps, sampled sup)
    for (double e : schedule.points()) {
        if (e < eps_floor) break;
        std::vector<double> extent(S.dim());
        for (std::size_t i = 0; i < S.dim(); ++i) extent[i] = axis_extent(S, x, i, e);
        auto sample_in_ball = [&]() {
            for (int tries = 0; tries < 64; ++tries) {
                Point p = x;
                for (std::size_t i = 0; i < S.dim(); ++i) p[i] += rng.uniform(-extent[i], extent[i]);
                if (S.distance(x, p) <= e) return p;
            }
            return x;
        };
        double sup = 0.0;
        for (int k = 0; k < pairs_per_scale; ++k) {
            const Point u = sample_in_ball();
            const Point v = sample_in_ball();
            auto dx = tangent_distance(S, x, u, v, inner);
            sup = std::max(sup, std::abs(S.distance(u, v) - dx.value) / e);
        }
        trace.emplace_back(e, sup);
    }

    if (trace.size() < 4) {
        rep.add("metric-tangent", CheckStatus::fail, 0.0, "not enough usable scales");
        return rep;
    }
    const double last = trace.back().second;
    const double first = trace.front().second;
    bool vanishing = last <= tol || (first > 0.0 && last <= 0.25 * first);
    rep.add("metric-tangent", vanishing ? CheckStatus::pass : CheckStatus::fail, last,
            vanishing ? "" : "sup trace does not vanish at x=" + format_point(x));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", last);
    rep.config["sup_at_smallest_eps"] = buf;
    return rep;
}

MembershipResult one_param_membership(const TangentGroup& g, const Point& u,
                                      const std::vector<std::pair<double, double>>& alpha_beta,
                                      double tol) {
    MembershipResult res;
    res.member = true;
    for (auto [a, b] : alpha_beta) {
        if (!(a > 0.0 && b > 0.0))
            throw std::invalid_argument("one_param_membership: alpha, beta must be positive");
        const Point lhs = g.dilate(a + b, u);
        auto rhs = g.sum(g.dilate(a, u), g.dilate(b, u));
        if (!rhs.converged()) {
            res.all_converged = false;
            res.member = false;
            res.witness = "Sigma did not converge at alpha=" + std::to_string(a) +
                          " beta=" + std::to_string(b);
            continue;
        }
        const double resid = dist2(lhs, rhs.value);
        if (resid > res.worst_residual) res.worst_residual = resid;
        if (resid > tol) {
            res.member = false;
            if (res.witness.empty())
                res.witness = "alpha=" + std::to_string(a) + " beta=" + std::to_string(b) +
                              " residual=" + std::to_string(resid);
        }
    }
    return res;
}

}  // namespace dilat
