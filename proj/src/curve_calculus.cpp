#include "dilat/curve_calculus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <vector>

#include "dilat/tangent.hpp"

namespace dilat {

namespace {

double abs_metric(double a, double b) { return std::abs(a - b); }

double dyadic_sum(const Curve& c, const DilatationStructure& S, int level) {
    const std::size_t n = std::size_t{1} << level;
    const double h = (c.b - c.a) / static_cast<double>(n);
    double sum = 0.0;
    Point prev = c.eval(c.a);
    for (std::size_t i = 1; i <= n; ++i) {
        Point cur = c.eval(i == n ? c.b : c.a + h * static_cast<double>(i));
        sum += S.distance(prev, cur);
        prev = std::move(cur);
    }
    return sum;
}

}  // namespace

VariationResult variation(const Curve& c, const DilatationStructure& S, double refine_tol,
                          int max_depth) {
    if (!(refine_tol > 0.0)) throw std::invalid_argument("variation: refine_tol > 0");
    VariationResult res;
    // Partition sums can stall for a level before jumping (the sign curve's
    // level-0 and level-1 sums coincide), so demand two consecutive
    // sub-tolerance increases beyond a minimum depth before stopping.
    const int min_depth = 6;
    double prev = dyadic_sum(c, S, 0);
    int calm = 0;
    for (int level = 1; level <= max_depth; ++level) {
        const double cur = dyadic_sum(c, S, level);
        res.value = cur;
        res.depth = level;
        calm = (cur - prev < refine_tol) ? calm + 1 : 0;
        if (level >= min_depth && calm >= 2) return res;
        prev = cur;
    }
    res.converged = false;  // value is a lower bound
    return res;
}

double upper_dilatation(const Curve& c, double t, const DilatationStructure& S, double window,
                        int window_scales, int pairs_per_window) {
    if (!(t >= c.a && t <= c.b))
        throw std::invalid_argument("upper_dilatation: t outside [a,b]");
    window = std::min(window, 0.5 * (c.b - c.a));
    SeededRng rng(0x5bd1e995u ^ std::bit_cast<std::uint64_t>(t) ^
                  (std::bit_cast<std::uint64_t>(window) << 1));

    std::vector<double> sups(window_scales, 0.0);
    double w = window;
    for (int j = 0; j < window_scales; ++j, w *= 0.5) {
        const double lo = std::max(c.a, t - w), hi = std::min(c.b, t + w);
        double sup = 0.0;
        auto ratio = [&](double v, double z) {
            if (std::abs(v - z) < 1e-300) return 0.0;
            return S.distance(c.eval(v), c.eval(z)) / std::abs(v - z);
        };
        // Deterministic anchor pairs plus seeded ones.
        sup = std::max(sup, ratio(std::max(lo, t - 0.5 * w), std::min(hi, t + 0.5 * w)));
        sup = std::max(sup, ratio(t, std::min(hi, t + 0.5 * w)));
        sup = std::max(sup, ratio(std::max(lo, t - 0.5 * w), t));
        for (int k = 0; k < pairs_per_window; ++k) {
            const double v = rng.uniform(lo, hi), z = rng.uniform(lo, hi);
            sup = std::max(sup, ratio(v, z));
        }
        sups[j] = sup;
    }

    // Growing per-window sups mean the local dilatation is unbounded.
    if (window_scales >= 4 && sups.back() > 4.0 * sups.front() + 1e-9)
        return std::numeric_limits<double>::infinity();
    return sups.back();
}

LimitEstimate<double> metric_derivative(const Curve& c, double t, const DilatationStructure& S,
                                        const EpsSchedule& schedule) {
    const double margin = std::min(t - c.a, c.b - t);
    if (!(margin > 0.0)) throw std::invalid_argument("metric_derivative: t must be interior");
    const auto sched = schedule.clamped(0.45 * margin);
    const Point x = c.eval(t);
    auto fwd = estimate_limit<double>(
        [&](double e) { return S.distance(c.eval(t + e), x) / e; }, abs_metric, sched);
    auto bwd = estimate_limit<double>(
        [&](double e) { return S.distance(c.eval(t - e), x) / e; }, abs_metric, sched);

    // An unbounded metric derivative shows up as steady geometric growth of
    // the difference quotients well before the generic divergence bound.
    auto grows_unbounded = [](const LimitEstimate<double>& e) {
        if (e.status == LimitStatus::diverging) return true;
        const auto& s = e.samples;
        const std::size_t n = s.size();
        if (n < 6) return false;
        bool mono = true;
        for (std::size_t k = n / 2; k + 1 < n; ++k)
            if (std::abs(s[k + 1].second) < std::abs(s[k].second)) mono = false;
        return mono && std::abs(s[n - 1].second) > 4.0 * std::abs(s[n / 2].second) + 1.0;
    };

    LimitEstimate<double> out = fwd;
    if (grows_unbounded(fwd) || grows_unbounded(bwd)) {
        out = grows_unbounded(fwd) ? fwd : bwd;
        out.status = LimitStatus::diverging;
        return out;
    }
    const double agree_tol = 10.0 * LimitOptions{}.tol;
    if (fwd.converged() && bwd.converged() && std::abs(fwd.value - bwd.value) <= agree_tol) {
        out.value = 0.5 * (fwd.value + bwd.value);
        out.residual = std::max(fwd.residual, bwd.residual);
        return out;
    }
    out.status = LimitStatus::inconclusive;  // side mismatch or non-convergence
    return out;
}

LengthResult length_via_dilatation(const Curve& c, const DilatationStructure& S,
                                   int quad_intervals, double window) {
    if (quad_intervals < 2) throw std::invalid_argument("length_via_dilatation: intervals >= 2");
    if (quad_intervals % 2) ++quad_intervals;
    const double h = (c.b - c.a) / quad_intervals;

    LengthResult res;
    double sum = 0.0;
    for (int i = 0; i <= quad_intervals; ++i) {
        const double t = (i == quad_intervals) ? c.b : c.a + h * i;
        const double f = upper_dilatation(c, t, S, window);
        if (std::isinf(f)) {
            res.variation_fallback = true;
            res.lip_failure_t = t;
            res.value = variation(c, S).value;
            return res;
        }
        sum += f * ((i == 0 || i == quad_intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    res.value = sum * h / 3.0;
    return res;
}

double hausdorff_length_estimate(const Curve& c, const DilatationStructure& S, double mesh,
                                 int max_depth) {
    if (!(mesh > 0.0)) throw std::invalid_argument("hausdorff_length_estimate: mesh > 0");
    struct Seg {
        double t0, t1;
        Point p0, p1;
        int depth;
    };
    std::vector<Seg> stack;
    stack.push_back({c.a, c.b, c.eval(c.a), c.eval(c.b), 0});
    const int min_depth = 6;  // resolve at least 64 cells before accepting
    double total = 0.0;
    while (!stack.empty()) {
        Seg s = std::move(stack.back());
        stack.pop_back();
        const double chord = S.distance(s.p0, s.p1);
        if (s.depth >= min_depth && chord <= mesh) {
            total += chord;
            continue;
        }
        if (s.depth >= max_depth) continue;  // unresolvable jump: cover it for free
        const double tm = 0.5 * (s.t0 + s.t1);
        Point pm = c.eval(tm);
        stack.push_back({s.t0, tm, s.p0, pm, s.depth + 1});
        stack.push_back({tm, s.t1, std::move(pm), std::move(s.p1), s.depth + 1});
    }
    return total;
}

Curve reparametrize_arclength(const Curve& c, const DilatationStructure& S, int grid) {
    if (grid < 2) throw std::invalid_argument("reparametrize_arclength: grid >= 2");
    auto ts = std::make_shared<std::vector<double>>();
    auto cum = std::make_shared<std::vector<double>>();
    ts->resize(grid + 1);
    cum->resize(grid + 1);
    const double h = (c.b - c.a) / grid;
    (*ts)[0] = c.a;
    (*cum)[0] = 0.0;
    Point prev = c.eval(c.a);
    for (int i = 1; i <= grid; ++i) {
        (*ts)[i] = (i == grid) ? c.b : c.a + h * i;
        Point cur = c.eval((*ts)[i]);
        (*cum)[i] = (*cum)[i - 1] + S.distance(prev, cur);
        prev = std::move(cur);
    }
    const double L = cum->back();
    if (!(L > 0.0)) throw std::invalid_argument("reparametrize_arclength: zero-length curve");

    Curve out;
    out.a = 0.0;
    out.b = L;
    out.name = c.name + "|arclen";
    out.lip_bound = c.lip_bound ? std::optional<double>(1.0) : std::nullopt;
    out.eval_fn = [c, ts, cum, L](double s) {
        s = std::min(std::max(s, 0.0), L);
        auto it = std::upper_bound(cum->begin(), cum->end(), s);
        std::size_t i = std::min(cum->size() - 2,
                                 static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                     0, (it - cum->begin()) - 1)));
        const double seg = (*cum)[i + 1] - (*cum)[i];
        const double w = seg > 0.0 ? (s - (*cum)[i]) / seg : 0.0;
        return c.eval((*ts)[i] + w * ((*ts)[i + 1] - (*ts)[i]));
    };
    return out;
}

DerivabilityResult derivative_at(const Curve& c, double t, const DilatationStructure& S,
                                 const EpsSchedule& schedule, double match_tol) {
    const double margin = std::min(t - c.a, c.b - t);
    if (!(margin > 0.0)) throw std::invalid_argument("derivative_at: t must be interior");
    const auto sched = schedule.clamped(0.45 * margin);
    const Point x = c.eval(t);
    auto cmetric = [](const Point& p, const Point& q) { return dist2(p, q); };

    DerivabilityResult res;
    res.t = t;
    res.forward = estimate_limit<Point>(
        [&](double e) { return S.dilate(x, Scale(1.0 / e), c.eval(t + e)); }, cmetric, sched,
        tangent_options());
    res.backward = estimate_limit<Point>(
        [&](double e) { return S.dilate(x, Scale(1.0 / e), c.eval(t - e)); }, cmetric, sched,
        tangent_options());

    if (res.forward.converged() && res.backward.converged()) {
        auto inv = tangent_inv(S, x, res.forward.value,
                               tangent_schedule().clamped(sched.eps0));
        if (inv.converged()) {
            res.inv_residual = dist2(inv.value, res.backward.value);
            res.derivable = res.inv_residual <= match_tol;
        }
    }
    return res;
}

RnProbeResult rn_probe(const DilatationStructure& S, const Curve& c, int t_samples,
                       const EpsSchedule& schedule, std::uint64_t seed, double threshold) {
    if (t_samples < 1) throw std::invalid_argument("rn_probe: t_samples >= 1");
    Curve rc = reparametrize_arclength(c, S);
    const double margin = 1e-3 * rc.length_of_domain();

    RnProbeResult out;
    out.samples = t_samples;
    SeededRng rng(seed);
    int derivable = 0;
    for (int i = 0; i < t_samples; ++i) {
        const double t = rng.uniform(rc.a + margin, rc.b - margin);
        auto d = derivative_at(rc, t, S, schedule);
        if (d.derivable) {
            ++derivable;
        } else {
            if (out.failure_ts.size() < 16) out.failure_ts.push_back(t);
            if (d.forward.status == LimitStatus::oscillating ||
                d.backward.status == LimitStatus::oscillating)
                ++out.oscillating_failures;
        }
    }
    out.derivable_fraction = static_cast<double>(derivable) / t_samples;

    out.report.title = "rn-probe:" + c.name;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", out.derivable_fraction);
    out.report.config["derivable_fraction"] = buf;
    std::snprintf(buf, sizeof(buf), "%d", out.oscillating_failures);
    out.report.config["oscillating_failures"] = buf;
    std::string witness;
    if (!out.failure_ts.empty()) {
        std::snprintf(buf, sizeof(buf), "first failure at t=%.17g", out.failure_ts.front());
        witness = buf;
    }
    out.report.add("rn.derivable-fraction",
                   out.derivable_fraction >= threshold ? CheckStatus::pass : CheckStatus::fail,
                   1.0 - out.derivable_fraction, witness);
    return out;
}

LengthFormulaResult length_formula_check(const DilatationStructure& S, const Curve& c,
                                         int quad_intervals, const EpsSchedule& schedule,
                                         double min_derivable_fraction) {
    if (quad_intervals < 2) throw std::invalid_argument("length_formula_check: intervals >= 2");
    if (quad_intervals % 2) ++quad_intervals;

    LengthFormulaResult res;
    res.lhs = variation(c, S).value;

    const double h = (c.b - c.a) / quad_intervals;
    const EpsSchedule dsched = tangent_schedule();
    int good = 0;
    std::vector<double> f(quad_intervals + 1, 0.0);
    for (int i = 0; i <= quad_intervals; ++i) {
        const double t = (i == quad_intervals) ? c.b : c.a + h * i;
        // Use the forward candidate where room permits, else the backward one;
        // the tangent norm of inv(cdot) equals that of cdot.
        const bool fwd_ok = (c.b - t) >= (t - c.a);
        const double margin = fwd_ok ? (c.b - t) : (t - c.a);
        const auto sched = schedule.clamped(std::max(1e-12, 0.45 * margin));
        const Point x = c.eval(t);
        auto cand = estimate_limit<Point>(
            [&](double e) {
                return S.dilate(x, Scale(1.0 / e), c.eval(fwd_ok ? t + e : t - e));
            },
            [](const Point& p, const Point& q) { return dist2(p, q); }, sched,
            tangent_options());
        if (cand.converged()) {
            ++good;
            f[i] = tangent_distance(S, x, x, cand.value, dsched).value;
        } else {
            f[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    res.derivable_node_fraction = static_cast<double>(good) / (quad_intervals + 1);
    res.report.title = "length-formula:" + c.name;
    if (res.derivable_node_fraction < min_derivable_fraction) {
        res.refused = true;
        res.report.add("length-formula", CheckStatus::fail, 1.0 - res.derivable_node_fraction,
                       "insufficient derivability at quadrature nodes");
        return res;
    }
    // Patch rare bad nodes by neighbor values so Simpson stays usable.
    for (int i = 0; i <= quad_intervals; ++i) {
        if (std::isnan(f[i])) {
            for (int j = 1; j <= quad_intervals; ++j) {
                if (i - j >= 0 && !std::isnan(f[i - j])) { f[i] = f[i - j]; break; }
                if (i + j <= quad_intervals && !std::isnan(f[i + j])) { f[i] = f[i + j]; break; }
            }
        }
    }
    double sum = 0.0;
    for (int i = 0; i <= quad_intervals; ++i)
        sum += f[i] * ((i == 0 || i == quad_intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    res.rhs = sum * h / 3.0;
    res.rel_err = std::abs(res.lhs - res.rhs) / std::max(res.lhs, 1e-300);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "lhs=%.17g rhs=%.17g", res.lhs, res.rhs);
    res.report.add("length-formula", CheckStatus::pass, res.rel_err, buf);
    return res;
}

}  // namespace dilat
