#include "dilat/calculus.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "dilat/tangent.hpp"

namespace dilat {

namespace {

// ------------------------------------------------------------- map fixtures

Point complex_mul(const Point& a, const Point& b) {
    return {a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]};
}

/// Real root of w^3 + w = y (strictly increasing, unique). Cardano with a
/// Newton polish; the 1/(3A) form avoids cancellation for large |y|.
double cubic_inverse_scalar(double y) {
    const double ay = std::abs(y);
    if (ay == 0.0) return 0.0;
    const double s = std::sqrt(0.25 * ay * ay + 1.0 / 27.0);
    const double A = std::cbrt(0.5 * ay + s);
    double w = A - 1.0 / (3.0 * A);
    w -= (w * w * w + w - ay) / (3.0 * w * w + 1.0);
    w -= (w * w * w + w - ay) / (3.0 * w * w + 1.0);
    return y < 0.0 ? -w : w;
}

struct AffineSpec {
    std::vector<std::vector<double>> m;
    std::vector<double> t;
};

AffineSpec parse_affine(const std::string& body, std::size_t dim) {
    AffineSpec spec;
    spec.t.assign(dim, 0.0);
    std::stringstream ss(body);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<double> vals;
        std::stringstream rs(row.substr(row.rfind(':') == std::string::npos ? 0 : 2));
        std::string cell;
        while (std::getline(rs, cell, ',')) vals.push_back(std::stod(cell));
        if (row.rfind("t:", 0) == 0)
            spec.t = vals;
        else
            spec.m.push_back(vals);
    }
    if (spec.m.size() != dim || spec.t.size() != dim)
        throw std::invalid_argument("make_map: affine matrix must be " + std::to_string(dim) +
                                    "x" + std::to_string(dim));
    for (const auto& r : spec.m)
        if (r.size() != dim) throw std::invalid_argument("make_map: ragged affine matrix");
    return spec;
}

/// Gauss-Jordan inverse; returns empty on singular input.
std::vector<std::vector<double>> invert_matrix(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12) return {};
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const double d = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Point apply_affine(const AffineSpec& s, const Point& p) {
    Point r(s.t);
    for (std::size_t i = 0; i < s.m.size(); ++i)
        for (std::size_t j = 0; j < s.m.size(); ++j) r[i] += s.m[i][j] * p[j];
    return r;
}

}  // namespace

StructureMap make_map(const std::string& spec, StructurePtr source, StructurePtr target) {
    if (!source || !target) throw std::invalid_argument("make_map: null structure");
    StructureMap f;
    f.source = source;
    f.target = target;
    f.name = spec;
    const std::size_t dim = source->dim();
    if (target->dim() != dim)
        throw std::invalid_argument("make_map: source and target dimensions differ");

    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "identity") {
        f.eval_fn = [](const Point& p) { return p; };
        f.inverse_fn = f.eval_fn;
    } else if (head == "square") {
        if (dim != 2) throw std::invalid_argument("make_map: square needs dim 2");
        f.eval_fn = [](const Point& p) { return complex_mul(p, p); };
    } else if (head == "conjugate") {
        if (dim != 2) throw std::invalid_argument("make_map: conjugate needs dim 2");
        f.eval_fn = [](const Point& p) { return Point{p[0], -p[1]}; };
        f.inverse_fn = f.eval_fn;
    } else if (head == "affine") {
        AffineSpec a = parse_affine(rest, dim);
        f.eval_fn = [a](const Point& p) { return apply_affine(a, p); };
        auto minv = invert_matrix(a.m);
        if (!minv.empty()) {
            AffineSpec ainv;
            ainv.m = minv;
            ainv.t.assign(dim, 0.0);
            Point mt = apply_affine(ainv, a.t);
            for (std::size_t i = 0; i < dim; ++i) ainv.t[i] = -mt[i];
            f.inverse_fn = [ainv](const Point& p) { return apply_affine(ainv, p); };
        }
    } else if (head == "hgraded") {
        if (dim != 3) throw std::invalid_argument("make_map: hgraded needs dim 3");
        const double lam = std::stod(rest);
        if (lam == 0.0) throw std::invalid_argument("make_map: hgraded lambda must be nonzero");
        f.eval_fn = [lam](const Point& p) { return Point{lam * p[0], lam * p[1], lam * lam * p[2]}; };
        const double li = 1.0 / lam;
        f.inverse_fn = [li](const Point& p) { return Point{li * p[0], li * p[1], li * li * p[2]}; };
    } else if (head == "cubic") {
        f.eval_fn = [](const Point& p) {
            Point r(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + p[i] * p[i] * p[i];
            return r;
        };
        f.inverse_fn = [](const Point& p) {
            Point r(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) r[i] = cubic_inverse_scalar(p[i]);
            return r;
        };
    } else if (head == "quadbump") {
        f.eval_fn = [](const Point& p) {
            Point r(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + p[i] * p[i];
            return r;
        };
    } else {
        throw std::invalid_argument("make_map: unknown map '" + spec + "'");
    }
    return f;
}

LimitEstimate<Point> pansu_derivative(const StructureMap& F, const Point& x, const Point& u,
                                      const EpsSchedule& schedule, const LimitOptions& opt) {
    const Point fx = F.eval(x);
    const auto& src = *F.source;
    const auto& tgt = *F.target;
    return estimate_limit<Point>(
        [&](double e) {
            return tgt.dilate(fx, Scale(1.0 / e), F.eval(src.dilate(x, Scale(e), u)));
        },
        [](const Point& p, const Point& q) { return dist2(p, q); }, schedule, opt);
}

double pansu_residual(const StructureMap& F, const Point& x, const Point& u, const Point& Qu,
                      double eps) {
    const Point fx = F.eval(x);
    return F.target->distance(F.eval(F.source->dilate(x, Scale(eps), u)),
                              F.target->dilate(fx, Scale(eps), Qu)) /
           eps;
}

Report check_conical_morphism(const std::function<Point(const Point&)>& Q,
                              const DilatationStructure& Ssrc, const Point& x,
                              const DilatationStructure& Stgt, const Point& fx, int samples,
                              double radius, std::uint64_t seed, const EpsSchedule& schedule,
                              double tol) {
    Report rep;
    rep.title = "conical-morphism";
    SeededRng rng(seed);
    const std::vector<double> eps_probes = {0.25, 0.5, 1.0};
    for (int i = 0; i < samples; ++i) {
        const Point u = rng.point_in_box(x, radius);
        const Point v = rng.point_in_box(x, radius);
        const Point Qu = Q(u);
        if (!all_finite(Qu)) {
            rep.merge_worst("morphism.homogeneity", CheckStatus::fail, 1.0,
                            "Q(u) not available at u=" + format_point(u));
            continue;
        }
        for (double e : eps_probes) {
            const Point lhs = Q(Ssrc.dilate(x, Scale(e), u));
            const Point rhs = Stgt.dilate(fx, Scale(e), Qu);
            const double r = dist2(lhs, rhs);
            rep.merge_worst("morphism.homogeneity",
                            r <= tol ? CheckStatus::pass : CheckStatus::fail, r,
                            "u=" + format_point(u) + " eps=" + std::to_string(e));
        }
        auto sum_src = tangent_sum(Ssrc, x, u, v, schedule);
        auto sum_tgt = tangent_sum(Stgt, fx, Qu, Q(v), schedule);
        if (!sum_src.converged() || !sum_tgt.converged()) {
            rep.merge_worst("morphism.additivity", CheckStatus::fail, 1.0,
                            "tangent sum did not converge");
            continue;
        }
        const double r = dist2(Q(sum_src.value), sum_tgt.value);
        rep.merge_worst("morphism.additivity", r <= tol ? CheckStatus::pass : CheckStatus::fail,
                        r, "u=" + format_point(u) + " v=" + format_point(v));
    }
    return rep;
}

Report chain_rule_check(const StructureMap& F, const StructureMap& G, const Point& x, int samples,
                        double radius, std::uint64_t seed, const EpsSchedule& schedule,
                        double tol) {
    if (F.target->name() != G.source->name())
        throw std::invalid_argument("chain_rule_check: F.target must match G.source");
    Report rep;
    rep.title = "chain-rule";
    StructureMap H;
    H.source = F.source;
    H.target = G.target;
    H.name = G.name + "(" + F.name + ")";
    H.eval_fn = [&F, &G](const Point& p) { return G.eval(F.eval(p)); };

    const Point fx = F.eval(x);
    SeededRng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Point u = rng.point_in_box(x, radius);
        auto df = pansu_derivative(F, x, u, schedule);
        if (!df.converged()) {
            rep.merge_worst("chain.df", CheckStatus::fail, df.residual,
                            "Df(x) non-convergent at u=" + format_point(u));
            continue;
        }
        auto dg = pansu_derivative(G, fx, df.value, schedule);
        auto dh = pansu_derivative(H, x, u, schedule);
        if (!dg.converged() || !dh.converged()) {
            rep.merge_worst("chain.dg", CheckStatus::fail,
                            std::max(dg.residual, dh.residual),
                            "composite derivative non-convergent at u=" + format_point(u));
            continue;
        }
        const double r = dist2(dh.value, dg.value);
        rep.merge_worst("chain.compose", r <= tol ? CheckStatus::pass : CheckStatus::fail, r,
                        "u=" + format_point(u));
    }
    return rep;
}

LimitEstimate<Point> equivalence_q_limit(const DilatationStructure& S1,
                                         const DilatationStructure& S2, const Point& x,
                                         const Point& u, const EpsSchedule& schedule) {
    return estimate_limit<Point>(
        [&](double e) { return S2.dilate(x, Scale(1.0 / e), S1.dilate(x, Scale(e), u)); },
        [](const Point& p, const Point& q) { return dist2(p, q); }, schedule, tangent_options());
}

LimitEstimate<Point> equivalence_p_limit(const DilatationStructure& S1,
                                         const DilatationStructure& S2, const Point& x,
                                         const Point& u, const EpsSchedule& schedule) {
    return estimate_limit<Point>(
        [&](double e) { return S1.dilate(x, Scale(1.0 / e), S2.dilate(x, Scale(e), u)); },
        [](const Point& p, const Point& q) { return dist2(p, q); }, schedule, tangent_options());
}

EquivalenceResult equivalence_check(const DilatationStructure& S1, const DilatationStructure& S2,
                                    int samples, double radius, std::uint64_t seed,
                                    const EpsSchedule& schedule) {
    if (S1.dim() != S2.dim())
        throw std::invalid_argument("equivalence_check: structures on different model spaces");
    EquivalenceResult out;
    out.report.title = "equivalence:" + S1.name() + "~" + S2.name();
    SeededRng rng(seed);
    const Point zero(S1.dim(), 0.0);

    bool bilip_ok = true;
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Point p = rng.point_in_box(zero, radius);
        const Point q = rng.point_in_box(zero, radius);
        const double d1 = S1.distance(p, q), d2 = S2.distance(p, q);
        if (d1 == 0.0 && d2 == 0.0) continue;
        if (d1 == 0.0 || d2 == 0.0 || d2 / d1 > 1e9 || d2 / d1 < 1e-9) {
            bilip_ok = false;
            out.report.merge_worst("equivalence.bilipschitz", CheckStatus::fail,
                                   d1 == 0.0 ? 1e300 : d2 / d1,
                                   "p=" + format_point(p) + " q=" + format_point(q));
            continue;
        }
        lo = std::min(lo, d2 / d1);
        hi = std::max(hi, d2 / d1);
    }
    if (bilip_ok)
        out.report.add("equivalence.bilipschitz", CheckStatus::pass, hi / lo - 1.0, "");

    bool converged_all = true;
    for (int i = 0; i < samples; ++i) {
        const Point x = rng.point_in_box(zero, radius);
        const Point u = rng.point_in_box(x, radius);
        auto qe = equivalence_q_limit(S1, S2, x, u, schedule);
        auto pe = equivalence_p_limit(S1, S2, x, u, schedule);
        const bool ok = qe.converged() && pe.converged();
        converged_all = converged_all && ok;
        out.report.merge_worst("equivalence.q-limit",
                               qe.converged() ? CheckStatus::pass : CheckStatus::fail,
                               qe.residual, ok ? "" : "x=" + format_point(x) +
                                                          " u=" + format_point(u) + " status=" +
                                                          to_string(qe.status));
        out.report.merge_worst("equivalence.p-limit",
                               pe.converged() ? CheckStatus::pass : CheckStatus::fail,
                               pe.residual, ok ? "" : "x=" + format_point(x) +
                                                          " u=" + format_point(u) + " status=" +
                                                          to_string(pe.status));
    }
    out.equivalent = bilip_ok && converged_all;
    return out;
}

namespace {

class TransportedStructure : public DilatationStructure {
  public:
    TransportedStructure(StructurePtr base, StructureMap f)
        : DilatationStructure("transport:" + f.name + ":" + base->name(), base->dim()),
          base_(std::move(base)),
          f_(std::move(f)) {}

  protected:
    double metric(const Point& x, const Point& y) const override {
        return f_.target->distance(x, y);
    }
    Point map(const Point& x, double eps, const Point& y) const override {
        return f_.eval(base_->dilate(f_.eval_inverse(x), Scale(eps), f_.eval_inverse(y)));
    }

  private:
    StructurePtr base_;
    StructureMap f_;
};

}  // namespace

StructurePtr transport_structure(StructurePtr S, const StructureMap& f) {
    if (!f.has_inverse())
        throw std::invalid_argument("transport_structure: map must be invertible");
    return std::make_shared<TransportedStructure>(std::move(S), f);
}

Report tangent_iso_check(const DilatationStructure& S1, const DilatationStructure& S2,
                         const Point& x, int samples, double radius, std::uint64_t seed,
                         const EpsSchedule& schedule, double tol) {
    Report rep;
    rep.title = "tangent-iso";
    SeededRng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Point u = rng.point_in_box(x, radius);
        const Point v = rng.point_in_box(x, radius);
        auto pu = equivalence_p_limit(S1, S2, x, u, schedule);
        auto pv = equivalence_p_limit(S1, S2, x, v, schedule);
        if (!pu.converged() || !pv.converged()) {
            rep.merge_worst("tangent-iso", CheckStatus::fail, 1.0, "P^x did not converge");
            continue;
        }
        auto inner = tangent_sum(S1, x, pu.value, pv.value, schedule);
        auto rhs = tangent_sum(S2, x, u, v, schedule);
        if (!inner.converged() || !rhs.converged()) {
            rep.merge_worst("tangent-iso", CheckStatus::fail, 1.0, "Sigma did not converge");
            continue;
        }
        auto lhs = equivalence_q_limit(S1, S2, x, inner.value, schedule);
        if (!lhs.converged()) {
            rep.merge_worst("tangent-iso", CheckStatus::fail, 1.0, "Q^x did not converge");
            continue;
        }
        const double r = dist2(lhs.value, rhs.value);
        rep.merge_worst("tangent-iso", r <= tol ? CheckStatus::pass : CheckStatus::fail, r,
                        "u=" + format_point(u) + " v=" + format_point(v));
    }
    return rep;
}

Report uniform_differentiability_check(const StructureMap& F, const std::vector<Point>& x_grid,
                                       int u_samples, double radius, std::uint64_t seed,
                                       const EpsSchedule& schedule, double tol) {
    Report rep;
    rep.title = "uniform-differentiability:" + F.name;
    SeededRng rng(seed);
    const double eps_min = schedule.points().back();
    for (const Point& x : x_grid) {
        for (int i = 0; i < u_samples; ++i) {
            const Point u = rng.point_in_box(x, radius);
            auto q = pansu_derivative(F, x, u, schedule);
            if (!q.converged()) {
                rep.merge_worst("uniform-differentiability", CheckStatus::fail, q.residual,
                                "non-convergent at x=" + format_point(x));
                continue;
            }
            const double r = pansu_residual(F, x, u, q.value, eps_min);
            rep.merge_worst("uniform-differentiability",
                            r <= tol ? CheckStatus::pass : CheckStatus::fail, r,
                            "x=" + format_point(x) + " u=" + format_point(u));
        }
    }
    return rep;
}

}  // namespace dilat
