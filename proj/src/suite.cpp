#include "dilat/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dilat/audit.hpp"
#include "dilat/calculus.hpp"
#include "dilat/curve_calculus.hpp"
#include "dilat/lookdown.hpp"
#include "dilat/tangent.hpp"

namespace dilat {

namespace {

struct Battery {
    std::uint64_t seed;
    int jobs;
    std::vector<Report> sections;
    std::vector<CriterionResult> criteria;

    Report& section(int id, const std::string& name) {
        sections.emplace_back();
        sections.back().title = "criterion-" + std::to_string(id) + ":" + name;
        criteria.push_back({id, name, false, ""});
        return sections.back();
    }

    void close_section(const std::string& detail = "") {
        criteria.back().pass = sections.back().all_pass();
        criteria.back().detail = detail;
    }
};

void expect(Report& rep, const std::string& name, bool ok, double residual,
            const std::string& witness = "") {
    rep.add(name, ok ? CheckStatus::pass : CheckStatus::fail, residual, ok ? "" : witness);
}

// ------------------------------------------------------------- criterion 1

void criterion_axiom_audit(Battery& b) {
    Report& rep = b.section(1, "axiom audit");
    AuditConfig cfg;
    cfg.sample_count = 50;
    cfg.seed = b.seed;
    cfg.jobs = b.jobs;
    for (const char* name :
         {"euclidean:2", "euclidean:3", "rotating:0", "rotating:0.5", "heisenberg"}) {
        auto S = make_structure(name);
        Report audit = audit_axioms(*S, cfg);
        for (const char* rec : {"A1.identity", "A2.composition", "A0.inverse"}) {
            const auto* r = audit.find(rec);
            expect(rep, std::string(name) + "." + rec,
                   r && r->status == CheckStatus::pass && r->residual < 1e-10,
                   r ? r->residual : 1.0, r ? r->witness : "missing record");
        }
        for (const char* rec : {"A3.rescaled-distance", "A4.delta-limit"}) {
            const auto* r = audit.find(rec);
            expect(rep, std::string(name) + "." + rec,
                   r && r->status == CheckStatus::pass && r->residual < 1e-6,
                   r ? r->residual : 1.0, r ? r->witness : "missing record");
        }
    }
    auto broken = make_structure("broken:2");
    Report audit = audit_axioms(*broken, cfg);
    const auto* a3 = audit.find("A3.rescaled-distance");
    expect(rep, "broken:2.A3-degenerate", a3 && a3->status == CheckStatus::degenerate,
           a3 ? a3->residual : 1.0, "degenerate flag missing");
    b.close_section();
}

// ------------------------------------------------------------- criterion 2

void criterion_euclidean_tangent(Battery& b) {
    Report& rep = b.section(2, "euclidean tangent operations");
    auto S = make_structure("euclidean:2");
    SeededRng rng(b.seed ^ 0x2ULL);
    const EpsSchedule formula_sched{0.5, 0.5, 8};  // stays above roundoff of the 1/eps rescale
    const EpsSchedule dist_sched{0.5, 0.5, 8};

    double worst_delta = 0.0, worst_sum = 0.0, worst_dist = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Point zero(2, 0.0);
        const Point x = rng.point_in_box(zero, 1.0);
        const Point u = rng.point_in_box(x, 1.0);
        const Point v = rng.point_in_box(x, 1.0);
        for (double e : formula_sched.points()) {
            const Point got = delta_op(*S, x, Scale(e), u, v);
            Point want(2);
            for (int k = 0; k < 2; ++k) want[k] = x[k] + e * (u[k] - x[k]) + v[k] - u[k];
            worst_delta = std::max(worst_delta, dist2(got, want));
        }
        auto sum = tangent_sum(*S, x, u, v);
        Point limit(2);
        for (int k = 0; k < 2; ++k) limit[k] = x[k] + v[k] - u[k];
        if (!sum.converged()) worst_sum = 1.0;
        worst_sum = std::max(worst_sum, dist2(sum.value, limit));
        auto dx = tangent_distance(*S, x, u, v, dist_sched);
        worst_dist = std::max(worst_dist, std::abs(dx.value - S->distance(u, v)));
    }
    expect(rep, "delta-op-formula", worst_delta <= 1e-12, worst_delta);
    expect(rep, "sigma-limit", worst_sum <= 1e-9, worst_sum);
    expect(rep, "dx-equals-d", worst_dist <= 1e-12, worst_dist);
    b.close_section();
}

// ------------------------------------------------------------- criterion 3

void criterion_heisenberg_tangent(Battery& b) {
    Report& rep = b.section(3, "heisenberg tangent operations");
    auto Sp = make_structure("heisenberg");
    const auto& S = *Sp;
    SeededRng rng(b.seed ^ 0x3ULL);
    const Point zero(3, 0.0);

    double worst_sum = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Point x = rng.point_in_box(zero, 0.3);
        const Point u = rng.point_in_box(x, 0.3);
        const Point v = rng.point_in_box(x, 0.3);
        auto sum = tangent_sum(S, x, u, v);
        const Point closed = HeisenbergStructure::group_op(
            x, HeisenbergStructure::group_op(HeisenbergStructure::group_inv(u), v));
        if (!sum.converged()) worst_sum = 1.0;
        worst_sum = std::max(worst_sum, dist2(sum.value, closed));
    }
    expect(rep, "sigma-closed-form", worst_sum <= 1e-6, worst_sum);

    // Cone property and the metric-tangent sup at the group identity.
    double worst_cone = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Point u = rng.point_in_box(zero, 1.0);
        const Point v = rng.point_in_box(zero, 1.0);
        Report cone = check_cone_property(S, zero, u, v, {0.25, 0.5, 1.0}, {0.5, 0.5, 12}, 1e-12);
        const auto* r = cone.find("cone");
        if (!r || r->status != CheckStatus::pass) worst_cone = std::max(worst_cone, 1.0);
        if (r) worst_cone = std::max(worst_cone, r->residual);
    }
    expect(rep, "cone-property", worst_cone <= 1e-12, worst_cone);

    Report mt = check_metric_tangent(S, zero, {0.5, 0.5, 24}, 8, b.seed ^ 0x33ULL, 1e-12);
    const auto* mtr = mt.find("metric-tangent");
    expect(rep, "metric-tangent-sup", mtr && mtr->status == CheckStatus::pass &&
                                          mtr->residual <= 1e-12,
           mtr ? mtr->residual : 1.0);

    // D(N) membership against {third group coordinate = 0}.
    TangentGroup tg{&S, zero};
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        Point u = rng.point_in_box(zero, 1.0);
        const bool expect_member = (i % 2 == 0);
        if (expect_member)
            u[2] = 0.0;
        else if (std::abs(u[2]) < 0.05)
            u[2] = 0.25;
        auto res = one_param_membership(tg, u);
        if (res.member != expect_member) ++mismatches;
    }
    expect(rep, "one-param-membership", mismatches == 0, static_cast<double>(mismatches));
    b.close_section();
}

// ------------------------------------------------------------- criterion 4

void criterion_curve_calculus(Battery& b) {
    Report& rep = b.section(4, "curve calculus");
    auto E2 = make_structure("euclidean:2");
    auto E1 = make_structure("euclidean:1");
    auto H = make_structure("heisenberg");

    {
        auto sign = make_curve("sign", 2);
        const double var = variation(sign, *E2).value;
        expect(rep, "sign-variation", std::abs(var - 4.0) <= 1e-4, std::abs(var - 4.0));
        const double hl = hausdorff_length_estimate(sign, *E2, 1e-3);
        expect(rep, "sign-path-length", std::abs(hl - 2.0) <= 1e-2, std::abs(hl - 2.0));
    }
    {
        auto cantor = make_curve("cantor:12", 1);
        const double var = variation(cantor, *E1).value;
        expect(rep, "cantor-variation", var >= 0.999 && var <= 1.0 + 1e-12,
               std::abs(var - 1.0));
        auto graph = make_curve("cantor-graph:12", 2);
        const double hl = hausdorff_length_estimate(graph, *E2, 1e-6);
        expect(rep, "cantor-graph-length", std::abs(hl - 2.0) <= 5e-3, std::abs(hl - 2.0),
               "depth-12 approximant graph length " + format_sig17(hl));
    }
    {
        struct Fixture {
            const char* curve;
            StructurePtr S;
        };
        const Fixture fixtures[] = {{"segment", E2}, {"abs", E2},   {"circle", E2},
                                    {"polyline", E2}, {"hline", H}, {"hlift-circle", H}};
        for (const auto& f : fixtures) {
            auto c = make_curve(f.curve, f.S->dim());
            const double var = variation(c, *f.S).value;
            const auto len = length_via_dilatation(c, *f.S, 512);
            const double rel = std::abs(len.value - var) / std::max(var, 1e-300);
            expect(rep, std::string("length-equals-variation:") + f.curve,
                   !len.variation_fallback && rel <= 1e-3, rel);
        }
    }
    b.close_section();
}

// ------------------------------------------------------------- criterion 5

void criterion_length_formula(Battery& b) {
    Report& rep = b.section(5, "length formula");
    {
        auto E2 = make_structure("euclidean:2");
        auto c = make_curve("circle", 2);
        auto res = length_formula_check(*E2, c, 512);
        expect(rep, "euclidean-circle", !res.refused && res.rel_err <= 1e-4, res.rel_err);
    }
    {
        auto H = make_structure("heisenberg");
        auto c = make_curve("hlift-circle", 3);
        auto res = length_formula_check(*H, c, 512);
        expect(rep, "heisenberg-circle-lift", !res.refused && res.rel_err <= 1e-3, res.rel_err);
    }
    b.close_section();
}

// ------------------------------------------------------------- criterion 6

void criterion_rn_contrast(Battery& b) {
    Report& rep = b.section(6, "radon-nikodym contrast");
    {
        auto E2 = make_structure("euclidean:2");
        auto c = make_curve("polyline", 2);
        auto res = rn_probe(*E2, c, 100, tangent_schedule(), b.seed ^ 0x6aULL);
        expect(rep, "euclidean-polyline-fraction", res.derivable_fraction >= 0.97,
               1.0 - res.derivable_fraction);
    }
    {
        auto R = make_structure("rotating:0.5");
        auto c = make_curve("segment", 2);
        auto res = rn_probe(*R, c, 100, tangent_schedule(), b.seed ^ 0x6bULL);
        const int failures = res.samples - static_cast<int>(
            std::lround(res.derivable_fraction * res.samples));
        const bool oscillating_dominates =
            failures > 0 && res.oscillating_failures >= static_cast<int>(0.95 * failures);
        expect(rep, "rotating-segment-fraction", res.derivable_fraction <= 0.05,
               res.derivable_fraction);
        expect(rep, "rotating-segment-oscillating", oscillating_dominates,
               failures - res.oscillating_failures);
    }
    b.close_section();
}

// ------------------------------------------------------------- criterion 7

void criterion_pansu(Battery& b) {
    Report& rep = b.section(7, "pansu differentiation on rotating(0.5)");
    auto R = make_structure("rotating:0.5");
    const Point x{1.0, 0.0};
    const EpsSchedule sched{0.5, 0.5, 18};
    SeededRng rng(b.seed ^ 0x7ULL);

    {
        auto F = make_map("square", R, R);
        DerivativeEstimate D = make_derivative(F, x, sched);
        double worst_resid = 0.0, worst_val = 0.0;
        for (int i = 0; i < 12; ++i) {
            const Point u = rng.point_in_box(x, 0.25);
            auto est = D.apply(u);
            if (!est.converged()) worst_resid = 1.0;
            worst_resid = std::max(worst_resid, est.residual);
            // First-order oracle: Q(u) = x^2 + 2x(u - x) in complex arithmetic.
            const Point h{u[0] - x[0], u[1] - x[1]};
            const Point want{1.0 + 2.0 * h[0], 2.0 * h[1]};
            worst_val = std::max(worst_val, dist2(est.value, want));
        }
        expect(rep, "square-derivative-converges", worst_resid < 1e-6, worst_resid);
        expect(rep, "square-derivative-value", worst_val <= 1e-6, worst_val);

        auto Q = [&](const Point& u) {
            auto est = D.apply(u);
            return est.converged() ? est.value : Point{NAN, NAN};
        };
        Report morph = check_conical_morphism(Q, *R, x, *R, F.eval(x), 8, 0.2,
                                              b.seed ^ 0x71ULL, {0.5, 0.5, 18}, 1e-5);
        for (const auto& r : morph.records)
            expect(rep, "square-" + r.name, r.status == CheckStatus::pass, r.residual,
                   r.witness);
    }
    {
        auto F = make_map("conjugate", R, R);
        int oscillating = 0;
        const int probes = 20;
        for (int i = 0; i < probes; ++i) {
            const Point u = rng.point_in_box(x, 0.25);
            auto est = pansu_derivative(F, x, u, sched);
            if (est.status == LimitStatus::oscillating) ++oscillating;
        }
        expect(rep, "conjugate-oscillates", oscillating >= static_cast<int>(0.95 * probes),
               probes - oscillating);
    }
    b.close_section();
}

// ------------------------------------------------------------- criterion 8

void criterion_equivalence(Battery& b) {
    Report& rep = b.section(8, "equivalence of rotating structures");
    const double thetas[] = {0.0, 0.3, 0.7};
    const EpsSchedule sched{0.5, 0.5, 16};
    for (double t1 : thetas) {
        for (double t2 : thetas) {
            auto S1 = make_structure("rotating:" + format_sig17(t1));
            auto S2 = make_structure("rotating:" + format_sig17(t2));
            auto res = equivalence_check(*S1, *S2, 10, 0.8, b.seed ^ 0x8ULL, sched);
            const bool want = (t1 == t2);
            char name[64];
            std::snprintf(name, sizeof(name), "classification:%g-vs-%g", t1, t2);
            expect(rep, name, res.equivalent == want, res.equivalent == want ? 0.0 : 1.0);
            if (want && res.equivalent) {
                Report iso = tangent_iso_check(*S1, *S2, Point{0.2, -0.1}, 6, 0.6,
                                               b.seed ^ 0x88ULL, sched, 1e-8);
                const auto* r = iso.find("tangent-iso");
                std::snprintf(name, sizeof(name), "tangent-iso:%g", t1);
                expect(rep, name, r && r->status == CheckStatus::pass, r ? r->residual : 1.0);
            }
        }
    }
    b.close_section();
}

// ------------------------------------------------------------- criterion 9

void criterion_chain_rule(Battery& b) {
    Report& rep = b.section(9, "chain rule");
    {
        auto E2 = make_structure("euclidean:2");
        auto F = make_map("affine:1,2;0,1;t:0.5,-1", E2, E2);
        auto G = make_map("affine:2,0;1,1;t:-0.25,2", E2, E2);
        Report r = chain_rule_check(F, G, Point{0.3, -0.7}, 8, 1.0, b.seed ^ 0x9ULL);
        const auto* rec = r.find("chain.compose");
        expect(rep, "affine-composition", r.all_pass() && rec && rec->residual <= 1e-10,
               rec ? rec->residual : 1.0);
    }
    {
        auto H = make_structure("heisenberg");
        auto F = make_map("hgraded:0.5", H, H);
        auto G = make_map("hgraded:1.5", H, H);
        // The graded coordinate of this group is rescaled by 1/eps^2 inside
        // the blow-up, so the schedule stays above the roundoff window.
        Report r = chain_rule_check(F, G, Point{0.2, 0.1, -0.3}, 8, 0.5, b.seed ^ 0x99ULL,
                                    {0.5, 0.5, 11}, 1e-8);
        const auto* rec = r.find("chain.compose");
        expect(rep, "heisenberg-graded-composition",
               r.all_pass() && rec && rec->residual <= 1e-8, rec ? rec->residual : 1.0);
    }
    b.close_section();
}

// ------------------------------------------------------------ criterion 10

void criterion_lookdown(Battery& b) {
    Report& rep = b.section(10, "lookdown pair heisenberg >= euclidean");
    auto P = make_lookdown_pair("heisenberg-euclidean");

    LookdownAuditConfig cfg;
    cfg.samples = 40;
    cfg.ball_radius = 0.5;
    cfg.seed = b.seed ^ 0xaULL;
    Report audit = lookdown_audit(P, cfg);
    expect(rep, "audit-all-pass", audit.all_pass(), 0.0,
           audit.all_pass() ? "" : "see lookdown audit records");

    {
        SeededRng rng(b.seed ^ 0xa1ULL);
        const Point zero(3, 0.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Point x = rng.point_in_box(zero, 0.5);
            const Point u = rng.point_in_box(x, 0.5);
            auto est = identity_derivative(P, x, u);
            const Point a = HeisenbergStructure::group_op(HeisenbergStructure::group_inv(x), u);
            const Point want{x[0] + a[0], x[1] + a[1],
                             x[2] + 0.5 * (x[0] * a[1] - x[1] * a[0])};
            if (!est.converged()) worst = 1.0;
            worst = std::max(worst, dist2(est.value, want));
        }
        expect(rep, "identity-derivative-closed-form", worst <= 1e-6, worst);
    }
    {
        Report proj = check_projector(P, Point{0.1, -0.2, 0.05}, 10, 0.5, b.seed ^ 0xa2ULL);
        const auto* idem = proj.find("projector.idempotent");
        expect(rep, "projector-idempotent",
               idem && idem->status == CheckStatus::pass && idem->residual <= 1e-9,
               idem ? idem->residual : 1.0);
        const auto* comm = proj.find("projector.dilation-commute");
        expect(rep, "projector-dilation-commute", comm && comm->status == CheckStatus::pass,
               comm ? comm->residual : 1.0);
    }
    {
        const Point zero(3, 0.0);
        auto res = check_condition_c(P, zero,
                                     [](double e) { return Point{1.0, 0.0, e}; });
        const auto* rec = res.report.find("condition-c");
        expect(rep, "condition-c-probe", rec && rec->status == CheckStatus::pass,
               rec ? rec->residual : 1.0);
        auto fit = fit_power_decay(res.vertical_trace, 0.06);
        const bool fit_ok = fit.valid && std::abs(fit.p - 0.5) <= 0.05 &&
                            std::abs(fit.C - 2.0) <= 0.2;
        expect(rep, "condition-c-decay-2sqrt-eps", fit_ok,
               fit.valid ? std::abs(fit.C - 2.0) : 1.0,
               "fitted C=" + format_sig17(fit.C) + " p=" + format_sig17(fit.p));
    }
    b.close_section();
}

// ------------------------------------------------------------ criterion 11

void criterion_transfer(Battery& b) {
    Report& rep = b.section(11, "transfer probe");
    auto P = make_lookdown_pair("heisenberg-euclidean");

    for (const char* fixture : {"hline", "hlift-circle"}) {
        auto c = make_curve(fixture, 3);
        auto res = transfer_probe(P, c, 40, tangent_schedule(), b.seed ^ 0xbULL);
        expect(rep, std::string(fixture) + "-stages", res.report.all_pass(),
               1.0 - res.agreement_fraction);
        expect(rep, std::string(fixture) + "-a-matches-b", res.agreement_fraction >= 0.97,
               1.0 - res.agreement_fraction);
    }
    {
        auto c = make_curve("vseg", 3);
        bool rejected = false;
        try {
            transfer_probe(P, c, 4, tangent_schedule(), b.seed ^ 0xb2ULL);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        expect(rep, "vertical-segment-rejected", rejected, rejected ? 0.0 : 1.0);
    }
    {
        auto reversed = make_lookdown_pair("euclidean-heisenberg");
        LookdownAuditConfig cfg;
        cfg.samples = 40;
        cfg.ball_radius = 0.5;
        cfg.seed = b.seed ^ 0xb3ULL;
        Report audit = lookdown_audit(reversed, cfg);
        const auto* a = audit.find("lookdown.a-lipschitz");
        expect(rep, "reversed-pair-fails-a",
               a && a->status == CheckStatus::fail && !a->witness.empty(),
               a ? a->residual : 0.0);
    }
    b.close_section();
}

RunReport build_battery(const SuiteConfig& cfg, std::vector<CriterionResult>& criteria) {
    Battery b{cfg.seed, cfg.jobs, {}, {}};
    criterion_axiom_audit(b);
    criterion_euclidean_tangent(b);
    criterion_heisenberg_tangent(b);
    criterion_curve_calculus(b);
    criterion_length_formula(b);
    criterion_rn_contrast(b);
    criterion_pansu(b);
    criterion_equivalence(b);
    criterion_chain_rule(b);
    criterion_lookdown(b);
    criterion_transfer(b);

    RunReport rr;
    rr.command = "suite";
    rr.config["seed"] = std::to_string(cfg.seed);
    rr.sections = std::move(b.sections);
    criteria = std::move(b.criteria);
    return rr;
}

}  // namespace

SuiteResult run_acceptance_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult out;
    out.report = build_battery(cfg, out.criteria);

    if (cfg.check_determinism) {
        std::vector<CriterionResult> again;
        RunReport second = build_battery(cfg, again);
        const bool identical = to_json(out.report).dump() == to_json(second).dump();
        Report det;
        det.title = "criterion-12:determinism";
        det.add("byte-identical-reports", identical ? CheckStatus::pass : CheckStatus::fail,
                identical ? 0.0 : 1.0, identical ? "" : "re-run with same seed differed");
        out.report.sections.push_back(det);
        out.criteria.push_back({12, "determinism", identical, ""});
    }

    out.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void print_criteria(std::ostream& os, const SuiteResult& result) {
    for (const auto& c : result.criteria) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name;
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
        if (!c.pass) {
            for (const auto& s : result.report.sections) {
                if (s.title.rfind("criterion-" + std::to_string(c.id) + ":", 0) != 0) continue;
                for (const auto& r : s.records)
                    if (r.status != CheckStatus::pass && r.status != CheckStatus::vacuous)
                        os << "       - " << r.name << ": " << to_string(r.status)
                           << " residual=" << format_sig17(r.residual)
                           << (r.witness.empty() ? "" : " [" + r.witness + "]") << "\n";
            }
        }
    }
    os << (result.all_pass() ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << "\n";
}

}  // namespace dilat
