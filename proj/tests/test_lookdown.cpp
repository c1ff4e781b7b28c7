#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dilat/lookdown.hpp"
#include "dilat/tangent.hpp"

using namespace dilat;

namespace {
using H = HeisenbergStructure;

Point did_closed_form(const Point& x, const Point& u) {
    const Point a = H::group_op(H::group_inv(x), u);
    return {x[0] + a[0], x[1] + a[1], x[2] + 0.5 * (x[0] * a[1] - x[1] * a[0])};
}
}

TEST_CASE("q_eps closed form at the identity") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    SUBCASE("(a, b, c) -> (a, b, eps c)") {
        SeededRng rng(7);
        for (int i = 0; i < 20; ++i) {
            const Point z = rng.point_in_box({0, 0, 0}, 1.0);
            const double e = rng.uniform(0.01, 1.0);
            const Point q = q_eps(P, {0, 0, 0}, Scale(e), z);
            CHECK(q[0] == doctest::Approx(z[0]).epsilon(1e-14));
            CHECK(q[1] == doctest::Approx(z[1]).epsilon(1e-14));
            CHECK(q[2] == doctest::Approx(e * z[2]).epsilon(1e-14));
        }
    }
    SUBCASE("horizontal points are fixed at every scale") {
        for (double e : {1.0, 0.5, 0.1, 1e-3}) {
            const Point q = q_eps(P, {0, 0, 0}, Scale(e), {0.7, -0.4, 0.0});
            CHECK(dist2(q, {0.7, -0.4, 0.0}) < 1e-15);
        }
    }
    SUBCASE("eps = 1 is the identity") {
        const Point z{0.3, 0.1, -0.2};
        CHECK(points_equal(q_eps(P, {0.1, 0.1, 0.1}, Scale(1.0), z), z));
    }
}

TEST_CASE("distribution gap") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    const Point x0{0, 0, 0};
    SUBCASE("horizontal probe has zero gap") {
        for (double e : {0.5, 0.1, 0.01})
            CHECK(std::abs(distribution_gap(P, x0, Scale(e), {1, 0, 0})) < 1e-12);
    }
    SUBCASE("vertical offset: closed-form gauge arithmetic") {
        // gap = (1 + 16 s^2)^(1/4) - sqrt(1 + eps^2 s^2) for z = (1, 0, s).
        // At s = 1 the probe sits at gauge distance 17^(1/4) = 2.03, a hair
        // outside the default ball, so the radius parameter is widened.
        const double s = 1.0, e = 0.01;
        const double want = std::pow(1.0 + 16.0 * s * s, 0.25) -
                            std::sqrt(1.0 + e * e * s * s);
        const double got = distribution_gap(P, x0, Scale(e), {1, 0, s}, tangent_schedule(), 2.1);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
        CHECK(got == doctest::Approx(1.0304934).epsilon(1e-6));
        // Inside the default ball the same closed form holds.
        const double s2 = 0.5;
        const double want2 = std::pow(1.0 + 16.0 * s2 * s2, 0.25) -
                             std::sqrt(1.0 + e * e * s2 * s2);
        CHECK(distribution_gap(P, x0, Scale(e), {1, 0, s2}) ==
              doctest::Approx(want2).epsilon(1e-10));
    }
    SUBCASE("z = x gives zero") {
        CHECK(distribution_gap(P, x0, Scale(0.25), x0) == doctest::Approx(0.0));
    }
    SUBCASE("probes outside the distribution ball are refused") {
        CHECK_THROWS_AS(distribution_gap(P, x0, Scale(0.5), {3, 0, 0}), std::invalid_argument);
    }
}

TEST_CASE("condition (c) probes") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    const Point x0{0, 0, 0};
    SUBCASE("z(eps) = (1, 0, eps): gap vanishes and the vertical part is 2 sqrt(eps(1-eps))") {
        auto res = check_condition_c(P, x0, [](double e) { return Point{1.0, 0.0, e}; });
        CHECK(res.hypothesis_met);
        CHECK(res.conclusion_holds);
        CHECK(res.report.all_pass());
        for (auto [e, v] : res.vertical_trace)
            CHECK(v == doctest::Approx(2.0 * std::sqrt(e * (1.0 - e))).epsilon(1e-8));
    }
    SUBCASE("constant horizontal probe: both traces identically zero") {
        auto res = check_condition_c(P, x0, [](double) { return Point{1.0, 0.0, 0.0}; });
        CHECK(res.hypothesis_met);
        CHECK(res.conclusion_holds);
        for (auto [e, g] : res.gap_trace) CHECK(std::abs(g) < 1e-12);
        for (auto [e, v] : res.vertical_trace) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("constant vertical probe: hypothesis not met, reported vacuous") {
        auto res = check_condition_c(P, x0, [](double) { return Point{1.0, 0.0, 1.0}; });
        CHECK(!res.hypothesis_met);
        const auto* rec = res.report.find("condition-c");
        REQUIRE(rec != nullptr);
        CHECK(rec->status == CheckStatus::vacuous);
    }
}

TEST_CASE("identity derivative") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    SUBCASE("at the identity: horizontal projection") {
        auto est = identity_derivative(P, {0, 0, 0}, {0.4, -0.3, 0.6});
        CHECK(est.converged());
        CHECK(dist2(est.value, {0.4, -0.3, 0.0}) < 1e-10);
    }
    SUBCASE("general base point matches the closed form and a finite difference") {
        SeededRng rng(11);
        for (int i = 0; i < 15; ++i) {
            const Point x = rng.point_in_box({0, 0, 0}, 0.5);
            const Point u = rng.point_in_box(x, 0.5);
            auto est = identity_derivative(P, x, u);
            REQUIRE(est.converged());
            CHECK(P.lower->distance(est.value, did_closed_form(x, u)) < 1e-8);
            // Finite-difference oracle: q_eps at 1e-4 vs 1e-5 brackets the limit.
            const Point q4 = q_eps(P, x, Scale(1e-4), u);
            const Point q5 = q_eps(P, x, Scale(1e-5), u);
            CHECK(P.lower->distance(est.value, q5) <
                  10.0 * P.lower->distance(q4, q5) + 1e-9);
        }
    }
    SUBCASE("u = x is fixed") {
        const Point x{0.2, 0.1, -0.4};
        auto est = identity_derivative(P, x, x);
        CHECK(est.converged());
        CHECK(dist2(est.value, x) == 0.0);
    }
}

TEST_CASE("projector structure of the identity derivative") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    Report rep = check_projector(P, {0.1, -0.2, 0.05}, 8, 0.5, 17);
    for (const auto& r : rep.records) {
        INFO(r.name, " residual=", r.residual, " ", r.witness);
        CHECK(r.status == CheckStatus::pass);
    }
    SUBCASE("explicit fixed points commute with both dilatations, exactly") {
        SeededRng rng(19);
        for (int i = 0; i < 20; ++i) {
            const Point x = rng.point_in_box({0, 0, 0}, 0.5);
            Point a = rng.point_in_box({0, 0, 0}, 0.5);
            a[2] = 0.0;  // horizontal tangent direction
            const Point w = H::group_op(x, a);
            for (double e : {0.25, 0.5, 0.9}) {
                const Point pa = P.upper->dilate(x, Scale(e), w);
                const Point pb = P.lower->dilate(x, Scale(e), w);
                CHECK(dist2(pa, pb) < 1e-15);
            }
            // Such points also sit gap-free inside the distribution.
            if (P.upper->distance(x, w) <= 1.5)
                CHECK(std::abs(distribution_gap(P, x, Scale(0.125), w)) < 1e-10);
        }
    }
}

TEST_CASE("transfer probe") {
    auto P = make_lookdown_pair("heisenberg-euclidean");
    SUBCASE("horizontal line: every stage exact") {
        auto res = transfer_probe(P, make_curve("hline", 3), 25, tangent_schedule(), 23);
        CHECK(res.report.all_pass());
        CHECK(res.b_derivable_fraction == 1.0);
        CHECK(res.gap_vanish_fraction == 1.0);
        CHECK(res.vertical_vanish_fraction == 1.0);
        CHECK(res.agreement_fraction == 1.0);
        CHECK(std::abs(res.var_upper - res.var_lower) < 1e-9);
    }
    SUBCASE("horizontal circle lift: all stages converge") {
        auto res = transfer_probe(P, make_curve("hlift-circle", 3), 25, tangent_schedule(), 23);
        INFO("b=", res.b_derivable_fraction, " gap=", res.gap_vanish_fraction,
             " vert=", res.vertical_vanish_fraction, " a=", res.a_converged_fraction,
             " agree=", res.agreement_fraction);
        CHECK(res.report.all_pass());
        CHECK(res.agreement_fraction >= 0.97);
    }
    SUBCASE("vertical segment is rejected as non-Lipschitz") {
        CHECK_THROWS_AS(transfer_probe(P, make_curve("vseg", 3), 4, tangent_schedule(), 23),
                        std::invalid_argument);
    }
}

TEST_CASE("lookdown audit") {
    SUBCASE("shipped pair passes inside the half-unit ball") {
        auto P = make_lookdown_pair("heisenberg-euclidean");
        LookdownAuditConfig cfg;
        cfg.samples = 30;
        cfg.seed = 29;
        Report rep = lookdown_audit(P, cfg);
        for (const auto& r : rep.records) {
            INFO(r.name, " residual=", r.residual, " ", r.witness);
            CHECK((r.status == CheckStatus::pass || r.status == CheckStatus::vacuous));
        }
        CHECK(rep.config.count("a_holds_up_to_radius") == 1);
    }
    SUBCASE("reversed pair fails the 1-Lipschitz condition with a witness") {
        auto P = make_lookdown_pair("euclidean-heisenberg");
        LookdownAuditConfig cfg;
        cfg.samples = 30;
        cfg.seed = 29;
        Report rep = lookdown_audit(P, cfg);
        const auto* a = rep.find("lookdown.a-lipschitz");
        REQUIRE(a != nullptr);
        CHECK(a->status == CheckStatus::fail);
        CHECK(!a->witness.empty());
        // Direct oracle: vertical displacements compare |c| against 2 sqrt(|c|).
        const Point x{0, 0, 0}, z{0, 0, 0.25};
        CHECK(P.lower->distance(x, z) == doctest::Approx(1.0));   // gauge
        CHECK(P.upper->distance(x, z) == doctest::Approx(0.25));  // frame norm
    }
    SUBCASE("unknown pair name is rejected") {
        CHECK_THROWS_AS(make_lookdown_pair("nosuch"), std::invalid_argument);
    }
}

TEST_CASE("power-decay fitting") {
    std::vector<std::pair<double, double>> trace;
    for (double e = 0.5; e > 1e-5; e *= 0.5) trace.emplace_back(e, 2.0 * std::sqrt(e));
    auto fit = fit_power_decay(trace, 0.1);
    REQUIRE(fit.valid);
    CHECK(fit.p == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.C == doctest::Approx(2.0).epsilon(1e-6));
    auto vc = classify_vanishing(trace);
    CHECK(vc.vanishing);
    std::vector<std::pair<double, double>> flat;
    for (double e = 0.5; e > 1e-5; e *= 0.5) flat.emplace_back(e, 0.7);
    CHECK(!classify_vanishing(flat).vanishing);
}
