#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dilat/curve_calculus.hpp"
#include "dilat/structures.hpp"
#include "dilat/tangent.hpp"

using namespace dilat;

namespace {
constexpr double kTau = 6.283185307179586476925286766559;

Curve constant_curve() {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "constant";
    c.lip_bound = 0.0;
    c.eval_fn = [](double) { return Point{0.25, -0.75}; };
    return c;
}

Curve scaled_segment(double speed) {
    Curve c;
    c.a = 0.0;
    c.b = 1.0;
    c.name = "scaled-segment";
    c.lip_bound = speed;
    c.eval_fn = [speed](double t) { return Point{speed * t, 0.0}; };
    return c;
}
}

TEST_CASE("curve fixtures and validation") {
    CHECK(make_curve("segment", 2).eval(0.5)[0] == 0.5);
    CHECK_THROWS_AS(make_curve("segment", 2).eval(2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_curve("nosuch", 2), std::invalid_argument);
    CHECK_THROWS_AS(make_curve("hline", 2), std::invalid_argument);  // dimension mismatch
    // Lipschitz promise holds on sampled increments where present.
    auto E = make_structure("euclidean:2");
    auto c = make_curve("circle", 2);
    SeededRng rng(43);
    for (int i = 0; i < 50; ++i) {
        double s = rng.uniform(c.a, c.b), t = rng.uniform(c.a, c.b);
        CHECK(E->distance(c.eval(s), c.eval(t)) <=
              *c.lip_bound * std::abs(s - t) * (1.0 + 1e-9));
    }
}

TEST_CASE("cantor staircase evaluation") {
    CHECK(cantor_staircase(0.0, 12) == 0.0);
    CHECK(cantor_staircase(1.0, 12) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cantor_staircase(0.5, 12) == doctest::Approx(0.5));   // middle plateau
    CHECK(cantor_staircase(1.0 / 3.0, 12) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cantor_staircase(0.4, 12) == doctest::Approx(0.5));   // inside [1/3, 2/3]
    // Monotone.
    for (int i = 0; i < 100; ++i)
        CHECK(cantor_staircase(i / 100.0, 12) <= cantor_staircase((i + 1) / 100.0, 12));
}

TEST_CASE("variation") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("sign curve has variation 4") {
        auto v = variation(make_curve("sign", 2), *E2);
        CHECK(v.converged);
        CHECK(v.value == doctest::Approx(4.0).epsilon(1e-4));
    }
    SUBCASE("constant curve has variation 0") {
        CHECK(variation(constant_curve(), *E2).value == 0.0);
    }
    SUBCASE("cantor staircase approximant has variation 1") {
        auto E1 = make_structure("euclidean:1");
        auto v = variation(make_curve("cantor:12", 1), *E1);
        CHECK(v.value == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(v.value <= 1.0 + 1e-12);
    }
    SUBCASE("refinement is monotone nondecreasing") {
        auto c = make_curve("circle", 2);
        double prev = 0.0;
        for (int depth = 1; depth <= 8; ++depth) {
            auto v = variation(c, *E2, 1e-300, depth);
            CHECK(v.value >= prev - 1e-14);
            prev = v.value;
        }
    }
}

TEST_CASE("upper dilatation") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("corner of (t, |t|) sees sqrt(2)") {
        const double v = upper_dilatation(make_curve("abs", 2), 0.0, *E2);
        CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    }
    SUBCASE("linear curve sees its speed") {
        const double v = upper_dilatation(scaled_segment(2.0), 0.5, *E2);
        CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("constant curve sees zero") {
        CHECK(upper_dilatation(constant_curve(), 0.5, *E2) == 0.0);
    }
    SUBCASE("jump yields the +infinity sentinel") {
        CHECK(std::isinf(upper_dilatation(make_curve("sign", 2), 0.0, *E2)));
    }
    SUBCASE("heisenberg vertical direction is unbounded") {
        auto H = make_structure("heisenberg");
        CHECK(std::isinf(upper_dilatation(make_curve("vseg", 3), 0.5, *H)));
    }
}

TEST_CASE("metric derivative") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("linear curve") {
        auto est = metric_derivative(scaled_segment(3.0), 0.4, *E2);
        CHECK(est.converged());
        CHECK(est.value == doctest::Approx(3.0).epsilon(1e-9));
    }
    SUBCASE("unit circle at arc-length parametrization") {
        auto est = metric_derivative(make_curve("circle", 2), 2.0, *E2);
        CHECK(est.converged());
        CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("heisenberg horizontal line") {
        auto H = make_structure("heisenberg");
        auto est = metric_derivative(make_curve("hline", 3), 0.5, *H);
        CHECK(est.converged());
        CHECK(est.value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("vertical segment diverges in the gauge") {
        auto H = make_structure("heisenberg");
        auto est = metric_derivative(make_curve("vseg", 3), 0.5, *H);
        CHECK(est.status == LimitStatus::diverging);
    }
    SUBCASE("bounded by the promised Lipschitz constant where present") {
        for (const char* name : {"circle", "polyline", "abs"}) {
            auto c = make_curve(name, 2);
            REQUIRE(c.lip_bound.has_value());
            SeededRng rng(47);
            for (int i = 0; i < 5; ++i) {
                const double t = rng.uniform(c.a + 0.1, c.b - 0.1);
                auto est = metric_derivative(c, t, *E2);
                if (est.converged()) CHECK(est.value <= *c.lip_bound * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("length via the dilatation integral") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("unit circle") {
        auto res = length_via_dilatation(make_curve("circle", 2), *E2, 512);
        CHECK(!res.variation_fallback);
        CHECK(res.value == doctest::Approx(kTau).epsilon(2e-5));
    }
    SUBCASE("segment of speed 2") {
        auto res = length_via_dilatation(scaled_segment(2.0), *E2, 128);
        CHECK(res.value == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("sign curve falls back to the variation value") {
        auto res = length_via_dilatation(make_curve("sign", 2), *E2, 128);
        CHECK(res.variation_fallback);
        CHECK(res.value == doctest::Approx(4.0).epsilon(1e-3));
    }
}

TEST_CASE("hausdorff length of the path") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("sign curve path has measure 2, not 4") {
        const double v = hausdorff_length_estimate(make_curve("sign", 2), *E2, 1e-3);
        CHECK(v == doctest::Approx(2.0).epsilon(5e-3));
    }
    SUBCASE("injective segment equals its variation") {
        Curve c = scaled_segment(1.5);
        const double v = hausdorff_length_estimate(c, *E2, 1e-3);
        CHECK(v == doctest::Approx(variation(c, *E2).value).epsilon(1e-9));
    }
    SUBCASE("depth-12 cantor graph approaches its exact polyline length from below") {
        // The approximant's graph length in closed form:
        // (1 - (2/3)^12) + sqrt(1 + (2/3)^24).
        const double r = std::pow(2.0 / 3.0, 12);
        const double exact = 1.0 - r + std::sqrt(1.0 + r * r);
        const double v = hausdorff_length_estimate(make_curve("cantor-graph:12", 2), *E2, 2e-6);
        CHECK(v <= exact + 1e-9);
        CHECK(v >= exact - 6e-3);
    }
}

TEST_CASE("arc-length reparametrization") {
    auto E2 = make_structure("euclidean:2");
    SUBCASE("domain scales to total variation") {
        Curve c = scaled_segment(2.0);
        Curve rc = reparametrize_arclength(c, *E2);
        CHECK(rc.a == 0.0);
        CHECK(rc.b == doctest::Approx(2.0).epsilon(1e-9));
        // Unit speed after reparametrization.
        CHECK(upper_dilatation(rc, 1.0, *E2, 0.05) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("circle with angular speed 3 becomes unit speed") {
        Curve rc = reparametrize_arclength(make_curve("circle:3", 2), *E2);
        CHECK(rc.b == doctest::Approx(3.0 * kTau).epsilon(1e-5));
        for (double s : {1.0, 4.0, 9.0})
            CHECK(upper_dilatation(rc, s, *E2, 0.02) == doctest::Approx(1.0).epsilon(1e-2));
    }
    SUBCASE("already unit-speed curves reparametrize to themselves") {
        Curve c = scaled_segment(1.0);
        Curve rc = reparametrize_arclength(c, *E2);
        SeededRng rng(53);
        for (int i = 0; i < 20; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            CHECK(dist2(rc.eval(t), c.eval(t)) < 1e-9);
        }
    }
    SUBCASE("variation is invariant under reparametrization") {
        for (const char* name : {"circle", "polyline"}) {
            Curve c = make_curve(name, 2);
            Curve rc = reparametrize_arclength(c, *E2);
            const double v1 = variation(c, *E2, 1e-7).value;
            const double v2 = variation(rc, *E2, 1e-7).value;
            CHECK(std::abs(v1 - v2) / v1 < 1e-6);
        }
    }
    SUBCASE("zero-length curves are rejected") {
        CHECK_THROWS_AS(reparametrize_arclength(constant_curve(), *E2), std::invalid_argument);
    }
}

TEST_CASE("dilatation derivability") {
    SUBCASE("euclidean straight line is derivable with the obvious candidate") {
        auto E2 = make_structure("euclidean:2");
        Curve c = scaled_segment(1.0);
        auto res = derivative_at(c, 0.5, *E2);
        CHECK(res.derivable);
        CHECK(res.forward.converged());
        CHECK(dist2(res.forward.value, {1.5, 0.0}) < 1e-10);  // c(t) + direction
    }
    SUBCASE("heisenberg horizontal line is exact at every scale") {
        auto H = make_structure("heisenberg");
        auto res = derivative_at(make_curve("hline", 3), 0.5, *H);
        CHECK(res.derivable);
        for (const auto& [e, v] : res.forward.samples) CHECK(dist2(v, {1.5, 0.0, 0.0}) < 1e-10);
    }
    SUBCASE("rotating structure spins the candidate forever") {
        auto R = make_structure("rotating:0.5");
        auto res = derivative_at(make_curve("segment", 2), 0.5, *R);
        CHECK(!res.derivable);
        CHECK(res.forward.status == LimitStatus::oscillating);
    }
}

TEST_CASE("radon-nikodym probe") {
    SUBCASE("euclidean polyline is derivable away from corners") {
        auto E2 = make_structure("euclidean:2");
        auto res = rn_probe(*E2, make_curve("polyline", 2), 100, tangent_schedule(), 61);
        CHECK(res.derivable_fraction >= 0.97);
        CHECK(res.report.all_pass());
    }
    SUBCASE("rotating segment fails almost everywhere, by oscillation") {
        auto R = make_structure("rotating:0.5");
        auto res = rn_probe(*R, make_curve("segment", 2), 100, tangent_schedule(), 61);
        CHECK(res.derivable_fraction <= 0.05);
        CHECK(res.oscillating_failures >= 95);
        CHECK(!res.report.all_pass());
    }
    SUBCASE("heisenberg horizontal circle lift is derivable") {
        auto H = make_structure("heisenberg");
        auto res = rn_probe(*H, make_curve("hlift-circle", 3), 60, tangent_schedule(), 61);
        CHECK(res.derivable_fraction >= 0.97);
    }
}

TEST_CASE("length formula lhs vs rhs") {
    SUBCASE("euclidean unit circle") {
        auto E2 = make_structure("euclidean:2");
        auto res = length_formula_check(*E2, make_curve("circle", 2), 256);
        CHECK(!res.refused);
        CHECK(res.lhs == doctest::Approx(kTau).epsilon(1e-4));
        CHECK(res.rel_err < 1e-4);
    }
    SUBCASE("segment is exact") {
        auto E2 = make_structure("euclidean:2");
        auto res = length_formula_check(*E2, scaled_segment(1.0), 64);
        CHECK(!res.refused);
        CHECK(res.rel_err < 1e-9);
    }
    SUBCASE("heisenberg horizontal circle lift") {
        auto H = make_structure("heisenberg");
        auto res = length_formula_check(*H, make_curve("hlift-circle", 3), 256);
        CHECK(!res.refused);
        CHECK(res.rel_err < 1e-3);
    }
    SUBCASE("rotating structure refuses for lack of derivability") {
        auto R = make_structure("rotating:0.5");
        auto res = length_formula_check(*R, make_curve("segment", 2), 64);
        CHECK(res.refused);
    }
    SUBCASE("metric derivative equals the tangent norm of the derivative") {
        auto H = make_structure("heisenberg");
        Curve c = make_curve("hlift-circle", 3);
        SeededRng rng(67);
        for (int i = 0; i < 5; ++i) {
            const double t = rng.uniform(1.0, kTau - 1.0);
            auto d = derivative_at(c, t, *H);
            REQUIRE(d.derivable);
            auto md = metric_derivative(c, t, *H);
            auto norm = tangent_distance(*H, c.eval(t), c.eval(t), d.forward.value);
            CHECK(std::abs(md.value - norm.value) < 1e-4);
        }
    }
}
