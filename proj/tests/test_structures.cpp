#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dilat/structures.hpp"

using namespace dilat;

TEST_CASE("registry resolves the documented name grammar") {
    CHECK(make_structure("euclidean:2")->dim() == 2);
    CHECK(make_structure("euclidean:3")->dim() == 3);
    CHECK(make_structure("euclidean:1")->dim() == 1);
    CHECK(make_structure("rotating:0.5")->dim() == 2);
    CHECK(make_structure("heisenberg")->dim() == 3);
    CHECK(make_structure("heisenberg-frame")->dim() == 3);
    CHECK(make_structure("broken:2")->dim() == 2);
    CHECK(make_structure("euclidean:2:p1")->dim() == 2);

    CHECK_THROWS_AS(make_structure("nosuch"), std::invalid_argument);
    CHECK_THROWS_AS(make_structure("euclidean"), std::invalid_argument);
    CHECK_THROWS_AS(make_structure("euclidean:x"), std::invalid_argument);
    CHECK_THROWS_AS(make_structure("rotating:abc"), std::invalid_argument);
    CHECK_THROWS_AS(make_structure("heisenberg:3"), std::invalid_argument);
}

TEST_CASE("euclidean dilatations") {
    auto S = make_structure("euclidean:2");
    SUBCASE("closed form x + eps(y - x)") {
        Point r = S->dilate({0.0, 0.0}, Scale(0.5), {2.0, 0.0});
        CHECK(r[0] == 1.0);
        CHECK(r[1] == 0.0);
    }
    SUBCASE("eps = 1 is the identity, exactly") {
        Point y{0.1 + 0.2, -3.7};  // a value with rounding in it
        Point r = S->dilate({5.0, 1.0}, Scale(1.0), y);
        CHECK(points_equal(r, y));
    }
    SUBCASE("base point is fixed, exactly") {
        Point x{1.25, -0.5};
        CHECK(points_equal(S->dilate(x, Scale(0.3), x), x));
    }
    SUBCASE("rescaled distance is eps-independent") {
        Point x{0.2, 0.4}, u{1.0, -0.3}, v{-0.5, 0.9};
        for (double e : {1.0, 0.5, 0.125, 1e-3})
            CHECK(S->distance(S->dilate(x, Scale(e), u), S->dilate(x, Scale(e), v)) / e ==
                  doctest::Approx(S->distance(u, v)).epsilon(1e-12));
    }
    SUBCASE("non-finite input is rejected") {
        CHECK_THROWS_AS(S->dilate({0.0, 0.0}, Scale(0.5), {NAN, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(S->distance({0.0, 0.0}, {INFINITY, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(Scale(0.0), std::invalid_argument);
        CHECK_THROWS_AS(Scale(-2.0), std::invalid_argument);
    }
}

TEST_CASE("rotating structure") {
    auto R0 = make_structure("rotating:0.0");
    auto E = make_structure("euclidean:2");
    auto R = make_structure("rotating:0.5");

    SUBCASE("theta = 0 agrees with the euclidean dilatations on all inputs") {
        SeededRng rng(42);
        for (int i = 0; i < 50; ++i) {
            Point x = rng.point_in_box({0.0, 0.0}, 2.0);
            Point y = rng.point_in_box({0.0, 0.0}, 2.0);
            double e = rng.uniform(0.01, 1.5);
            Point a = R0->dilate(x, Scale(e), y);
            Point b = E->dilate(x, Scale(e), y);
            CHECK(points_equal(a, b));
        }
    }
    SUBCASE("|delta^x_eps y - x| = eps |y - x| exactly (modulus-1 rotation)") {
        SeededRng rng(7);
        for (int i = 0; i < 50; ++i) {
            Point x = rng.point_in_box({0.0, 0.0}, 1.0);
            Point y = rng.point_in_box({0.0, 0.0}, 1.0);
            double e = rng.uniform(0.05, 1.0);
            CHECK(dist2(R->dilate(x, Scale(e), y), x) ==
                  doctest::Approx(e * dist2(y, x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("heisenberg group and gauge") {
    auto Hp = make_structure("heisenberg");
    const auto& H = *Hp;

    SUBCASE("product examples") {
        Point p = HeisenbergStructure::group_op({1, 0, 0}, {0, 1, 0});
        CHECK(p[0] == 1.0);
        CHECK(p[1] == 1.0);
        CHECK(p[2] == 0.5);
        Point g{0.3, -0.7, 0.2};
        CHECK(points_equal(HeisenbergStructure::group_op(g, {0, 0, 0}), g));
        Point z = HeisenbergStructure::group_op({1, 0, 0}, {-1, 0, 0});
        CHECK(points_equal(z, {0, 0, 0}));
    }
    SUBCASE("inverses") {
        CHECK(points_equal(HeisenbergStructure::group_inv({1, 2, 3}), {-1, -2, -3}));
        CHECK(points_equal(HeisenbergStructure::group_inv({0, 0, 0}), {0, 0, 0}));
        SeededRng rng(3);
        for (int i = 0; i < 20; ++i) {
            Point g = rng.point_in_box({0, 0, 0}, 2.0);
            Point e = HeisenbergStructure::group_op(g, HeisenbergStructure::group_inv(g));
            CHECK(norm2(e) == 0.0);  // cross terms cancel exactly in fp
        }
    }
    SUBCASE("associativity on sampled triples (exact for this polynomial product)") {
        SeededRng rng(5);
        for (int i = 0; i < 50; ++i) {
            Point a = rng.point_in_box({0, 0, 0}, 1.5);
            Point b = rng.point_in_box({0, 0, 0}, 1.5);
            Point c = rng.point_in_box({0, 0, 0}, 1.5);
            Point lhs = HeisenbergStructure::group_op(HeisenbergStructure::group_op(a, b), c);
            Point rhs = HeisenbergStructure::group_op(a, HeisenbergStructure::group_op(b, c));
            CHECK(dist2(lhs, rhs) < 1e-15);
        }
    }
    SUBCASE("gauge homogeneity N(Delta_eps g) = eps N(g)") {
        SeededRng rng(9);
        for (int i = 0; i < 50; ++i) {
            Point g = rng.point_in_box({0, 0, 0}, 2.0);
            double e = rng.uniform(0.01, 1.0);
            CHECK(HeisenbergStructure::gauge(HeisenbergStructure::graded_dilation(e, g)) ==
                  doctest::Approx(e * HeisenbergStructure::gauge(g)).epsilon(1e-14));
        }
    }
    SUBCASE("graded dilation is a group automorphism") {
        SeededRng rng(11);
        for (int i = 0; i < 50; ++i) {
            Point g = rng.point_in_box({0, 0, 0}, 1.5);
            Point h = rng.point_in_box({0, 0, 0}, 1.5);
            double e = rng.uniform(0.05, 1.0);
            Point lhs = HeisenbergStructure::graded_dilation(
                e, HeisenbergStructure::group_op(g, h));
            Point rhs = HeisenbergStructure::group_op(
                HeisenbergStructure::graded_dilation(e, g),
                HeisenbergStructure::graded_dilation(e, h));
            CHECK(dist2(lhs, rhs) < 1e-14);
        }
    }
    SUBCASE("left invariance of the gauge distance") {
        SeededRng rng(13);
        for (int i = 0; i < 50; ++i) {
            Point g = rng.point_in_box({0, 0, 0}, 1.0);
            Point x = rng.point_in_box({0, 0, 0}, 1.0);
            Point y = rng.point_in_box({0, 0, 0}, 1.0);
            CHECK(H.distance(HeisenbergStructure::group_op(g, x),
                             HeisenbergStructure::group_op(g, y)) ==
                  doctest::Approx(H.distance(x, y)).epsilon(1e-12));
        }
    }
    SUBCASE("triangle inequality on samples") {
        SeededRng rng(17);
        for (int i = 0; i < 200; ++i) {
            Point x = rng.point_in_box({0, 0, 0}, 1.5);
            Point y = rng.point_in_box({0, 0, 0}, 1.5);
            Point z = rng.point_in_box({0, 0, 0}, 1.5);
            CHECK(H.distance(x, z) <= H.distance(x, y) + H.distance(y, z) + 1e-12);
        }
    }
    SUBCASE("graded base-point dilatation example") {
        Point r = H.dilate({0, 0, 0}, Scale(0.5), {1, 1, 1});
        CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r[2] == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("rescaled distance is eps-independent (exact conicality)") {
        SeededRng rng(19);
        Point x = rng.point_in_box({0, 0, 0}, 1.0);
        Point u = rng.point_in_box(x, 1.0);
        Point v = rng.point_in_box(x, 1.0);
        const double at1 = H.distance(H.dilate(x, Scale(0.5), u), H.dilate(x, Scale(0.5), v)) / 0.5;
        const double at2 =
            H.distance(H.dilate(x, Scale(0.01), u), H.dilate(x, Scale(0.01), v)) / 0.01;
        CHECK(at1 == doctest::Approx(at2).epsilon(1e-12));
    }
}

TEST_CASE("broken fixture contracts quadratically") {
    auto B = make_structure("broken:2");
    Point x{0.0, 0.0};
    Point r = B->dilate(x, Scale(0.5), {1.0, 0.0});
    CHECK(r[0] == doctest::Approx(0.25));
    // Rescaled distance collapses linearly in eps: the degenerate signature.
    Point u{1.0, 0.0}, v{0.0, 1.0};
    const double d1 = B->distance(B->dilate(x, Scale(0.1), u), B->dilate(x, Scale(0.1), v)) / 0.1;
    CHECK(d1 == doctest::Approx(0.1 * B->distance(u, v)).epsilon(1e-12));
}

TEST_CASE("heisenberg frame distance matches the gauge at first order on horizontal pairs") {
    auto F = make_structure("heisenberg-frame");
    auto H = make_structure("heisenberg");
    // On horizontal group increments (third group coordinate zero) the frame
    // norm and the gauge agree exactly.
    Point x{0.3, -0.2, 0.7};
    Point a{0.4, 0.1, 0.0};
    Point y = HeisenbergStructure::group_op(x, a);
    CHECK(F->distance(x, y) == doctest::Approx(norm2(a)).epsilon(1e-13));
    CHECK(H->distance(x, y) == doctest::Approx(norm2(a)).epsilon(1e-13));
}
