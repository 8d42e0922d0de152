#include <doctest.h>

#include <cmath>
#include <random>

#include "dyadic/ingest.hpp"
#include "dyadic/svg.hpp"
#include "dyadic/transforms.hpp"
#include "dyadic/viz.hpp"
#include "helpers.hpp"

using namespace dyadic;

TEST_CASE("welding curve of the zero tree is the baseline") {
    CoefficientTree zero;
    zero.depth = 5;
    zero.total_mass = 1.0;
    const auto curve = pseudo_welding_curve(zero, 4);
    CHECK(curve.knots.size() == (1u << 5) + 1);
    for (const auto& k : curve.knots) CHECK(k.y == 0.0);
    CHECK(curve.knots.front().x == 0.0);
    CHECK(curve.knots.back().x == 1.0);
}

TEST_CASE("single coefficient displaces the midpoint along the left normal") {
    CoefficientTree t;
    t.depth = 1;
    t.total_mass = 1.0;
    t.coeffs[{0, 0}] = 1.0;
    const auto curve = pseudo_welding_curve(t, 0);
    REQUIRE(curve.knots.size() == 3);
    CHECK(curve.knots[0].x == 0.0);
    CHECK(curve.knots[0].y == 0.0);
    CHECK(curve.knots[1].x == 0.5);
    CHECK(curve.knots[1].y == 0.5);  // half the base length, left-normal side
    CHECK(curve.knots[1].node == NodeId{0, 0});
    CHECK(curve.knots[2].x == 1.0);
    CHECK(curve.knots[2].y == 0.0);
    CHECK(curve.knots[0].category == KnotCategory::Endpoint);
    CHECK(curve.knots[2].category == KnotCategory::Endpoint);
}

TEST_CASE("knot count formula at every stage") {
    std::mt19937_64 rng(55);
    const auto t = testutil::random_tree(8, rng);
    for (int s = 0; s <= 7; ++s) {
        const auto curve = pseudo_welding_curve(t, s);
        CHECK(curve.knots.size() == (std::size_t{2} << s) + 1);
        // endpoints never move
        CHECK(curve.knots.front().x == 0.0);
        CHECK(curve.knots.front().y == 0.0);
        CHECK(curve.knots.back().x == 1.0);
        CHECK(curve.knots.back().y == 0.0);
        // consecutive knots stay distinct
        for (std::size_t i = 0; i + 1 < curve.knots.size(); ++i) {
            const double dx = curve.knots[i + 1].x - curve.knots[i].x;
            const double dy = curve.knots[i + 1].y - curve.knots[i].y;
            CHECK(std::hypot(dx, dy) > 0.0);
        }
    }
}

TEST_CASE("negating coefficients mirrors the curve") {
    std::mt19937_64 rng(57);
    for (int rep = 0; rep < 10; ++rep) {
        const auto t = testutil::random_tree(6, rng);
        CoefficientTree neg = t;
        for (auto& [node, a] : neg.coeffs) a = -a;
        const auto c1 = pseudo_welding_curve(t, 5);
        const auto c2 = pseudo_welding_curve(neg, 5);
        REQUIRE(c1.knots.size() == c2.knots.size());
        for (std::size_t i = 0; i < c1.knots.size(); ++i) {
            CHECK(std::abs(c1.knots[i].x - c2.knots[i].x) <= 1e-12);
            CHECK(std::abs(c1.knots[i].y + c2.knots[i].y) <= 1e-12);
        }
    }
}

TEST_CASE("zero subtrees leave knots on the parent segment midpoints") {
    CoefficientTree t;
    t.depth = 4;
    t.total_mass = 1.0;
    t.coeffs[{0, 0}] = 0.8;  // only the root displaces
    const auto curve = pseudo_welding_curve(t, 3);
    // knots introduced at stages >= 1 sit at midpoints of their parents
    for (std::size_t i = 1; i + 1 < curve.knots.size(); i += 2) {
        const auto& k = curve.knots[i];
        if (k.node.scale == 0) continue;
        const auto& p = curve.knots[i - 1];
        const auto& q = curve.knots[i + 1];
        CHECK(std::abs(k.x - 0.5 * (p.x + q.x)) <= 1e-15);
        CHECK(std::abs(k.y - 0.5 * (p.y + q.y)) <= 1e-15);
    }
}

TEST_CASE("knot labels from two-class cells") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0.05, 0.1, 0.3, 0.6;
    const std::vector<std::string> labels{"a", "a", "b", "a"};
    const auto cells = labeled_points_to_measure(pts, labels, HypercubeSystem::unit_cube(1, 2));
    const auto cats = knot_labels(cells);

    CHECK(cats.at({2, 0}) == KnotCategory::OnlyA);   // 0.05, 0.1
    CHECK(cats.at({2, 1}) == KnotCategory::OnlyB);   // 0.3
    CHECK(cats.at({1, 0}) == KnotCategory::Mixed);   // both classes below
    CHECK(cats.at({1, 1}) == KnotCategory::OnlyA);   // 0.6
    CHECK(cats.count({2, 3}) == 0);                  // no points: empty by absence
    CHECK(cats.at({0, 0}) == KnotCategory::Mixed);
}

TEST_CASE("empty-cell knots carry zero coefficients") {
    Eigen::MatrixXd pts(2, 1);
    pts << 0.05, 0.9;
    const std::vector<std::string> labels{"a", "b"};
    const auto cells = labeled_points_to_measure(pts, labels, HypercubeSystem::unit_cube(1, 3));
    const auto cats = knot_labels(cells);
    const auto tree = coefficients_from_leaves(cells.measure());
    const auto curve = pseudo_welding_curve(tree, 2, &cats);
    int empties = 0;
    for (const auto& k : curve.knots) {
        if (k.category != KnotCategory::Empty) continue;
        ++empties;
        CHECK(tree.coeff(k.node) == 0.0);
    }
    CHECK(empties >= 2);  // (2,1) and (2,2) hold no points
}

TEST_CASE("day wheel") {
    CoefficientTree zero;
    zero.depth = 6;
    zero.total_mass = 1.0;
    auto wheel = day_wheel(zero, 5);
    std::size_t regions = 0;
    for (const auto& ring : wheel.sectors) {
        for (double v : ring) CHECK(v == 0.0);
        regions += ring.size();
    }
    CHECK(regions == 63);

    const auto d = dirac_coefficients(0.0, 6);
    wheel = day_wheel(d, 5);
    for (int s = 0; s <= 5; ++s) {
        const auto& ring = wheel.sectors[static_cast<std::size_t>(s)];
        CHECK(ring[0] == 1.0);
        for (std::size_t i = 1; i < ring.size(); ++i) CHECK(ring[i] == 0.0);
    }

    CoefficientTree wild;
    wild.depth = 1;
    wild.total_mass = 1.0;
    wild.coeffs[{0, 0}] = 1.7;  // clamped for display
    wheel = day_wheel(wild, 0);
    CHECK(wheel.sectors[0][0] == 1.0);

    CHECK_THROWS_AS(day_wheel(zero, 6), ShapeError);
}

TEST_CASE("svg rendering is deterministic") {
    std::mt19937_64 rng(61);
    const auto t = testutil::random_tree(5, rng);
    const auto curve = pseudo_welding_curve(t, 4);
    CHECK(render_svg(curve) == render_svg(curve));

    const auto wheel = day_wheel(t, 4);
    CHECK(render_svg(wheel) == render_svg(wheel));

    SvgOptions jet;
    jet.colormap = Colormap::Jet;
    CHECK(render_svg(wheel, jet) != render_svg(wheel));
}

TEST_CASE("svg contents") {
    CoefficientTree t;
    t.depth = 3;
    t.total_mass = 1.0;
    t.coeffs[{0, 0}] = 0.5;
    const auto wheel_svg = render_svg(day_wheel(t, 2));
    std::size_t sectors = 0;
    for (std::size_t pos = 0; (pos = wheel_svg.find("class=\"sector\"", pos)) != std::string::npos;
         ++sectors)
        ++pos;
    CHECK(sectors == 7);
    CHECK(wheel_svg.find("legend") != std::string::npos);
    CHECK(wheel_svg.find("</svg>") != std::string::npos);

    const auto curve_svg = render_svg(pseudo_welding_curve(t, 2));
    CHECK(curve_svg.find("polyline") != std::string::npos);
    std::size_t knots = 0;
    for (std::size_t pos = 0; (pos = curve_svg.find("class=\"knot\"", pos)) != std::string::npos;
         ++knots)
        ++pos;
    CHECK(knots == 9);  // 2^3 + 1
}

TEST_CASE("colormaps") {
    CHECK(colormap_color(Colormap::BlueWhiteRed, 0.0) == "#ffffff");
    CHECK(colormap_color(Colormap::BlueWhiteRed, 1.0) == "#ff0000");
    CHECK(colormap_color(Colormap::BlueWhiteRed, -1.0) == "#0000ff");
    CHECK(colormap_color(Colormap::BlueWhiteRed, 2.0) == "#ff0000");  // clamped
    CHECK(colormap_from_string("jet") == Colormap::Jet);
    CHECK_THROWS_AS(colormap_from_string("viridis"), ParseError);
}
