#include <doctest.h>

#include <algorithm>
#include <set>

#include "cfm/grid.hpp"
#include "cfm/problems.hpp"
#include "oracles.hpp"

using namespace cfm;

namespace {

// Independent enumeration of the affected set: every node whose 5-point
// stencil along any axis touches both sides.
std::set<int> brute_force_affected(const Grid& grid, const Interface& curve) {
    std::set<int> out;
    std::vector<int> side(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) {
        int s = curve.side(grid.node_pos(i));
        side[i] = s == 0 ? -1 : s;
    }
    for (int idx = 0; idx < grid.node_count(); ++idx) {
        const int i = grid.ix(idx), j = grid.iy(idx);
        for (int axis = 0; axis < grid.dim; ++axis) {
            for (int o : {-2, -1, 1, 2}) {
                int tap = axis == 0 ? grid.index(i + o, j) : grid.index(i, j + o);
                if (side[tap] != side[idx]) out.insert(idx);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("periodic index wrap") {
    Grid g(1, 0.0, 1.0, 100);
    CHECK(g.wrap(100) == 0);
    CHECK(g.wrap(-2) == 98);
    CHECK(g.wrap(50) == 50);
    CHECK(g.dx == doctest::Approx(0.01));
}

TEST_CASE("grid constructor rejects bad configurations") {
    CHECK_THROWS(Grid(3, 0.0, 1.0, 10));
    CHECK_THROWS(Grid(1, 0.0, 1.0, 4));
    CHECK_THROWS(Grid(2, 1.0, 0.0, 32));
}

TEST_CASE("1D classification with a single interface point") {
    Grid g(1, 0.0, 1.0, 10);
    PointSet1D curve({0.3});
    SideMap map = classify_nodes(g, curve);
    CHECK(map.side[3] == -1);  // on-curve node folds into the minus side
    CHECK(map.side[2] == -1);
    CHECK(map.side[4] == +1);
}

TEST_CASE("circle classification signs") {
    Grid g(2, 0.0, 1.0, 20);
    Circle curve({0.5, 0.5}, 0.25);
    SideMap map = classify_nodes(g, curve);
    CHECK(map.side[g.index(10, 10)] == -1);  // center
    CHECK(map.side[g.index(0, 0)] == +1);
}

TEST_CASE("1D affected set matches brute force (on-curve node on the minus side)") {
    Grid g(1, 0.0, 1.0, 100);
    PointSet1D curve({0.3});
    SideMap map = classify_nodes(g, curve);
    std::set<int> got;
    for (const auto& an : map.affected) got.insert(an.node);
    CHECK(got == brute_force_affected(g, curve));
    // With x = 0.30 classified into the minus side, the straddle set near the
    // interface is {0.29, 0.30, 0.31, 0.32}; 0.28 sees only same-side taps.
    for (int n : {29, 30, 31, 32}) CHECK(got.count(n) == 1);
    CHECK(got.count(28) == 0);
    // A lone interface point cannot be two-colored consistently on a periodic
    // line, so the wrap seam is also a sign change; the real 1D problem uses
    // two points and has no such artifact.
    CHECK(got.count(99) == 1);
}

TEST_CASE("1D affected set for the two-interface problem") {
    Grid g(1, 0.0, 1.0, 100);
    PointSet1D curve({0.3, 0.7});
    SideMap map = classify_nodes(g, curve);
    std::set<int> got;
    for (const auto& an : map.affected) got.insert(an.node);
    CHECK(got == std::set<int>{29, 30, 31, 32, 68, 69, 70, 71});
    CHECK(got == brute_force_affected(g, curve));
}

TEST_CASE("affected sets equal brute-force enumeration on small grids") {
    auto problems = {problem_circle(), problem_star(), problem_osculating()};
    for (const auto& prob : problems) {
        Grid g(2, prob.lower, prob.upper, 48);
        SideMap map = classify_nodes(g, *prob.curve);
        std::set<int> got;
        for (const auto& an : map.affected) got.insert(an.node);
        CHECK(got == brute_force_affected(g, *prob.curve));
    }
    Grid g1(1, 0.0, 1.0, 64);
    PointSet1D pts({0.3, 0.7});
    SideMap m1 = classify_nodes(g1, pts);
    std::set<int> got1;
    for (const auto& an : m1.affected) got1.insert(an.node);
    CHECK(got1 == brute_force_affected(g1, pts));
}

TEST_CASE("classification is pure: repeated runs agree") {
    Grid g(2, 0.0, 1.0, 32);
    Circle curve({0.5, 0.5}, 0.25);
    SideMap a = classify_nodes(g, curve);
    SideMap b = classify_nodes(g, curve);
    CHECK(a.side == b.side);
    REQUIRE(a.affected.size() == b.affected.size());
    for (std::size_t k = 0; k < a.affected.size(); ++k) {
        CHECK(a.affected[k].node == b.affected[k].node);
        CHECK(a.affected[k].taps.size() == b.affected[k].taps.size());
    }
}

TEST_CASE("tap positions unwrap around the owner") {
    Grid g(1, 0.0, 1.0, 100);
    PointSet1D curve({0.3});
    SideMap map = classify_nodes(g, curve);
    for (const auto& an : map.affected) {
        Vec2 p = g.node_pos(an.node);
        for (const auto& tap : an.taps) {
            CHECK(std::abs(tap.pos.x - p.x) <= 2.0 * g.dx + 1e-12);
            // stencil coefficients: 16/(12 dx^2) at distance 1, -1/(12 dx^2) at 2
            double dist = std::abs(tap.pos.x - p.x);
            double expect = std::abs(dist - g.dx) < 1e-9 ? 16.0 : -1.0;
            CHECK(tap.coef * 12.0 * g.dx * g.dx == doctest::Approx(expect));
        }
    }
}
