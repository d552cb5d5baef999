#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "rconley/boxset.hpp"
#include "rconley/error.hpp"

using namespace rconley;

TEST_CASE("grid locates points with half-open cells and a closed top face") {
  const auto g = make_grid({0.0, 0.0}, {1.0, 2.0}, {4, 8});
  CHECK(g->box_count() == 32);
  CHECK(g->outer() == 32);
  const double p0[] = {0.0, 0.0};
  CHECK(g->locate(p0) == 0);
  const double top[] = {1.0, 2.0};
  CHECK(g->locate(top) == g->flatten(std::vector<int>{3, 7}));
  const double edge[] = {0.25, 0.0};
  CHECK(g->unflatten(g->locate(edge))[0] == 1);
  const double out[] = {1.0000001, 0.5};
  CHECK(g->locate(out) == g->outer());
  const double nan[] = {std::nan(""), 0.5};
  CHECK(g->locate(nan) == g->outer());
}

TEST_CASE("grid geometry round trips") {
  const auto g = make_grid({-1.0, 2.0, 0.0}, {1.0, 3.0, 5.0}, {3, 2, 5});
  for (BoxIndex b = 0; b < g->box_count(); ++b) {
    CHECK(g->flatten(g->unflatten(b)) == b);
    const auto c = g->center(b);
    CHECK(g->locate(c) == b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g->box_lo(b, i) < g->box_hi(b, i));
  }
  const auto back = Grid::from_json(g->to_json());
  CHECK(*back == *g);
}

TEST_CASE("grid rejects degenerate specifications") {
  CHECK_THROWS_AS(make_grid({0.0}, {0.0}, {4}), InputError);
  CHECK_THROWS_AS(make_grid({0.0}, {1.0}, {0}), InputError);
  CHECK_THROWS_AS(make_grid({0.0, 0.0}, {1.0}, {4}), InputError);
}

TEST_CASE("box set algebra and the outer cell") {
  const auto g = make_grid({0.0}, {1.0}, {10});
  BoxSet a(g, std::vector<BoxIndex>{1, 2, 3});
  BoxSet b(g, std::vector<BoxIndex>{3, 4});
  CHECK((a | b).size() == 4);
  CHECK((a & b).indices() == std::vector<BoxIndex>{3});
  CHECK((a - b).indices() == std::vector<BoxIndex>{1, 2});
  auto c = a.complement();
  CHECK(c.contains_outer());
  CHECK(c.size() == 7);
  CHECK(c.complement() == a);
  CHECK(c.in_domain().contains_outer() == false);
  BoxSet e(g);
  CHECK(e.empty());
  e.insert(g->outer());
  CHECK_FALSE(e.empty());
  CHECK_FALSE(e.has_boxes());
}

TEST_CASE("box sets on different grids do not mix") {
  const auto g1 = make_grid({0.0}, {1.0}, {10});
  const auto g2 = make_grid({0.0}, {1.0}, {12});
  CHECK_THROWS_AS(BoxSet(g1) | BoxSet(g2), InputError);
}

TEST_CASE("interior never contains boundary boxes") {
  const auto g = make_grid({0.0, 0.0}, {1.0, 1.0}, {5, 5});
  const auto full = BoxSet::full(g);
  const auto in = interior(full);
  CHECK(in.size() == 9);
  in.for_each([&](BoxIndex b) { CHECK_FALSE(g->on_boundary(b)); });
}

TEST_CASE("dilation by zero is the identity and dilation composes") {
  const auto g = make_grid({0.0, 0.0}, {1.0, 1.0}, {9, 9});
  BoxSet s(g, std::vector<BoxIndex>{g->flatten(std::vector<int>{4, 4})});
  CHECK(dilate(s, 0) == s);
  CHECK(dilate(s, 1).size() == 9);
  CHECK(dilate(s, 2).size() == 25);
  CHECK(dilate(dilate(s, 1), 1) == dilate(s, 2));
  CHECK(dilate(s, 10).size() == 81);
}

TEST_CASE("boxes meeting a ball and a product") {
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const double c[] = {0.0, 0.0};
  const auto disk = boxes_meeting_ball(g, c, 1.0);
  const double lo[] = {-1.0, -1.0};
  const double hi[] = {1.0, 1.0};
  const auto square = boxes_meeting_product(g, lo, hi);
  CHECK(disk.subset_of(square));
  CHECK(square.size() == 34 * 34);
  disk.for_each([&](BoxIndex b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double x = std::clamp(0.0, g->box_lo(b, i), g->box_hi(b, i));
      d2 += x * x;
    }
    CHECK(d2 <= 1.0);
  });
}

TEST_CASE("hausdorff distances on box centers") {
  const auto g = make_grid({0.0}, {10.0}, {10});
  BoxSet a(g, std::vector<BoxIndex>{0});
  BoxSet b(g, std::vector<BoxIndex>{0, 5});
  CHECK(hausdorff_semidist(a, b) == doctest::Approx(0.0));
  CHECK(hausdorff_semidist(b, a) == doctest::Approx(5.0));
  CHECK(hausdorff_dist(a, b) == doctest::Approx(5.0));
  CHECK_THROWS_AS(hausdorff_semidist(a, BoxSet(g)), InputError);
}

TEST_CASE("box set serialization") {
  const auto g = make_grid({0.0, 0.0}, {2.0, 2.0}, {2, 2});
  BoxSet s(g, std::vector<BoxIndex>{g->flatten(std::vector<int>{1, 0})});
  s.insert(g->outer());
  const auto back = BoxSet::from_json(s.to_json());
  CHECK(back == s);
  const auto b = g->flatten(std::vector<int>{1, 0});
  CHECK(s.to_csv() == "box,lo0,hi0,lo1,hi1\n" + std::to_string(b) + "," + (g->box_lo(b, 0) == 1.0 ? "1,2,0,1\n" : "0,1,1,2\n"));
}

TEST_CASE("regularize drops boxes away from the interior") {
  const auto g = make_grid({0.0, 0.0}, {1.0, 1.0}, {10, 10});
  auto s = dilate(BoxSet(g, std::vector<BoxIndex>{g->flatten(std::vector<int>{4, 4})}), 1);
  s.insert(g->flatten(std::vector<int>{8, 8}));
  const auto r = regularize(s);
  CHECK_FALSE(r.contains(g->flatten(std::vector<int>{8, 8})));
  CHECK(r.size() == 9);
}
