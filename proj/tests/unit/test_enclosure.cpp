#include <doctest.h>

#include <random>

#include "rconley/enclosure.hpp"
#include "rconley/error.hpp"

using namespace rconley;

namespace {

FiberedEnclosure contraction(int T, int n = 24) {
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {n, n});
  return build_enclosure(MapFamily(RandomDiagonal{2, {}}), g, sample_path(NoiseModel::uniform(0.3, 0.7, 2), 7, T));
}

}  // namespace

TEST_CASE("fibered sets index fibers -T..T") {
  const auto g = make_grid({0.0}, {1.0}, {8});
  FiberedSet s(g, 3);
  CHECK(s.has_fiber(-3));
  CHECK(s.has_fiber(3));
  CHECK_FALSE(s.has_fiber(4));
  CHECK_THROWS_AS(s[4], InputError);
  s[1].insert(2);
  const auto c = FiberedSet::constant(BoxSet(g, std::vector<BoxIndex>{2}), 3);
  CHECK(s.subset_of(c));
  CHECK_FALSE(c.subset_of(s));
  CHECK(FiberedSet::from_json(c.to_json()) == c);
}

TEST_CASE("enclosure contains sampled images") {
  const auto e = contraction(4);
  const auto& g = *e.grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 400; ++k) {
    const int t = static_cast<int>(rng() % 8) - 4;
    const auto b = static_cast<BoxIndex>(rng() % g.box_count());
    std::vector<double> x(2);
    for (std::size_t i = 0; i < 2; ++i) x[i] = g.box_lo(b, i) + u(rng) * (g.box_hi(b, i) - g.box_lo(b, i));
    const auto y = e.family()(x, e.path().value(t));
    const auto img = e.forward(t, b);
    const auto target = g.locate(y);
    CHECK(std::binary_search(img.begin(), img.end(), target));
  }
}

TEST_CASE("outer cell is absorbing") {
  const auto e = contraction(3);
  const auto out = e.forward(0, e.grid()->outer());
  REQUIRE(out.size() == 1);
  CHECK(out[0] == e.grid()->outer());
}

TEST_CASE("expanding maps send the rim outside") {
  const auto g = make_grid({-1.0}, {1.0}, {8});
  const auto e = build_enclosure(MapFamily(RandomDiagonal{1, {}}), g, sample_path(NoiseModel::constant({2.0}), 0, 2));
  const auto rim = e.forward(0, 7);
  CHECK(std::binary_search(rim.begin(), rim.end(), g->outer()));
}

TEST_CASE("image and preimage are adjoint") {
  const auto e = contraction(3, 12);
  const auto& g = e.grid();
  for (BoxIndex b = 0; b < g->box_count(); b += 5) {
    for (BoxIndex c : e.forward(1, b)) {
      if (c == g->outer()) continue;
      CHECK(e.preimage(1, BoxSet(g, std::vector<BoxIndex>{c})).contains(b));
    }
  }
}

TEST_CASE("iterating images follows the fibers") {
  const auto e = contraction(4, 16);
  const auto g = e.grid();
  const auto n = FiberedSet::constant(BoxSet::full(g), 4);
  const auto one = iterate_image(e, n, -2, 1);
  CHECK(one == e.image(-2, n[-2]));
  const auto two = iterate_image(e, n, -2, 2);
  CHECK(two == e.image(-1, one));
  CHECK(iterate_image(e, n[0], 0, 0) == n[0]);
}

TEST_CASE("Lipschitz padding is coarser than interval enclosure") {
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {16, 16});
  const auto path = sample_path(NoiseModel::uniform(0.3, 0.7, 2), 1, 2);
  const MapFamily f(RandomDiagonal{2, {}});
  const auto a = build_enclosure(f, g, path);
  const auto b = build_enclosure(f.with_lipschitz(0.7).with_mode(EnclosureMode::lipschitz), g, path);
  CHECK(a.edge_count() <= b.edge_count());
  for (BoxIndex box = 0; box < g->box_count(); ++box) {
    const auto fa = a.forward(0, box);
    const auto fb = b.forward(0, box);
    CHECK(std::includes(fb.begin(), fb.end(), fa.begin(), fa.end()));
  }
}
