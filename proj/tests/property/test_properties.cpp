#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "rconley/error.hpp"
#include "rconley/harness.hpp"
#include "rconley/shiftequiv.hpp"

using namespace rconley;

namespace {

constexpr int kCases = 500;

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// Random affine map of the square with one noise coordinate entering the diagonal.
MapFamily random_affine(std::mt19937_64& rng) {
  AffineMap a;
  a.dims = 2;
  a.matrix = {uniform(rng, -1.3, 1.3), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -1.3, 1.3)};
  a.matrix_noise = {{1.0, 0.0, 0.0, 1.0}};
  a.offset = {uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)};
  return MapFamily(a);
}

MapFamily random_system(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return random_affine(rng);
    case 1:
      return make_builtin("random-lorenz-euler", {{"h", 0.05}, {"sigma", 0.9}, {"rho", 0.5}, {"beta", 0.9}});
    case 2: {
      PolynomialMap p;
      p.dims = 2;
      p.noise_dims = 1;
      p.components = {{{{1, 0}, uniform(rng, 0.3, 1.2), {1.0}}, {{0, 2}, uniform(rng, -0.5, 0.5), {}}},
                      {{{0, 1}, uniform(rng, 0.3, 1.2), {}}, {{1, 1}, uniform(rng, -0.5, 0.5), {}}}};
      return MapFamily(p);
    }
    default:
      return MapFamily(RandomDiagonal{2, {}});
  }
}

NoiseModel noise_for(const MapFamily& f, std::mt19937_64& rng) {
  if (f.name() == "random-diagonal") {
    const double a = uniform(rng, 0.2, 1.6);
    return NoiseModel::uniform(a, a + 0.4, 2);
  }
  if (f.name() == "random-lorenz-euler") return NoiseModel::uniform(-0.05, 0.05, 3);
  return NoiseModel::uniform(-0.1, 0.1, 1);
}

struct Case {
  FiberedEnclosure e;
  FiberedSet n;
};

Case random_case(std::mt19937_64& rng, int T, int boxes) {
  auto f = random_system(rng);
  const auto d = f.dims();
  std::vector<double> lo(d, -1.0), hi(d, 1.0);
  std::vector<int> sub(d, d == 3 ? 6 : boxes);
  const auto g = make_grid(lo, hi, sub);
  const auto model = noise_for(f, rng);
  auto e = build_enclosure(f, g, sample_path(model, rng(), T));
  std::vector<double> c(d);
  for (auto& x : c) x = uniform(rng, -0.3, 0.3);
  const auto n = FiberedSet::constant(boxes_meeting_ball(g, c, uniform(rng, 0.3, 0.9)), T);
  return {std::move(e), n};
}

FiberedSet random_fibered(const GridPtr& g, int T, std::mt19937_64& rng, double density) {
  FiberedSet s(g, T);
  for (int t = -T; t <= T; ++t) s[t] = oracle::random_set(g, rng, density);
  return s;
}

}  // namespace

TEST_CASE("property: enclosure soundness under sampling") {
  std::mt19937_64 rng(101);
  int violations = 0;
  int samples = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto c = random_case(rng, 3, 10);
    const auto& g = *c.e.grid();
    for (int j = 0; j < 4; ++j) {
      const int t = static_cast<int>(rng() % 6) - 3;
      const auto b = static_cast<BoxIndex>(rng() % g.box_count());
      std::vector<double> x(g.dims());
      for (std::size_t i = 0; i < g.dims(); ++i) x[i] = uniform(rng, g.box_lo(b, i), g.box_hi(b, i));
      const auto y = c.e.family()(x, c.e.path().value(t));
      const auto img = c.e.forward(t, b);
      const auto loc = g.locate(y);
      violations += !std::binary_search(img.begin(), img.end(), loc);
      ++samples;
    }
  }
  MESSAGE("enclosure samples: " << samples);
  CHECK(violations == 0);
}

TEST_CASE("property: exit set dual formulas agree") {
  std::mt19937_64 rng(102);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto c = random_case(rng, 2, 10);
    const auto n = rng() % 2 ? c.n : random_fibered(c.e.grid(), 2, rng, 0.6);
    const int t = static_cast<int>(rng() % 4) - 2;
    try {
      const auto ex = exit_set(c.e, n, t);
      const auto inner = interior(n[t + 1]);
      BoxSet oracle_set(c.e.grid());
      n[t].for_each([&](BoxIndex b) {
        for (BoxIndex j : c.e.forward(t, b)) {
          if (!inner.contains(j)) {
            oracle_set.insert(b);
            break;
          }
        }
      });
      violations += !(ex == oracle_set);
    } catch (const ConstructionError&) {
      ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("property: invariant set lies in the truncated omega limit") {
  std::mt19937_64 rng(103);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const int T = 4;
    const auto c = random_case(rng, T, 10);
    const auto inv = invariant_set(c.e, c.n);
    for (int n0 = 0; n0 <= T / 2; ++n0) violations += !inv.inv[0].subset_of(omega_limit(c.e, c.n, n0));
  }
  CHECK(violations == 0);
}

TEST_CASE("property: invariant sets are sub-additive") {
  std::mt19937_64 rng(104);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const int T = 3;
    const auto c = random_case(rng, T, 10);
    const auto d1 = random_fibered(c.e.grid(), T, rng, 0.5) & c.n;
    const auto d2 = random_fibered(c.e.grid(), T, rng, 0.5) | c.n;
    const auto a = invariant_set(c.e, d1).inv;
    const auto b = invariant_set(c.e, d2).inv;
    const auto u = invariant_set(c.e, d1 | d2).inv;
    violations += !(a | b).subset_of(u);
  }
  CHECK(violations == 0);
}

TEST_CASE("property: an isolating block is an isolating neighborhood") {
  std::mt19937_64 rng(105);
  int violations = 0;
  int blocks = 0;
  for (int k = 0; k < kCases; ++k) {
    const int T = 4;
    const auto c = random_case(rng, T, 12);
    const auto block = is_isolating_block(c.e, c.n);
    const auto nbhd = is_isolating_neighborhood(c.e, c.n);
    for (int t = -T; t <= T; ++t) {
      if (block.at(t) != Check::pass) continue;
      ++blocks;
      violations += nbhd.at(t) != Check::pass;
    }
  }
  MESSAGE("fibers with a block: " << blocks);
  CHECK(blocks > 0);
  CHECK(violations == 0);
}

TEST_CASE("property: truncated invariant sets shrink as the window grows") {
  std::mt19937_64 rng(106);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    auto f = random_system(rng);
    const auto model = noise_for(f, rng);
    const auto d = f.dims();
    const auto g = make_grid(std::vector<double>(d, -1.0), std::vector<double>(d, 1.0),
                             std::vector<int>(d, d == 3 ? 6 : 10));
    const auto seed = rng();
    std::vector<double> c(d, 0.0);
    const auto region = boxes_meeting_ball(g, c, uniform(rng, 0.3, 0.9));
    BoxSet prev;
    for (int T = 1; T <= 4; ++T) {
      const auto e = build_enclosure(f, g, sample_path(model, seed, T));
      const auto inv = invariant_set(e, FiberedSet::constant(region, T)).inv[0];
      if (prev.grid()) violations += !inv.subset_of(prev);
      prev = inv;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("property: interior is dual to dilation of the complement") {
  std::mt19937_64 rng(107);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto g = make_grid({0.0, 0.0}, {1.0, 1.0}, {static_cast<int>(4 + rng() % 8), static_cast<int>(4 + rng() % 8)});
    const auto b = oracle::random_set(g, rng, uniform(rng, 0.3, 0.95));
    const auto in = interior(b);
    BoxSet boundary(g);
    for (BoxIndex i = 0; i < g->box_count(); ++i) {
      if (g->on_boundary(i)) boundary.insert(i);
    }
    const auto dual = BoxSet::full(g) - dilate(b.complement().in_domain(), 1) - boundary;
    violations += !(in == dual);
    violations += !(oracle::as_set(in) == oracle::interior(g, oracle::as_set(b)));
    const int layers = static_cast<int>(rng() % 3);
    violations += !(oracle::as_set(dilate(b, layers)) == oracle::dilate(g, oracle::as_set(b), layers));
    violations += !(dilate(dilate(b, 1), 1) == dilate(b, 2));
    violations += !in.subset_of(b);
  }
  CHECK(violations == 0);
}

TEST_CASE("property: box set algebra agrees with an ordered-set oracle") {
  std::mt19937_64 rng(108);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto g = make_grid({0.0}, {1.0}, {static_cast<int>(2 + rng() % 200)});
    const auto a = oracle::random_set(g, rng, uniform(rng, 0.0, 1.0));
    const auto b = oracle::random_set(g, rng, uniform(rng, 0.0, 1.0));
    const auto c = oracle::random_set(g, rng, uniform(rng, 0.0, 1.0));
    const auto sa = oracle::as_set(a), sb = oracle::as_set(b);
    std::set<BoxIndex> u, i, d;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(u, u.end()));
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(i, i.end()));
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(d, d.end()));
    violations += oracle::as_set(a | b) != u;
    violations += oracle::as_set(a & b) != i;
    violations += oracle::as_set(a - b) != d;
    violations += (a.size() != sa.size());
    violations += !((a | (b & c)) == ((a | b) & (a | c)));
    violations += !((a & (b | c)) == ((a & b) | (a & c)));
    violations += !((a | b).complement() == (a.complement() & b.complement()));
    violations += !(a.complement().complement() == a);
    violations += !((a - b) == (a & b.complement()));
    violations += a.subset_of(b) != std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
    violations += a.intersects(b) != !i.empty();
  }
  CHECK(violations == 0);
}

TEST_CASE("property: Hausdorff semidistance obeys the triangle inequality") {
  std::mt19937_64 rng(109);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto g = make_grid({0.0, 0.0}, {1.0, 1.0}, {8, 8});
    BoxSet a, b, c;
    do {
      a = oracle::random_set(g, rng, 0.2);
      b = oracle::random_set(g, rng, 0.2);
      c = oracle::random_set(g, rng, 0.2);
    } while (!a.has_boxes() || !b.has_boxes() || !c.has_boxes());
    violations += hausdorff_semidist(a, b) > hausdorff_semidist(a, c) + hausdorff_semidist(c, b) + 1e-12;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: images are monotone, adjoint to preimages and follow the cocycle") {
  std::mt19937_64 rng(110);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    const int T = 4;
    auto f = random_affine(rng);
    const auto g = make_grid({-1.0, -1.0}, {1.0, 1.0}, {10, 10});
    const auto path = sample_path(NoiseModel::uniform(-0.1, 0.1, 1), rng(), T);
    const auto e = build_enclosure(f, g, path);
    const auto small = oracle::random_set(g, rng, 0.2);
    const auto big = small | oracle::random_set(g, rng, 0.2);
    const int t0 = static_cast<int>(rng() % 3) - 2;
    const int steps = 1 + static_cast<int>(rng() % 2);
    violations += !iterate_image(e, small, t0, steps).subset_of(iterate_image(e, big, t0, steps));
    const auto b = static_cast<BoxIndex>(rng() % g->box_count());
    for (BoxIndex j : e.forward(t0, b)) {
      if (j == g->outer()) continue;
      violations += !e.preimage(t0, BoxSet(g, std::vector<BoxIndex>{j})).contains(b);
    }
    const int s = t0 + T;
    const auto shifted = build_enclosure(f, g, shift(path, t0));
    violations += !(iterate_image(e, small, t0, steps) == iterate_image(shifted, small, 0, steps));
    (void)s;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: ensemble reports are deterministic") {
  std::mt19937_64 rng(111);
  int violations = 0;
  for (int k = 0; k < kCases; ++k) {
    SweepConfig cfg;
    const double a = uniform(rng, 0.2, 2.0);
    cfg.system = MapFamily(RandomDiagonal{2, {a, a}});
    cfg.noise = NoiseModel::uniform(a, a + 0.3, 2);
    cfg.grid = make_grid({-1.0, -1.0}, {1.0, 1.0}, {8, 8});
    cfg.half_window = 3;
    cfg.lambdas = {0.0, 1.0};
    cfg.seeds = {rng() % 1000, rng() % 1000 + 1000};
    cfg.n = Region::ball({0.0, 0.0}, uniform(rng, 0.4, 0.9));
    cfg.checks = {"isolating", "pair", "certificate"};
    violations += continuation_sweep(cfg).to_json().dump() != continuation_sweep(cfg).to_json().dump();
  }
  CHECK(violations == 0);
}
