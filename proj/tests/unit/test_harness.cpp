#include <doctest.h>

#include "rconley/error.hpp"
#include "rconley/harness.hpp"

using namespace rconley;

namespace {

SweepConfig contraction_sweep() {
  SweepConfig c;
  c.system = MapFamily(RandomDiagonal{2, {0.5, 0.5}});
  c.noise = NoiseModel::uniform(0.3, 0.7, 2);
  c.grid = make_grid({-1.5, -1.5}, {1.5, 1.5}, {24, 24});
  c.half_window = 8;
  c.lambdas = {0.0, 0.5, 1.0};
  c.seeds = {0, 1, 2};
  c.n = Region::ball({0.0, 0.0}, 1.0);
  c.checks = {"isolating", "block", "pair", "certificate"};
  c.target = InvTarget{{0.0, 0.0}, 3};
  return c;
}

}  // namespace

TEST_CASE("regions select boxes and round trip") {
  const auto g = make_grid({-1.0, -1.0}, {1.0, 1.0}, {8, 8});
  const auto ball = Region::ball({0.0, 0.0}, 0.5);
  CHECK(Region::from_json(ball.to_json()).boxes(g) == ball.boxes(g));
  const auto prod = Region::from_json({{"product", {{"lo", {-0.5, -0.5}}, {"hi", {0.5, 0.5}}}}});
  CHECK(prod.boxes(g).size() == 36);
  const auto g1 = make_grid({0.0}, {1.0}, {10});
  const auto iv = Region::from_json({{"interval", {0.2, 0.4}}});
  CHECK(iv.boxes(g1).size() == 4);
  CHECK_THROWS_AS(Region::ball({0.0}, 1.0).boxes(g), InputError);
  CHECK_THROWS(Region::from_json({{"sphere", 1}}));
}

TEST_CASE("continuation sweep over a contraction") {
  const auto rep = continuation_sweep(contraction_sweep());
  CHECK(rep.cells.size() == 9);
  CHECK(rep.continuation_ok);
  CHECK(rep.all_pass());
  CHECK(rep.pass_fraction("isolating") == 1.0);
  CHECK(rep.pass_fraction("target") == 1.0);
  REQUIRE_FALSE(rep.conclusions.empty());
  CHECK(rep.conclusions.front().find("continuation property") != std::string::npos);
  CHECK(rep.anomalies.empty());
  for (std::size_t i = 1; i < rep.cells.size(); ++i) {
    const auto& a = rep.cells[i - 1];
    const auto& b = rep.cells[i];
    CHECK((a.lambda < b.lambda || (a.lambda == b.lambda && a.seed < b.seed)));
  }
}

TEST_CASE("continuation conclusion is withheld when one cell fails") {
  auto cfg = contraction_sweep();
  cfg.system = MapFamily(RandomDiagonal{2, {1.0, 1.0}});
  cfg.checks = {"isolating"};
  const auto rep = continuation_sweep(cfg);
  CHECK_FALSE(rep.continuation_ok);
  CHECK_FALSE(rep.hypothesis_failures.empty());
  for (const auto& c : rep.conclusions) CHECK(c.find("continuation property") == std::string::npos);
}

TEST_CASE("sweep reports are reproducible byte for byte") {
  const auto cfg = contraction_sweep();
  CHECK(continuation_sweep(cfg).to_json().dump() == continuation_sweep(cfg).to_json().dump());
  CHECK(SweepConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());
}

TEST_CASE("sweep configuration validation") {
  auto cfg = contraction_sweep();
  cfg.lambdas = {1.5};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = contraction_sweep();
  cfg.checks = {"nonsense"};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = contraction_sweep();
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("Wazewski reporting needs a nontrivial index") {
  auto cfg = contraction_sweep();
  cfg.asserted_nontrivial = true;
  const auto rep = continuation_sweep(cfg);
  REQUIRE(rep.wazewski);
  CHECK(rep.wazewski->conclusion);
  CHECK(rep.wazewski->nonempty_fraction == 1.0);
  CHECK_FALSE(rep.wazewski->ergodicity.empty());
}

TEST_CASE("time-h check on a contracting linear field") {
  auto cfg = contraction_sweep();
  cfg.noise = NoiseModel::uniform(-0.1, 0.1, 1);
  cfg.lambdas = {0.0, 1.0};
  cfg.checks = {"isolating"};
  const OdeField field = LinearField{2, {-1.0, 0.0, 0.0, -1.0}, {{1.0, 0.0, 0.0, 1.0}}};
  const double hs[] = {0.5, 1.0};
  const auto rep = time_h_check(field, hs, Integrator::rk4, 4, cfg);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.inference);
  CHECK(rep.caveats.size() == 2);
  for (const auto& e : rep.entries) CHECK(e.rejections.empty());
}

TEST_CASE("perturbation sweep reports a passing prefix and a cutoff") {
  const int T = 8;
  const auto range = reliable_range(T);
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const auto e = build_enclosure(MapFamily(RandomDiagonal{2, {}}), g, sample_path(NoiseModel::uniform(0.3, 0.7, 2), 0, T));
  const auto p = build_filtration_pair(e, FiberedSet::constant(Region::ball({0.0, 0.0}, 1.0).boxes(g), T), 2, range);
  const double deltas[] = {0.2, 0.005, 10.0, 0.0};
  const auto rep = perturbation_sweep(e, deltas, p, range);
  REQUIRE(rep.entries.size() == 4);
  CHECK(rep.entries.front().delta == 0.0);
  CHECK(rep.entries.front().reported_pass);
  CHECK(rep.radius.has_value());
  REQUIRE(rep.cutoff.has_value());
  CHECK(*rep.cutoff <= 10.0);
  CHECK_FALSE(rep.entries.back().reported_pass);
  bool failed = false;
  for (const auto& en : rep.entries) {
    if (failed) CHECK_FALSE(en.reported_pass);
    failed = failed || !en.holds;
  }
}
