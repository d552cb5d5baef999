// One pass/fail line per acceptance criterion. Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "rconley/error.hpp"
#include "rconley/harness.hpp"
#include "rconley/parallel.hpp"
#include "rconley/shiftequiv.hpp"

using namespace rconley;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Runtime ceilings in seconds; zero means none was stated.
struct Criterion {
  std::string id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
};

BoxSet around(const GridPtr& g, std::vector<double> p, int layers) {
  return dilate(BoxSet(g, std::vector<BoxIndex>{g->locate(p)}), layers);
}

FiberedSet ball(const GridPtr& g, std::vector<double> c, double r, int T) {
  return FiberedSet::constant(boxes_meeting_ball(g, c, r), T);
}

std::string fraction(int ok, int total) { return std::to_string(ok) + "/" + std::to_string(total); }

Outcome contraction_example() {
  const int T = 16;
  const auto range = reliable_range(T);
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const auto n = ball(g, {0.0, 0.0}, 1.0, T);
  const auto target = around(g, {0.0, 0.0}, 3);
  const int seeds = 20;
  std::vector<int> exit_ok(seeds), block_ok(seeds), inv_ok(seeds), pair_ok(seeds), cert_ok(seeds);
  parallel_for(seeds, [&](std::size_t s) {
    const auto e = build_enclosure(MapFamily(RandomDiagonal{2, {}}), g,
                                   sample_path(NoiseModel::uniform(0.3, 0.7, 2), s, T));
    const auto ex = exit_sets(e, n);
    bool empty = true;
    for (int t = -T; t < T; ++t) empty = empty && ex[t].empty();
    exit_ok[s] = empty;
    block_ok[s] = is_isolating_block(e, n).all_pass(range);
    inv_ok[s] = invariant_set(e, n).inv[0].subset_of(target);
    try {
      const auto p = build_filtration_pair(e, n, 2, range);
      pair_ok[s] = p.l.all_empty() && p.axioms.valid_on(range);
      cert_ok[s] = index_certificate(pointed_map(e, p), range).verdict == IndexVerdict::nonempty_invariant_evidence;
    } catch (const ConstructionError&) {
    }
  });
  auto count = [](const std::vector<int>& v) { return static_cast<int>(std::count(v.begin(), v.end(), 1)); };
  Outcome o;
  o.pass = count(exit_ok) == seeds && count(block_ok) == seeds && count(inv_ok) == seeds && count(pair_ok) == seeds &&
           count(cert_ok) == seeds;
  o.detail = "exit empty " + fraction(count(exit_ok), seeds) + ", block " + fraction(count(block_ok), seeds) +
             ", Inv in 3-layer target " + fraction(count(inv_ok), seeds) + ", pair (N,0) " +
             fraction(count(pair_ok), seeds) + ", nonempty-invariant-evidence " + fraction(count(cert_ok), seeds);
  return o;
}

Outcome expansion_example() {
  const int T = 16;
  const auto range = reliable_range(T);
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const auto n = ball(g, {0.0, 0.0}, 1.0, T);
  const auto target = around(g, {0.0, 0.0}, 3);
  const int seeds = 20;
  std::vector<int> exit_ok(seeds), pair_ok(seeds), inv_ok(seeds), cert_ok(seeds);
  parallel_for(seeds, [&](std::size_t s) {
    const auto e = build_enclosure(MapFamily(RandomDiagonal{2, {}}), g,
                                   sample_path(NoiseModel::uniform(1.5, 2.5, 2), s, T));
    const auto ex = exit_sets(e, n);
    bool all = true;
    for (int t = -T; t < T; ++t) all = all && ex[t].has_boxes();
    exit_ok[s] = all;
    try {
      const auto p = build_filtration_pair(e, n, 2, range);
      pair_ok[s] = p.axioms.valid_on(range) && (p.dilation == 1 || p.dilation == 2);
      inv_ok[s] = invariant_set(e, p.n - p.l).inv[0].subset_of(target);
      cert_ok[s] = index_certificate(pointed_map(e, p), range).verdict != IndexVerdict::trivial_certified;
    } catch (const ConstructionError&) {
    }
  });
  auto count = [](const std::vector<int>& v) { return static_cast<int>(std::count(v.begin(), v.end(), 1)); };
  Outcome o;
  o.pass = count(exit_ok) == seeds && count(pair_ok) == seeds && count(inv_ok) == seeds && count(cert_ok) == seeds;
  o.detail = "exit nonempty " + fraction(count(exit_ok), seeds) + ", pair with k in {1,2} " +
             fraction(count(pair_ok), seeds) + ", Inv(N\\L) in 3-layer target " + fraction(count(inv_ok), seeds) +
             ", no triviality certificate " + fraction(count(cert_ok), seeds);
  return o;
}

Outcome logistic_example() {
  SweepConfig base;
  base.system = make_builtin("random-logistic", {{"h", 0.1}, {"r", 0.8}, {"K", 1.0}});
  base.noise = NoiseModel::uniform(-0.4, 0.4, 1);
  base.grid = make_grid({-0.2}, {2.0}, {256});
  base.half_window = 16;
  base.lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
  base.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  base.checks = {"isolating"};

  auto wide = base;
  wide.n = Region::product({0.0}, {1.5});
  auto around_k = base;
  around_k.n = Region::product({0.7}, {1.3});
  around_k.target = InvTarget{{1.0}, 2};
  auto around_0 = base;
  around_0.n = Region::product({0.0}, {0.4});
  around_0.target = InvTarget{{0.0}, 2};

  const auto a = continuation_sweep(wide);
  const auto b = continuation_sweep(around_k);
  const auto c = continuation_sweep(around_0);
  const bool a_ok = a.continuation_ok && !a.conclusions.empty();
  const bool b_ok = b.continuation_ok && b.pass_fraction("target") == 1.0;
  const bool c_ok = c.continuation_ok && c.pass_fraction("target") == 1.0;
  std::ostringstream os;
  os << "(a) [0,1.5] isolating " << a.pass_fraction("isolating") << (a_ok ? " with" : " without")
     << " conclusion; (b) [0.7,1.3] isolating " << b.pass_fraction("isolating") << ", Inv near K "
     << b.pass_fraction("target") << "; (c) [0,0.4] isolating " << c.pass_fraction("isolating") << ", Inv near 0 "
     << c.pass_fraction("target");
  return {a_ok && b_ok && c_ok, os.str()};
}

Outcome lorenz_example() {
  auto run = [](bool reduced) {
    SweepConfig cfg;
    cfg.system = make_builtin("random-lorenz-euler",
                              {{"h", 0.05}, {"sigma", 0.9}, {"rho", 0.5}, {"beta", 0.9}, {"reduced_y0", reduced}});
    const std::size_t d = reduced ? 2 : 3;
    cfg.noise = NoiseModel::uniform(-0.05, 0.05, 3);
    cfg.grid = make_grid(std::vector<double>(d, -1.0), std::vector<double>(d, 1.0), std::vector<int>(d, 16));
    cfg.half_window = 10;
    cfg.lambdas = {0.0, 0.5, 1.0};
    cfg.seeds = {0, 1, 2, 3, 4};
    cfg.n = Region::ball(std::vector<double>(d, 0.0), 0.8);
    cfg.target = InvTarget{std::vector<double>(d, 0.0), 3};
    cfg.checks = {"isolating"};
    return continuation_sweep(cfg);
  };
  const auto full = run(false);
  const auto planar = run(true);
  auto ok = [](const EnsembleReport& r) {
    return r.continuation_ok && r.pass_fraction("target") == 1.0 && !r.conclusions.empty();
  };
  std::ostringstream os;
  os << "3D: isolating " << full.pass_fraction("isolating") << ", Inv in target " << full.pass_fraction("target")
     << ", Inv(0) boxes " << full.cells.front().inv_boxes << "; y=0 plane: isolating "
     << planar.pass_fraction("isolating") << ", Inv in target " << planar.pass_fraction("target");
  return {ok(full) && ok(planar), os.str()};
}

Outcome shift_equivalence_suite() {
  const int T = 16;
  const auto range = reliable_range(T);
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const auto n1 = ball(g, {0.0, 0.0}, 1.0, T);
  const auto n2 = ball(g, {0.0, 0.0}, 1.1, T);
  const int seeds = 5;
  int verified = 0;
  int mutation_ok = 0;
  std::string first_error;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto e = build_enclosure(MapFamily(RandomDiagonal{2, {}}), g,
                                   sample_path(NoiseModel::uniform(1.5, 2.5, 2), s, T));
    std::optional<EquivalenceWitness> w;
    std::string error;
    try {
      const auto p = build_filtration_pair(e, n1, 1, range);
      const auto q = build_filtration_pair(e, n2, 2, range);
      for (int eps : {1, 2, 4, 8}) {
        try {
          w = equivalence_via_common_block(e, p, q, eps, range);
          if (w->report.verified()) break;
        } catch (const ConstructionError& ex) {
          error = ex.what();
        }
      }
    } catch (const ConstructionError& ex) {
      error = ex.what();
    }
    if (!w) {
      if (first_error.empty()) first_error = "seed " + std::to_string(s) + ": " + error;
      continue;
    }
    if (w->report.count(Verdict::failed) == 0 && w->report.verified()) ++verified;
    else if (first_error.empty()) {
      first_error = "seed " + std::to_string(s) + ": " + std::to_string(w->report.count(Verdict::failed)) +
                    " failed fibers";
    }
    // Every single-edge deletion of r on the checked fibers must be caught.
    bool caught = true;
    for (int t = range.lo; t <= range.hi && caught; ++t) {
      if (!w->r.defined(t)) continue;
      for (BoxIndex x : w->r.sources(t)) {
        if (x == w->c.star()) continue;
        for (BoxIndex y : w->r.image(t, x)) {
          auto r = w->r;
          r.drop_edge(t, x, y);
          if (verify_witness(w->c, w->d, r, w->s, range).count(Verdict::failed) == 0) {
            caught = false;
            break;
          }
        }
        if (!caught) break;
      }
    }
    mutation_ok += caught;
  }
  Outcome o;
  o.pass = verified == seeds && mutation_ok == seeds;
  o.detail = "verified witnesses " + fraction(verified, seeds) + ", mutations caught " + fraction(mutation_ok, seeds);
  if (!first_error.empty()) o.detail += "; first problem: " + first_error;
  return o;
}

Outcome property_suites() {
  const std::string cmd = std::string(RCONLEY_PROPERTY_TESTS) + " --no-intro --minimal >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const bool ok = status == 0;
  return {ok, ok ? "all property suites passed with zero violations" : "property suite reported violations"};
}

Outcome robustness() {
  const int T = 16;
  const auto range = reliable_range(T);
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  const auto e = build_enclosure(MapFamily(RandomDiagonal{2, {}}), g, sample_path(NoiseModel::uniform(0.3, 0.7, 2), 0, T));
  const auto p = build_filtration_pair(e, ball(g, {0.0, 0.0}, 1.0, T), 2, range);
  const double deltas[] = {0.005, 0.01, 0.02, 0.05, 0.2};
  const auto rep = perturbation_sweep(e, deltas, p, range);
  std::ostringstream os;
  os << "passing prefix radius ";
  if (rep.radius) os << *rep.radius; else os << "none";
  os << ", cutoff ";
  if (rep.cutoff) os << *rep.cutoff; else os << "none (all passed)";
  os << ", monotone " << (rep.monotone ? "yes" : "no");
  const bool ok = rep.radius.has_value() && rep.monotone;
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "contraction example", 30.0, contraction_example},
      {"AC2", "expansion example", 30.0, expansion_example},
      {"AC3", "logistic example", 60.0, logistic_example},
      {"AC4", "Lorenz example", 300.0, lorenz_example},
      {"AC5", "shift-equivalence suite", 0.0, shift_equivalence_suite},
      {"AC6", "property suites", 0.0, property_suites},
      {"AC7", "robustness sweep", 0.0, robustness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s <= 0.0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    char timing[64];
    if (c.limit_s > 0.0) std::snprintf(timing, sizeof timing, "%.1fs < %.0fs", secs, c.limit_s);
    else std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << c.id << ' ' << (pass ? "PASS" : "FAIL") << " [" << c.title << "] " << o.detail << " (" << timing
              << (in_time ? "" : ", over limit") << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
