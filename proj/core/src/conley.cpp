#include "rconley/conley.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rconley/error.hpp"

namespace rconley {

std::string to_string(Check c) {
  switch (c) {
    case Check::pass:
      return "pass";
    case Check::fail:
      return "fail";
    case Check::unchecked:
      return "unchecked";
  }
  return "unchecked";
}

FiberRange reliable_range(int half_window) { return {-(half_window / 2), half_window / 2}; }

bool FiberChecks::all_pass(FiberRange r) const {
  bool any = false;
  for (int t = std::max(r.lo, -half_window_); t <= std::min(r.hi, half_window_); ++t) {
    if (at(t) == Check::fail) return false;
    any = any || at(t) == Check::pass;
  }
  return any;
}

std::optional<int> FiberChecks::first_failure(FiberRange r) const {
  for (int t = std::max(r.lo, -half_window_); t <= std::min(r.hi, half_window_); ++t) {
    if (at(t) == Check::fail) return t;
  }
  return std::nullopt;
}

nlohmann::json FiberChecks::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (int t = -half_window_; t <= half_window_; ++t) j[std::to_string(t)] = to_string(at(t));
  return j;
}

namespace {

void check_window(const FiberedEnclosure& e, const FiberedSet& s, const char* what) {
  if (s.half_window() != e.half_window()) {
    throw InputError(std::string(what) + ": set window T=" + std::to_string(s.half_window()) +
                     " differs from enclosure window T=" + std::to_string(e.half_window()));
  }
  if (!(*s.grid() == *e.grid())) throw InputError(std::string(what) + ": grid mismatch");
}

// {b in domain : forward_t(b) meets target}
BoxSet preimage_within(const FiberedEnclosure& e, int t, const BoxSet& domain, const BoxSet& target) {
  BoxSet out(e.grid());
  domain.for_each([&](BoxIndex b) {
    for (BoxIndex j : e.forward(t, b)) {
      if (target.contains(j)) {
        out.insert(b);
        break;
      }
    }
  });
  return out;
}

bool has_outer_anywhere(const FiberedSet& s) {
  for (int t = -s.half_window(); t <= s.half_window(); ++t) {
    if (s[t].contains_outer()) return true;
  }
  return false;
}

double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

nlohmann::json InvResult::to_json() const {
  nlohmann::json counts = nlohmann::json::object();
  for (int t = -half_window; t <= half_window; ++t) counts[std::to_string(t)] = inv[t].size();
  return {{"T", half_window},
          {"reliable_range", {reliable.lo, reliable.hi}},
          {"box_counts", counts},
          {"fiber0", inv[0].to_json()}};
}

InvResult invariant_set(const FiberedEnclosure& e, const FiberedSet& n) {
  check_window(e, n, "invariant_set");
  if (has_outer_anywhere(n)) throw InputError("invariant_set: N must lie in the domain");
  const int T = e.half_window();
  if (T < 1) throw InputError("invariant_set: empty window");
  FiberedSet fwd(n.grid(), T);
  FiberedSet bwd(n.grid(), T);
  fwd[-T] = n[-T];
  for (int t = -T; t < T; ++t) fwd[t + 1] = e.image(t, fwd[t]) & n[t + 1];
  bwd[T] = n[T];
  for (int t = T - 1; t >= -T; --t) bwd[t] = preimage_within(e, t, n[t], bwd[t + 1]);
  return {fwd & bwd, T, reliable_range(T)};
}

BoxSet omega_limit(const FiberedEnclosure& e, const FiberedSet& d, int burn_in) {
  check_window(e, d, "omega_limit");
  const int T = e.half_window();
  if (burn_in < 0 || burn_in >= T) throw InputError("omega_limit: burn-in must lie in [0, T)");
  BoxSet out(e.grid());
  for (int k = burn_in; k <= T; ++k) out |= iterate_image(e, d[-k], -k, k).in_domain();
  return out;
}

BoxSet exit_set(const FiberedEnclosure& e, const FiberedSet& n, int t) {
  check_window(e, n, "exit_set");
  if (!e.has_step(t)) throw InputError("exit_set: fiber " + std::to_string(t) + " outside window");
  const BoxSet inner = interior(n[t + 1]);
  BoxSet direct(e.grid());
  n[t].in_domain().for_each([&](BoxIndex b) {
    for (BoxIndex j : e.forward(t, b)) {
      if (!inner.contains(j)) {
        direct.insert(b);
        break;
      }
    }
  });
  const BoxSet dual = n[t].in_domain() & e.preimage(t, inner.complement());
  if (!(direct == dual)) throw ConstructionError("exit_set: direct and preimage formulas disagree");
  return direct;
}

FiberedSet exit_sets(const FiberedEnclosure& e, const FiberedSet& n) {
  FiberedSet out(n.grid(), n.half_window());
  for (int t = -n.half_window(); t < n.half_window(); ++t) out[t] = exit_set(e, n, t);
  return out;
}

FiberChecks is_isolating_neighborhood(const InvResult& inv, const FiberedSet& n) {
  FiberChecks out(n.half_window());
  for (int t = -n.half_window(); t <= n.half_window(); ++t) out.set(t, inv.inv[t].subset_of(interior(n[t])));
  return out;
}

FiberChecks is_isolating_neighborhood(const FiberedEnclosure& e, const FiberedSet& n) {
  return is_isolating_neighborhood(invariant_set(e, n), n);
}

FiberChecks is_isolating_block(const FiberedEnclosure& e, const FiberedSet& n) {
  check_window(e, n, "is_isolating_block");
  const int T = e.half_window();
  FiberChecks out(T);
  for (int t = -T + 1; t <= T - 1; ++t) {
    const BoxSet core = e.image(t - 1, n[t - 1]) & preimage_within(e, t, n[t], n[t + 1]);
    out.set(t, core.subset_of(interior(n[t])));
  }
  return out;
}

FiberedSet chain_neighborhood(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& s, int eps_layers) {
  check_window(e, n, "chain_neighborhood");
  check_window(e, s, "chain_neighborhood");
  if (eps_layers < 1) throw InputError("chain_neighborhood: eps_layers must be >= 1");
  if (!s.subset_of(n)) throw InputError("chain_neighborhood: S must lie in N");
  const int T = e.half_window();
  FiberedSet u(n.grid(), T);
  FiberedSet v(n.grid(), T);
  u[-T] = n[-T];
  for (int t = -T + 1; t <= T; ++t) u[t] = s[t] | (dilate(e.image(t - 1, u[t - 1]), eps_layers) & n[t]);
  v[T] = n[T];
  for (int t = T - 1; t >= -T; --t) {
    v[t] = s[t] | preimage_within(e, t, n[t], dilate(v[t + 1], eps_layers));
  }
  return u & v & n;
}

BlockResult block_from_chain(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& s, int eps_layers,
                             FiberRange range) {
  for (int eps = eps_layers; eps >= 1; --eps) {
    auto b = chain_neighborhood(e, n, s, eps);
    auto checks = is_isolating_block(e, b);
    if (checks.all_pass(range)) return {std::move(b), eps, std::move(checks)};
  }
  throw ConstructionError("no block at this resolution");
}

bool AxiomReport::valid_on(FiberRange r) const {
  return !isolating.first_failure(r) && !exit_collar.first_failure(r) && !l_closed.first_failure(r);
}

std::optional<int> AxiomReport::first_failure(FiberRange r) const {
  std::optional<int> out;
  for (const auto* c : {&isolating, &exit_collar, &l_closed}) {
    if (auto f = c->first_failure(r); f && (!out || *f < *out)) out = f;
  }
  return out;
}

nlohmann::json AxiomReport::to_json() const {
  return {{"isolating", isolating.to_json()},
          {"exit_collar", exit_collar.to_json()},
          {"l_closed", l_closed.to_json()},
          {"degenerate", degenerate}};
}

nlohmann::json FiltrationPair::to_json() const {
  return {{"N", n.to_json()}, {"L", l.to_json()}, {"dilation", dilation}, {"axioms", axioms.to_json()}};
}

AxiomReport verify_filtration_pair(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& l) {
  check_window(e, n, "verify_filtration_pair");
  check_window(e, l, "verify_filtration_pair");
  if (!l.subset_of(n)) throw InputError("verify_filtration_pair: L must lie in N");
  const int T = e.half_window();
  const FiberedSet rest = n - l;
  AxiomReport out{is_isolating_neighborhood(e, rest), FiberChecks(T), FiberChecks(T), rest.all_empty()};
  for (int t = -T; t < T; ++t) {
    const BoxSet ex = exit_set(e, n, t);
    out.exit_collar.set(t, (dilate(ex, 1) & n[t]).subset_of(l[t]));
    out.l_closed.set(t, !e.image(t, l[t]).intersects(rest[t + 1]));
  }
  return out;
}

FiltrationPair make_filtration_pair(const FiberedEnclosure& e, FiberedSet n, FiberedSet l) {
  auto axioms = verify_filtration_pair(e, n, l);
  return {std::move(n), std::move(l), -1, std::move(axioms)};
}

FiltrationPair build_filtration_pair(const FiberedEnclosure& e, const FiberedSet& block, int dilation,
                                     FiberRange range) {
  check_window(e, block, "build_filtration_pair");
  if (dilation < 0) throw InputError("build_filtration_pair: dilation must be nonnegative");
  const int T = e.half_window();
  const FiberedSet exits = exit_sets(e, block);
  for (int k = dilation; k >= 0; --k) {
    FiberedSet l(block.grid(), T);
    for (int t = -T; t < T; ++t) l[t] = dilate(exits[t], k) & block[t];
    auto axioms = verify_filtration_pair(e, block, l);
    if (axioms.valid_on(range)) return {block, std::move(l), k, std::move(axioms)};
  }
  throw ConstructionError("no valid L at this resolution");
}

// ---------------------------------------------------------------------------

PointedGraph::PointedGraph(GridPtr grid, int half_window, std::vector<BoxSet> nodes,
                           std::vector<std::vector<std::vector<BoxIndex>>> successors)
    : grid_(std::move(grid)), half_window_(half_window), nodes_(std::move(nodes)), collar_(half_window) {
  const auto fibers = 2 * static_cast<std::size_t>(half_window_) + 1;
  if (nodes_.size() != fibers) throw InputError("pointed graph: expected 2T+1 node sets");
  if (successors.size() != fibers - 1) throw InputError("pointed graph: expected 2T successor tables");
  node_lists_.resize(fibers);
  for (std::size_t i = 0; i < fibers; ++i) {
    nodes_[i].insert(star());
    node_lists_[i] = nodes_[i].indices();
    node_lists_[i].push_back(star());
  }
  offsets_.resize(fibers - 1);
  targets_.resize(fibers - 1);
  for (std::size_t i = 0; i + 1 < fibers; ++i) {
    auto& succ = successors[i];
    if (succ.size() != node_lists_[i].size()) throw InputError("pointed graph: successor table size mismatch");
    offsets_[i].assign(1, 0);
    for (std::size_t k = 0; k < succ.size(); ++k) {
      auto& s = succ[k];
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      if (s.empty()) throw InputError("pointed graph: node without successor");
      for (BoxIndex j : s) {
        if (!nodes_[i + 1].contains(j)) throw InputError("pointed graph: edge into a missing node");
      }
      if (node_lists_[i][k] == star() && (s.size() != 1 || s[0] != star())) {
        throw InputError("pointed graph: base point must map only to itself");
      }
      targets_[i].insert(targets_[i].end(), s.begin(), s.end());
      offsets_[i].push_back(static_cast<std::uint32_t>(targets_[i].size()));
    }
  }
}

std::size_t PointedGraph::slot(int t) const {
  if (t < -half_window_ || t > half_window_) {
    throw InputError("pointed graph: fiber " + std::to_string(t) + " outside window");
  }
  return static_cast<std::size_t>(t + half_window_);
}

const BoxSet& PointedGraph::nodes(int t) const { return nodes_[slot(t)]; }

std::span<const BoxIndex> PointedGraph::node_list(int t) const { return node_lists_[slot(t)]; }

bool PointedGraph::has_node(int t, BoxIndex node) const { return nodes(t).contains(node); }

int PointedGraph::position(int t, BoxIndex node) const {
  const auto& list = node_lists_[slot(t)];
  const auto it = std::lower_bound(list.begin(), list.end(), node);
  if (it == list.end() || *it != node) {
    throw InputError("pointed graph: node " + std::to_string(node) + " not on fiber " + std::to_string(t));
  }
  return static_cast<int>(it - list.begin());
}

std::span<const BoxIndex> PointedGraph::successors(int t, BoxIndex node) const {
  if (t >= half_window_) throw InputError("pointed graph: no successors on the last fiber");
  const auto s = slot(t);
  const auto k = static_cast<std::size_t>(position(t, node));
  return std::span<const BoxIndex>(targets_[s]).subspan(offsets_[s][k], offsets_[s][k + 1] - offsets_[s][k]);
}

BoxSet PointedGraph::step(int t, const BoxSet& x) const {
  BoxSet out(grid_);
  x.for_each([&](BoxIndex b) {
    for (BoxIndex j : successors(t, b)) out.insert(j);
  });
  if (x.contains_outer()) out.insert(star());
  return out;
}

BoxSet PointedGraph::power(int t, int k, const BoxSet& x) const {
  if (k < 0 || t + k > half_window_) throw InputError("pointed graph: power leaves the window");
  BoxSet cur = x;
  for (int i = 0; i < k; ++i) cur = step(t + i, cur);
  return cur;
}

std::size_t PointedGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& tg : targets_) n += tg.size();
  return n;
}

nlohmann::json PointedGraph::to_json() const {
  nlohmann::json fibers = nlohmann::json::array();
  for (int t = -half_window_; t <= half_window_; ++t) {
    nlohmann::json edges = nlohmann::json::object();
    if (t < half_window_) {
      for (BoxIndex b : node_list(t)) {
        const auto s = successors(t, b);
        edges[std::to_string(b)] = std::vector<BoxIndex>(s.begin(), s.end());
      }
    }
    const auto nl = node_list(t);
    fibers.push_back({{"t", t}, {"nodes", std::vector<BoxIndex>(nl.begin(), nl.end())}, {"edges", edges}});
  }
  return {{"grid", grid_->to_json()},
          {"T", half_window_},
          {"star", star()},
          {"fibers", fibers},
          {"collar", collar_.to_json()}};
}

PointedGraph PointedGraph::from_json(const nlohmann::json& j) {
  auto grid = Grid::from_json(j.at("grid"));
  const int T = j.at("T").get<int>();
  std::vector<BoxSet> nodes;
  std::vector<std::vector<std::vector<BoxIndex>>> succ;
  for (const auto& f : j.at("fibers")) {
    BoxSet s(grid);
    std::vector<BoxIndex> list;
    for (const auto& b : f.at("nodes")) {
      const auto id = b.get<BoxIndex>();
      if (id > grid->outer()) throw InputError("pointed graph json: node id out of range");
      s.insert(id);
      list.push_back(id);
    }
    s.insert(grid->outer());
    nodes.push_back(s);
    if (f.at("t").get<int>() < T) {
      std::vector<std::vector<BoxIndex>> table;
      auto sorted = s.indices();
      sorted.push_back(grid->outer());
      for (BoxIndex b : sorted) table.push_back(f.at("edges").at(std::to_string(b)).get<std::vector<BoxIndex>>());
      succ.push_back(std::move(table));
    }
  }
  return {grid, T, std::move(nodes), std::move(succ)};
}

PointedGraph pointed_map(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& l) {
  check_window(e, n, "pointed_map");
  check_window(e, l, "pointed_map");
  if (!l.subset_of(n)) throw InputError("pointed_map: L must lie in N");
  const int T = e.half_window();
  const BoxIndex star = e.grid()->outer();
  const FiberedSet rest = n - l;
  const FiberRange checked = reliable_range(T);
  std::vector<BoxSet> nodes;
  std::vector<std::vector<std::vector<BoxIndex>>> succ;
  FiberChecks collar(T);
  for (int t = -T; t <= T; ++t) {
    nodes.push_back(rest[t]);
    if (t == T) break;
    if (checked.contains(t)) {
      l[t].for_each([&](BoxIndex b) {
        for (BoxIndex j : e.forward(t, b)) {
          if (rest[t + 1].contains(j)) {
            throw ConstructionError("pointed_map: image of L meets N\\L at fiber " + std::to_string(t));
          }
        }
      });
    }
    std::vector<std::vector<BoxIndex>> table;
    rest[t].for_each([&](BoxIndex b) {
      std::vector<BoxIndex> s;
      bool to_star = false;
      for (BoxIndex j : e.forward(t, b)) {
        if (rest[t + 1].contains(j)) {
          s.push_back(j);
        } else {
          to_star = true;
        }
      }
      if (to_star) s.push_back(star);
      table.push_back(std::move(s));
    });
    table.push_back({star});
    succ.push_back(std::move(table));
  }
  PointedGraph g(e.grid(), T, std::move(nodes), std::move(succ));
  for (int t = -T; t < T; ++t) {
    const BoxSet ring = (dilate(l[t], 1) & n[t]) - l[t];
    bool ok = true;
    ring.for_each([&](BoxIndex b) {
      const auto s = g.successors(t, b);
      ok = ok && s.size() == 1 && s[0] == star;
    });
    collar.set(t, ok);
  }
  g.set_collar(std::move(collar));
  return g;
}

PointedGraph pointed_map(const FiberedEnclosure& e, const FiltrationPair& p) { return pointed_map(e, p.n, p.l); }

std::vector<std::optional<int>> absorption_times(const PointedGraph& g, const FiberedSet& start) {
  const int T = g.half_window();
  std::vector<std::optional<int>> out(2 * static_cast<std::size_t>(T) + 1);
  for (int t = -T; t <= T; ++t) {
    BoxSet x = (start[t] & g.nodes(t)).in_domain();
    int k = 0;
    while (x.has_boxes() && t + k < T) {
      x = g.step(t + k, x);
      ++k;
    }
    if (!x.has_boxes()) out[static_cast<std::size_t>(t + T)] = k;
  }
  return out;
}

std::vector<std::optional<int>> absorption_times(const PointedGraph& g) {
  FiberedSet all(g.grid(), g.half_window());
  for (int t = -g.half_window(); t <= g.half_window(); ++t) all[t] = g.nodes(t).in_domain();
  return absorption_times(g, all);
}

FiberedSet graph_invariant_set(const PointedGraph& g) {
  const int T = g.half_window();
  FiberedSet fwd(g.grid(), T);
  FiberedSet bwd(g.grid(), T);
  fwd[-T] = g.nodes(-T).in_domain();
  for (int t = -T; t < T; ++t) fwd[t + 1] = g.step(t, fwd[t]).in_domain();
  bwd[T] = g.nodes(T).in_domain();
  for (int t = T - 1; t >= -T; --t) {
    BoxSet s(g.grid());
    g.nodes(t).in_domain().for_each([&](BoxIndex b) {
      for (BoxIndex j : g.successors(t, b)) {
        if (bwd[t + 1].contains(j)) {
          s.insert(b);
          break;
        }
      }
    });
    bwd[t] = s;
  }
  return fwd & bwd;
}

std::string to_string(IndexVerdict v) {
  switch (v) {
    case IndexVerdict::trivial_certified:
      return "trivial-certified";
    case IndexVerdict::no_certificate:
      return "no-certificate";
    case IndexVerdict::nonempty_invariant_evidence:
      return "nonempty-invariant-evidence";
  }
  return "no-certificate";
}

nlohmann::json IndexCertificate::to_json() const {
  nlohmann::json abs = nlohmann::json::object();
  const int T = static_cast<int>(absorption.size() / 2);
  for (int t = range.lo; t <= range.hi; ++t) {
    const auto& a = absorption[static_cast<std::size_t>(t + T)];
    abs[std::to_string(t)] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
  }
  return {{"verdict", to_string(verdict)},
          {"horizon", horizon ? nlohmann::json(*horizon) : nlohmann::json(nullptr)},
          {"reliable_range", {range.lo, range.hi}},
          {"absorption", abs},
          {"invariant_nonempty", invariant_nonempty}};
}

IndexCertificate index_certificate(const PointedGraph& g, FiberRange range) {
  IndexCertificate c;
  c.range = range;
  c.absorption = absorption_times(g);
  const int T = g.half_window();
  bool all = true;
  int horizon = 0;
  for (int t = range.lo; t <= range.hi; ++t) {
    const auto& a = c.absorption[static_cast<std::size_t>(t + T)];
    if (!a) {
      all = false;
      break;
    }
    horizon = std::max(horizon, *a);
  }
  const FiberedSet inv = graph_invariant_set(g);
  for (int t = range.lo; t <= range.hi; ++t) c.invariant_nonempty = c.invariant_nonempty || inv[t].has_boxes();
  if (all) {
    c.verdict = IndexVerdict::trivial_certified;
    c.horizon = horizon;
  } else {
    c.verdict = c.invariant_nonempty ? IndexVerdict::nonempty_invariant_evidence : IndexVerdict::no_certificate;
  }
  return c;
}

// ---------------------------------------------------------------------------

double RandomMetric::max_on(FiberRange r) const {
  double m = 0.0;
  const int T = static_cast<int>(values.size() + 1) / 2;
  for (int t = std::max(r.lo, -T + 1); t <= std::min(r.hi, T - 1); ++t) {
    m = std::max(m, values[static_cast<std::size_t>(t + T - 1)]);
  }
  return m;
}

nlohmann::json RandomMetric::to_json() const { return {{"values", values}, {"inverse_term", inverse_term}}; }

RandomMetric random_metric(const MapFamily& f, const MapFamily& g, const FiberedSet& n, const NoisePath& path,
                           int samples, std::uint64_t seed, bool strict) {
  if (samples < 1) throw InputError("random_metric: need at least one sample");
  if (f.dims() != g.dims() || f.dims() != n.grid()->dims()) throw InputError("random_metric: dimension mismatch");
  if (n.half_window() != path.half_window()) throw InputError("random_metric: window mismatch");
  const bool inverses = f.has_inverse() && g.has_inverse();
  if (!inverses && strict) throw InputError("random_metric: inverse unavailable for " + f.name() + "/" + g.name());
  const int T = path.half_window();
  const Grid& grid = *n.grid();
  const std::size_t d = grid.dims();
  RandomMetric out;
  out.inverse_term = inverses;
  out.values.assign(2 * static_cast<std::size_t>(T) - 1, 0.0);

  auto sample_in = [&](const std::vector<BoxIndex>& boxes, std::mt19937_64& gen) {
    const auto b = boxes[static_cast<std::size_t>(unit_draw(gen) * static_cast<double>(boxes.size()))];
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = grid.box_lo(b, i) + unit_draw(gen) * (grid.box_hi(b, i) - grid.box_lo(b, i));
    }
    return x;
  };
  auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };

  for (int t = -T + 1; t <= T - 1; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t + T)};
    std::mt19937_64 gen(seq);
    double forward = 0.0;
    const auto before = n[t - 1].indices();
    if (!before.empty()) {
      const auto noise = path.value(t - 1);
      for (int k = 0; k < samples; ++k) {
        const auto x = sample_in(before, gen);
        forward = std::max(forward, dist(f(x, noise), g(x, noise)));
      }
    }
    double backward = 0.0;
    const auto after = n[t + 1].indices();
    if (inverses && !after.empty()) {
      const auto noise = path.value(t);
      for (int k = 0; k < samples; ++k) {
        const auto y = sample_in(after, gen);
        const auto a = f.inverse(y, noise);
        const auto b = g.inverse(y, noise);
        if (a && b) backward = std::max(backward, dist(*a, *b));
      }
    }
    out.values[static_cast<std::size_t>(t + T - 1)] = forward + backward;
  }
  return out;
}

nlohmann::json RobustnessReport::to_json() const {
  return {{"metric", metric},
          {"holds", holds},
          {"failing_fiber", failing_fiber ? nlohmann::json(*failing_fiber) : nlohmann::json(nullptr)},
          {"axioms", axioms.to_json()}};
}

RobustnessReport robustness_check(const FiberedEnclosure& e_f, const FiltrationPair& p, const MapFamily& g,
                                  FiberRange range, int samples) {
  const auto e_g = build_enclosure(g, e_f.grid(), e_f.path());
  RobustnessReport r;
  r.axioms = verify_filtration_pair(e_g, p.n, p.l);
  r.metric = random_metric(e_f.family(), g, p.n, e_f.path(), samples, e_f.path().seed()).max_on(range);
  r.failing_fiber = r.axioms.first_failure(range);
  r.holds = r.axioms.valid_on(range);
  return r;
}

}  // namespace rconley
