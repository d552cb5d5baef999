#include "rconley/shiftequiv.hpp"

#include <algorithm>

#include "rconley/error.hpp"

namespace rconley {

std::string to_string(Monotone m) {
  switch (m) {
    case Monotone::none:
      return "none";
    case Monotone::nonincreasing:
      return "nonincreasing";
    case Monotone::nondecreasing:
      return "nondecreasing";
  }
  return "none";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::equal:
      return "equal";
    case Verdict::outer_consistent:
      return "outer-consistent";
    case Verdict::failed:
      return "failed";
    case Verdict::unchecked:
      return "unchecked";
  }
  return "unchecked";
}

namespace {

std::vector<BoxIndex> members(const BoxSet& s) {
  auto out = s.indices();
  if (s.contains_outer()) out.push_back(s.grid()->outer());
  return out;
}

BoxSet singleton(const GridPtr& grid, BoxIndex b) {
  BoxSet s(grid);
  s.insert(b);
  return s;
}

Monotone parse_monotone(const std::string& s) {
  if (s == "nonincreasing") return Monotone::nonincreasing;
  if (s == "nondecreasing") return Monotone::nondecreasing;
  if (s == "none") return Monotone::none;
  throw InputError("graph map json: unknown direction '" + s + "'");
}

Verdict parse_verdict(const std::string& s) {
  if (s == "equal") return Verdict::equal;
  if (s == "outer-consistent") return Verdict::outer_consistent;
  if (s == "failed") return Verdict::failed;
  return Verdict::unchecked;
}

}  // namespace

// ---------------------------------------------------------------------------

GraphMap::GraphMap(GridPtr grid, int half_window, Monotone direction)
    : grid_(std::move(grid)),
      half_window_(half_window),
      direction_(direction),
      fibers_(2 * static_cast<std::size_t>(half_window) + 1) {}

const GraphMap::Fiber& GraphMap::fiber(int t) const {
  if (t < -half_window_ || t > half_window_) {
    throw InputError("graph map: fiber " + std::to_string(t) + " outside window");
  }
  return fibers_[static_cast<std::size_t>(t + half_window_)];
}

GraphMap::Fiber& GraphMap::fiber(int t) {
  return const_cast<Fiber&>(static_cast<const GraphMap&>(*this).fiber(t));
}

bool GraphMap::defined(int t) const {
  return t >= -half_window_ && t <= half_window_ && fiber(t).offset >= 0;
}

int GraphMap::offset(int t) const {
  if (!defined(t)) throw InputError("graph map: fiber " + std::to_string(t) + " undefined");
  return fiber(t).offset;
}

void GraphMap::define(int t, int offset, std::vector<BoxIndex> sources, std::vector<std::vector<BoxIndex>> images) {
  if (offset < 0 || t + offset > half_window_) throw InputError("graph map: offset leaves the window");
  if (sources.size() != images.size()) throw InputError("graph map: sources and images differ in length");
  std::vector<std::size_t> order(sources.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sources[a] < sources[b]; });
  Fiber& f = fiber(t);
  f.offset = offset;
  f.sources.clear();
  f.images.clear();
  for (auto i : order) {
    if (!f.sources.empty() && f.sources.back() == sources[i]) throw InputError("graph map: duplicate source node");
    auto img = std::move(images[i]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    f.sources.push_back(sources[i]);
    f.images.push_back(std::move(img));
  }
}

std::span<const BoxIndex> GraphMap::sources(int t) const { return fiber(t).sources; }

std::span<const BoxIndex> GraphMap::image(int t, BoxIndex node) const {
  const Fiber& f = fiber(t);
  const auto it = std::lower_bound(f.sources.begin(), f.sources.end(), node);
  if (f.offset < 0 || it == f.sources.end() || *it != node) {
    throw InputError("graph map: node " + std::to_string(node) + " has no image on fiber " + std::to_string(t));
  }
  return f.images[static_cast<std::size_t>(it - f.sources.begin())];
}

BoxSet GraphMap::apply(int t, const BoxSet& x) const {
  BoxSet out(grid_);
  for (BoxIndex b : members(x)) {
    for (BoxIndex j : image(t, b)) out.insert(j);
  }
  return out;
}

void GraphMap::drop_edge(int t, BoxIndex node, BoxIndex target) {
  Fiber& f = fiber(t);
  const auto it = std::lower_bound(f.sources.begin(), f.sources.end(), node);
  if (it == f.sources.end() || *it != node) throw InputError("graph map: no such source node");
  auto& img = f.images[static_cast<std::size_t>(it - f.sources.begin())];
  const auto jt = std::lower_bound(img.begin(), img.end(), target);
  if (jt == img.end() || *jt != target) throw InputError("graph map: no such edge");
  img.erase(jt);
}

bool GraphMap::monotone_ok() const {
  for (int t = -half_window_; t < half_window_; ++t) {
    if (!defined(t) || !defined(t + 1)) continue;
    if (direction_ == Monotone::nonincreasing && offset(t) < offset(t + 1)) return false;
    if (direction_ == Monotone::nondecreasing && offset(t) > offset(t + 1)) return false;
  }
  return true;
}

std::size_t GraphMap::edge_count() const {
  std::size_t n = 0;
  for (const auto& f : fibers_) {
    for (const auto& img : f.images) n += img.size();
  }
  return n;
}

nlohmann::json GraphMap::to_json() const {
  nlohmann::json fibers = nlohmann::json::array();
  for (int t = -half_window_; t <= half_window_; ++t) {
    if (!defined(t)) continue;
    const Fiber& f = fiber(t);
    nlohmann::json rel = nlohmann::json::object();
    for (std::size_t k = 0; k < f.sources.size(); ++k) rel[std::to_string(f.sources[k])] = f.images[k];
    fibers.push_back({{"t", t}, {"offset", f.offset}, {"relation", rel}});
  }
  return {{"T", half_window_}, {"direction", to_string(direction_)}, {"fibers", fibers}};
}

GraphMap GraphMap::from_json(const nlohmann::json& j, GridPtr grid) {
  GraphMap m(std::move(grid), j.at("T").get<int>(), parse_monotone(j.at("direction").get<std::string>()));
  for (const auto& f : j.at("fibers")) {
    std::vector<BoxIndex> sources;
    std::vector<std::vector<BoxIndex>> images;
    for (const auto& [key, value] : f.at("relation").items()) {
      sources.push_back(static_cast<BoxIndex>(std::stoul(key)));
      images.push_back(value.get<std::vector<BoxIndex>>());
    }
    m.define(f.at("t").get<int>(), f.at("offset").get<int>(), std::move(sources), std::move(images));
  }
  return m;
}

GraphMap compose(const GraphMap& f, const GraphMap& g) {
  if (f.half_window() != g.half_window()) throw InputError("compose: window mismatch");
  GraphMap out(f.grid(), f.half_window(), Monotone::none);
  for (int t = -f.half_window(); t <= f.half_window(); ++t) {
    if (!f.defined(t)) continue;
    const int mid = t + f.offset(t);
    if (!g.defined(mid)) continue;
    const int total = f.offset(t) + g.offset(mid);
    if (t + total > f.half_window()) continue;
    const auto middle = g.sources(mid);
    std::vector<BoxIndex> sources(f.sources(t).begin(), f.sources(t).end());
    std::vector<std::vector<BoxIndex>> images;
    images.reserve(sources.size());
    bool composable = true;
    for (BoxIndex x : sources) {
      BoxSet img(f.grid());
      for (BoxIndex y : f.image(t, x)) {
        if (!std::binary_search(middle.begin(), middle.end(), y)) {
          composable = false;
          break;
        }
        img |= g.apply(mid, singleton(f.grid(), y));
      }
      if (!composable) break;
      images.push_back(members(img));
    }
    if (composable) out.define(t, total, std::move(sources), std::move(images));
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict FiberVerdicts::overall() const {
  const Verdict all[] = {well_formed, r_commutes, s_commutes, rs_power, sr_power};
  auto has = [&](Verdict v) { return std::find(std::begin(all), std::end(all), v) != std::end(all); };
  if (has(Verdict::failed)) return Verdict::failed;
  if (has(Verdict::outer_consistent)) return Verdict::outer_consistent;
  if (has(Verdict::equal)) return Verdict::equal;
  return Verdict::unchecked;
}

int WitnessReport::count(Verdict v) const {
  return static_cast<int>(std::count_if(fibers.begin(), fibers.end(), [&](const auto& f) { return f.overall() == v; }));
}

nlohmann::json WitnessReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& f : fibers) {
    per.push_back({{"t", f.t},
                   {"well_formed", to_string(f.well_formed)},
                   {"r_commutes", to_string(f.r_commutes)},
                   {"s_commutes", to_string(f.s_commutes)},
                   {"rs_power", to_string(f.rs_power)},
                   {"sr_power", to_string(f.sr_power)},
                   {"overall", to_string(f.overall())}});
  }
  return {{"range", {range.lo, range.hi}},
          {"fibers", per},
          {"equal", count(Verdict::equal)},
          {"outer_consistent", count(Verdict::outer_consistent)},
          {"failed", count(Verdict::failed)},
          {"unchecked", count(Verdict::unchecked)},
          {"verified", verified()}};
}

namespace {

struct Unchecked {};

// Per-node comparison of a composite side against its reference side.
class Comparison {
 public:
  void add(const BoxSet& composite, const BoxSet& reference) {
    if (!(composite == reference)) {
      equal_ = false;
      covers_ = covers_ && reference.subset_of(composite);
    }
  }
  Verdict verdict() const {
    if (equal_) return Verdict::equal;
    return covers_ ? Verdict::outer_consistent : Verdict::failed;
  }

 private:
  bool equal_ = true;
  bool covers_ = true;
};

template <class F>
Verdict guarded(F&& f) {
  try {
    return f();
  } catch (const Unchecked&) {
    return Verdict::unchecked;
  }
}

void require(bool ok) {
  if (!ok) throw Unchecked{};
}

BoxSet power_or_skip(const PointedGraph& g, int t, int k, const BoxSet& x) {
  require(k >= 0 && t >= -g.half_window() && t + k <= g.half_window());
  return g.power(t, k, x);
}

BoxSet apply_or_skip(const GraphMap& m, int t, const BoxSet& x) {
  require(m.defined(t));
  return m.apply(t, x);
}

Verdict well_formed(const PointedGraph& from, const PointedGraph& to, const GraphMap& m, int t) {
  require(m.defined(t));
  const int target = t + m.offset(t);
  for (BoxIndex x : from.node_list(t)) {
    const auto src = m.sources(t);
    if (!std::binary_search(src.begin(), src.end(), x)) return Verdict::failed;
    const auto img = m.image(t, x);
    if (img.empty()) return Verdict::failed;
    if (x == from.star() && (img.size() != 1 || img[0] != to.star())) return Verdict::failed;
    for (BoxIndex y : img) {
      if (!to.has_node(target, y)) return Verdict::failed;
    }
  }
  return Verdict::equal;
}

// m_{t+1}∘a_t against b^Δ∘b∘m_t with the branch chosen by the offsets.
Verdict commutes(const PointedGraph& a, const PointedGraph& b, const GraphMap& m, int t) {
  require(m.defined(t) && m.defined(t + 1) && t + 1 <= a.half_window());
  const int n0 = m.offset(t);
  const int n1 = m.offset(t + 1);
  Comparison cmp;
  for (BoxIndex x : a.node_list(t)) {
    const BoxSet xs = singleton(a.grid(), x);
    BoxSet lhs = apply_or_skip(m, t + 1, power_or_skip(a, t, 1, xs));
    BoxSet rhs = power_or_skip(b, t + n0, 1, apply_or_skip(m, t, xs));
    if (n1 >= n0) {
      rhs = power_or_skip(b, t + n0 + 1, n1 - n0, rhs);
    } else {
      lhs = power_or_skip(b, t + 1 + n1, n0 - n1, lhs);
    }
    cmp.add(lhs, rhs);
  }
  return cmp.verdict();
}

// second_{t+n}∘first_t against the matching power of the source graph.
Verdict identity(const PointedGraph& a, const GraphMap& first, const GraphMap& second, int t) {
  require(first.defined(t));
  const int n = first.offset(t);
  require(second.defined(t + n));
  const int k = n + second.offset(t + n);
  Comparison cmp;
  for (BoxIndex x : a.node_list(t)) {
    const BoxSet xs = singleton(a.grid(), x);
    cmp.add(apply_or_skip(second, t + n, apply_or_skip(first, t, xs)), power_or_skip(a, t, k, xs));
  }
  return cmp.verdict();
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::failed:
        return 3;
      case Verdict::outer_consistent:
        return 2;
      case Verdict::equal:
        return 1;
      case Verdict::unchecked:
        return 0;
    }
    return 0;
  };
  if (a == Verdict::unchecked || b == Verdict::unchecked) {
    return rank(a) == 3 || rank(b) == 3 ? Verdict::failed : Verdict::unchecked;
  }
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

WitnessReport verify_witness(const PointedGraph& c, const PointedGraph& d, const GraphMap& r, const GraphMap& s,
                             FiberRange range) {
  if (c.half_window() != d.half_window() || r.half_window() != c.half_window() ||
      s.half_window() != c.half_window()) {
    throw InputError("verify_witness: window mismatch");
  }
  WitnessReport out;
  out.range = range;
  for (int t = range.lo; t <= range.hi; ++t) {
    FiberVerdicts v;
    v.t = t;
    v.well_formed = worst(guarded([&] { return well_formed(c, d, r, t); }),
                          guarded([&] { return well_formed(d, c, s, t); }));
    v.r_commutes = guarded([&] { return commutes(c, d, r, t); });
    v.s_commutes = guarded([&] { return commutes(d, c, s, t); });
    v.rs_power = guarded([&] { return identity(d, s, r, t); });
    v.sr_power = guarded([&] { return identity(c, r, s, t); });
    out.fibers.push_back(v);
  }
  return out;
}

nlohmann::json EquivalenceWitness::to_json() const {
  return {{"c", c.to_json()},
          {"d", d.to_json()},
          {"r", r.to_json()},
          {"s", s.to_json()},
          {"report", report.to_json()},
          {"steps", steps}};
}

EquivalenceWitness EquivalenceWitness::from_json(const nlohmann::json& j) {
  auto c = PointedGraph::from_json(j.at("c"));
  auto d = PointedGraph::from_json(j.at("d"));
  auto r = GraphMap::from_json(j.at("r"), c.grid());
  auto s = GraphMap::from_json(j.at("s"), c.grid());
  WitnessReport rep;
  const auto& jr = j.at("report");
  rep.range = {jr.at("range")[0].get<int>(), jr.at("range")[1].get<int>()};
  for (const auto& f : jr.at("fibers")) {
    FiberVerdicts v;
    v.t = f.at("t").get<int>();
    v.well_formed = parse_verdict(f.at("well_formed").get<std::string>());
    v.r_commutes = parse_verdict(f.at("r_commutes").get<std::string>());
    v.s_commutes = parse_verdict(f.at("s_commutes").get<std::string>());
    v.rs_power = parse_verdict(f.at("rs_power").get<std::string>());
    v.sr_power = parse_verdict(f.at("sr_power").get<std::string>());
    rep.fibers.push_back(v);
  }
  return {std::move(c), std::move(d), std::move(r), std::move(s), std::move(rep),
          j.value("steps", std::vector<std::string>{})};
}

// ---------------------------------------------------------------------------

namespace {

void check_on_range(bool ok, const std::string& what, int t) {
  if (!ok) throw ConstructionError("hypothesis failed: " + what + " at fiber " + std::to_string(t));
}

// Enforces n(t) >= n(t+1) (or <=) along the window; a fiber whose value
// cannot be made consistent inside the window becomes undefined.
void monotonize(std::vector<std::optional<int>>& n, int T, Monotone dir) {
  int prev = -1;
  auto fix = [&](int t) {
    auto& v = n[static_cast<std::size_t>(t + T)];
    if (!v) {
      prev = -1;
      return;
    }
    v = std::max(*v, prev);
    if (t + *v > T) v.reset();
    prev = v ? *v : -1;
  };
  if (dir == Monotone::nonincreasing) {
    for (int t = T; t >= -T; --t) fix(t);
  } else {
    for (int t = -T; t <= T; ++t) fix(t);
  }
}

void require_offsets(const std::vector<std::optional<int>>& n, int T, FiberRange range) {
  for (int t = range.lo; t <= range.hi; ++t) {
    if (!n[static_cast<std::size_t>(t + T)]) {
      throw ConstructionError("absorption time exceeds window at fiber " + std::to_string(t));
    }
  }
}

// Relation x -> {x} for nodes also present in `to`, base point otherwise.
GraphMap projection(const PointedGraph& from, const PointedGraph& to) {
  const int T = from.half_window();
  GraphMap m(from.grid(), T, Monotone::none);
  for (int t = -T; t <= T; ++t) {
    std::vector<BoxIndex> sources(from.node_list(t).begin(), from.node_list(t).end());
    std::vector<std::vector<BoxIndex>> images;
    for (BoxIndex x : sources) images.push_back({to.has_node(t, x) ? x : to.star()});
    m.define(t, 0, std::move(sources), std::move(images));
  }
  return m;
}

// Relation y -> g^{n(t)}(y) on the nodes of `from`.
GraphMap power_map(const PointedGraph& from, const PointedGraph& g, const std::vector<std::optional<int>>& n,
                   Monotone dir) {
  const int T = g.half_window();
  GraphMap m(g.grid(), T, dir);
  for (int t = -T; t <= T; ++t) {
    const auto& k = n[static_cast<std::size_t>(t + T)];
    if (!k) continue;
    if (!from.nodes(t).subset_of(g.nodes(t))) continue;
    std::vector<BoxIndex> sources(from.node_list(t).begin(), from.node_list(t).end());
    std::vector<std::vector<BoxIndex>> images;
    for (BoxIndex y : sources) images.push_back(members(g.power(t, *k, singleton(g.grid(), y))));
    m.define(t, *k, std::move(sources), std::move(images));
  }
  return m;
}

}  // namespace

EquivalenceWitness collapse_witness(const FiberedEnclosure& e, const FiltrationPair& small, const FiltrationPair& big,
                                    FiberRange range) {
  const int T = e.half_window();
  for (int t = range.lo; t <= range.hi; ++t) {
    check_on_range(small.l[t].subset_of(big.l[t]), "L_small not inside L_big", t);
    check_on_range(big.n[t] == small.n[t] || big.n[t] == (small.n[t] | big.l[t]), "N_big is not N or N ∪ L_big", t);
    if (t < T) {
      check_on_range(!e.image(t, big.l[t]).intersects(big.n[t + 1] - big.l[t + 1]), "image of L_big meets N_big\\L_big",
                     t);
    }
  }
  auto c = pointed_map(e, small);
  auto d = pointed_map(e, big);
  auto n = absorption_times(c, big.l);
  monotonize(n, T, Monotone::nonincreasing);
  require_offsets(n, T, range);
  GraphMap r = projection(c, d);
  GraphMap s = power_map(d, c, n, Monotone::nonincreasing);
  auto report = verify_witness(c, d, r, s, range);
  return {std::move(c), std::move(d), std::move(r), std::move(s), std::move(report), {"collapse"}};
}

EquivalenceWitness enlarge_witness(const FiberedEnclosure& e, const FiltrationPair& inner,
                                   const FiltrationPair& outer, FiberRange range) {
  const int T = e.half_window();
  for (int t = range.lo; t <= range.hi; ++t) {
    check_on_range(inner.n[t].subset_of(outer.n[t]), "N_inner not inside N_outer", t);
    check_on_range(inner.l[t] == outer.l[t], "pairs do not share L", t);
    if (t < T) {
      check_on_range(!e.image(t, inner.n[t] - inner.l[t]).intersects(outer.n[t + 1] - inner.n[t + 1]),
                     "image of N_inner\\L leaves N_inner inside N_outer", t);
    }
  }
  auto c = pointed_map(e, inner);
  auto d = pointed_map(e, outer);
  std::vector<std::optional<int>> n(2 * static_cast<std::size_t>(T) + 1);
  for (int t = -T; t <= T; ++t) {
    BoxSet x = d.nodes(t).in_domain();
    for (int k = 0; t + k <= T; ++k) {
      if (x.subset_of(inner.n[t + k])) {
        n[static_cast<std::size_t>(t + T)] = k;
        break;
      }
      if (t + k == T) break;
      x = d.step(t + k, x).in_domain();
    }
  }
  monotonize(n, T, Monotone::nonincreasing);
  require_offsets(n, T, range);
  GraphMap r = projection(c, d);
  GraphMap s = power_map(d, d, n, Monotone::nonincreasing);
  auto report = verify_witness(c, d, r, s, range);
  return {std::move(c), std::move(d), std::move(r), std::move(s), std::move(report), {"enlarge"}};
}

EquivalenceWitness reverse(const EquivalenceWitness& w, FiberRange range) {
  auto report = verify_witness(w.d, w.c, w.s, w.r, range);
  auto steps = w.steps;
  steps.push_back("reverse");
  return {w.d, w.c, w.s, w.r, std::move(report), std::move(steps)};
}

EquivalenceWitness chain(const EquivalenceWitness& w1, const EquivalenceWitness& w2, FiberRange range) {
  const int T = w1.d.half_window();
  for (int t = -T; t <= T; ++t) {
    if (!(w1.d.nodes(t) == w2.c.nodes(t))) throw InputError("chain: middle graphs differ at fiber " + std::to_string(t));
  }
  GraphMap r = compose(w1.r, w2.r);
  GraphMap s = compose(w2.s, w1.s);
  auto report = verify_witness(w1.c, w2.d, r, s, range);
  auto steps = w1.steps;
  steps.push_back("then");
  steps.insert(steps.end(), w2.steps.begin(), w2.steps.end());
  return {w1.c, w2.d, std::move(r), std::move(s), std::move(report), std::move(steps)};
}

namespace {

// Witness from the pair built on the common block to p.
EquivalenceWitness block_to_pair(const FiberedEnclosure& e, const FiltrationPair& p0, const FiltrationPair& p,
                                 FiberRange range) {
  const int T = e.half_window();
  const auto g = pointed_map(e, p);
  auto n = absorption_times(g, p0.l);
  monotonize(n, T, Monotone::nondecreasing);
  require_offsets(n, T, range);
  FiberedSet k(p.n.grid(), T);
  for (int t = -T; t <= T; ++t) {
    const auto& steps = n[static_cast<std::size_t>(t + T)];
    if (!steps) continue;
    g.nodes(t).in_domain().for_each([&](BoxIndex x) {
      if (!g.power(t, *steps, singleton(g.grid(), x)).has_boxes()) k[t].insert(x);
    });
  }
  const FiberedSet kl = k | p.l;
  const auto q = make_filtration_pair(e, p0.n | kl, kl);
  const auto r = make_filtration_pair(e, p.n, kl);
  const auto w1 = collapse_witness(e, p0, q, range);
  const auto w2 = enlarge_witness(e, q, r, range);
  const auto w3 = collapse_witness(e, p, r, range);
  return chain(chain(w1, w2, range), reverse(w3, range), range);
}

}  // namespace

EquivalenceWitness equivalence_via_common_block(const FiberedEnclosure& e, const FiltrationPair& p,
                                                const FiltrationPair& q, int eps_layers, FiberRange range) {
  const FiberedSet rest_p = p.n - p.l;
  const FiberedSet rest_q = q.n - q.l;
  const auto s_p = invariant_set(e, rest_p).inv;
  const auto s_q = invariant_set(e, rest_q).inv;
  for (int t = range.lo; t <= range.hi; ++t) {
    if (!(s_p[t] == s_q[t])) throw ConstructionError("pairs isolate different sets (fiber " + std::to_string(t) + ")");
  }
  const auto block = block_from_chain(e, rest_p, s_p, eps_layers, range).block;
  for (int t = range.lo; t <= range.hi; ++t) {
    if (!block[t].subset_of(interior(rest_p[t])) || !block[t].subset_of(interior(rest_q[t]))) {
      throw ConstructionError("chain block not inside both pairs at fiber " + std::to_string(t) +
                              "; increase resolution");
    }
  }
  const auto p0 = build_filtration_pair(e, block, 1, range);
  const auto s_0 = invariant_set(e, p0.n - p0.l).inv;
  for (int t = range.lo; t <= range.hi; ++t) {
    if (s_p[t].has_boxes() && !s_0[t].has_boxes()) {
      throw ConstructionError("pair on the chain block loses the invariant set at fiber " + std::to_string(t) +
                              "; increase eps_layers or resolution");
    }
  }
  const auto to_p = block_to_pair(e, p0, p, range);
  const auto to_q = block_to_pair(e, p0, q, range);
  auto w = chain(reverse(to_p, range), to_q, range);
  w.steps.insert(w.steps.begin(), "common block eps=" + std::to_string(eps_layers));
  return w;
}

}  // namespace rconley
