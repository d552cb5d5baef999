#include "rconley/enclosure.hpp"

#include <algorithm>
#include <cmath>

#include "rconley/error.hpp"
#include "rconley/parallel.hpp"

namespace rconley {

FiberedSet::FiberedSet(GridPtr grid, int half_window) : grid_(std::move(grid)), half_window_(half_window) {
  if (!grid_) throw InputError("fibered set: null grid");
  if (half_window_ < 0) throw InputError("fibered set: negative half window");
  sets_.assign(2 * static_cast<std::size_t>(half_window_) + 1, BoxSet(grid_));
}

FiberedSet FiberedSet::constant(const BoxSet& set, int half_window) {
  FiberedSet s(set.grid(), half_window);
  for (auto& f : s.sets_) f = set;
  return s;
}

const BoxSet& FiberedSet::operator[](int t) const {
  if (!has_fiber(t)) throw InputError("fibered set: fiber " + std::to_string(t) + " outside window");
  return sets_[static_cast<std::size_t>(t + half_window_)];
}

BoxSet& FiberedSet::operator[](int t) {
  if (!has_fiber(t)) throw InputError("fibered set: fiber " + std::to_string(t) + " outside window");
  return sets_[static_cast<std::size_t>(t + half_window_)];
}

void FiberedSet::check_compatible(const FiberedSet& o) const {
  if (half_window_ != o.half_window_) throw InputError("fibered set: window mismatch");
  if (!(*grid_ == *o.grid_)) throw InputError("fibered set: grid mismatch");
}

bool FiberedSet::subset_of(const FiberedSet& o) const {
  check_compatible(o);
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (!sets_[i].subset_of(o.sets_[i])) return false;
  }
  return true;
}

bool FiberedSet::operator==(const FiberedSet& o) const {
  return half_window_ == o.half_window_ && sets_ == o.sets_;
}

bool FiberedSet::all_empty() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const BoxSet& s) { return s.empty(); });
}

FiberedSet& FiberedSet::operator|=(const FiberedSet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < sets_.size(); ++i) sets_[i] |= o.sets_[i];
  return *this;
}

FiberedSet& FiberedSet::operator&=(const FiberedSet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < sets_.size(); ++i) sets_[i] &= o.sets_[i];
  return *this;
}

FiberedSet& FiberedSet::operator-=(const FiberedSet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < sets_.size(); ++i) sets_[i] -= o.sets_[i];
  return *this;
}

nlohmann::json FiberedSet::to_json() const {
  nlohmann::json fibers = nlohmann::json::array();
  for (int t = -half_window_; t <= half_window_; ++t) {
    auto j = (*this)[t].to_json();
    j.erase("grid");
    fibers.push_back({{"t", t}, {"set", j}});
  }
  return {{"grid", grid_->to_json()}, {"T", half_window_}, {"fibers", fibers}};
}

FiberedSet FiberedSet::from_json(const nlohmann::json& j) {
  auto grid = Grid::from_json(j.at("grid"));
  FiberedSet s(grid, j.at("T").get<int>());
  const auto& fibers = j.at("fibers");
  if (fibers.size() != s.sets_.size()) throw InputError("fibered set json: expected 2T+1 fibers");
  for (const auto& f : fibers) s[f.at("t").get<int>()] = BoxSet::from_json(f.at("set"), grid);
  return s;
}

FiberedSet dilate(const FiberedSet& s, int k) {
  FiberedSet out = s;
  for (int t = -s.half_window(); t <= s.half_window(); ++t) out[t] = dilate(s[t], k);
  return out;
}

FiberedSet interior(const FiberedSet& s) {
  FiberedSet out = s;
  for (int t = -s.half_window(); t <= s.half_window(); ++t) out[t] = interior(s[t]);
  return out;
}

// ---------------------------------------------------------------------------

FiberedEnclosure::FiberedEnclosure(GridPtr grid, std::shared_ptr<const NoisePath> path,
                                   std::shared_ptr<const MapFamily> family,
                                   std::vector<std::vector<std::uint32_t>> offsets,
                                   std::vector<std::vector<BoxIndex>> targets)
    : grid_(std::move(grid)),
      path_(std::move(path)),
      family_(std::move(family)),
      offsets_(std::move(offsets)),
      targets_(std::move(targets)),
      outer_self_{grid_->outer()} {
  const auto steps = 2 * static_cast<std::size_t>(path_->half_window());
  if (offsets_.size() != steps || targets_.size() != steps) throw InputError("enclosure: expected 2T fiber tables");
  for (std::size_t i = 0; i < steps; ++i) {
    if (offsets_[i].size() != grid_->box_count() + 1 || offsets_[i].back() != targets_[i].size()) {
      throw InputError("enclosure: malformed fiber table");
    }
  }
}

const std::vector<std::uint32_t>& FiberedEnclosure::offsets(int t) const {
  if (!has_step(t)) throw InputError("enclosure: fiber " + std::to_string(t) + " outside window");
  return offsets_[static_cast<std::size_t>(t + half_window())];
}

std::span<const BoxIndex> FiberedEnclosure::forward(int t, BoxIndex b) const {
  const auto& off = offsets(t);
  if (b == grid_->outer()) return outer_self_;
  if (b > grid_->outer()) throw InputError("enclosure: box index out of range");
  const auto& tg = targets_[static_cast<std::size_t>(t + half_window())];
  return std::span<const BoxIndex>(tg).subspan(off[b], off[b + 1] - off[b]);
}

BoxSet FiberedEnclosure::image(int t, const BoxSet& b) const {
  BoxSet out(grid_);
  b.for_each([&](BoxIndex i) {
    for (BoxIndex j : forward(t, i)) out.insert(j);
  });
  if (b.contains_outer()) out.insert(grid_->outer());
  return out;
}

BoxSet FiberedEnclosure::preimage(int t, const BoxSet& target) const {
  const auto& off = offsets(t);
  const auto& tg = targets_[static_cast<std::size_t>(t + half_window())];
  BoxSet out(grid_);
  if (target.empty()) return out;
  for (BoxIndex b = 0; b < grid_->box_count(); ++b) {
    for (auto k = off[b]; k < off[b + 1]; ++k) {
      if (target.contains(tg[k])) {
        out.insert(b);
        break;
      }
    }
  }
  if (target.contains_outer()) out.insert(grid_->outer());
  return out;
}

std::size_t FiberedEnclosure::edge_count() const {
  std::size_t n = 0;
  for (const auto& tg : targets_) n += tg.size();
  return n;
}

nlohmann::json FiberedEnclosure::to_json() const {
  nlohmann::json fibers = nlohmann::json::array();
  for (int t = -half_window(); t < half_window(); ++t) {
    nlohmann::json adj = nlohmann::json::array();
    for (BoxIndex b = 0; b < grid_->box_count(); ++b) {
      const auto f = forward(t, b);
      adj.push_back(std::vector<BoxIndex>(f.begin(), f.end()));
    }
    fibers.push_back({{"t", t}, {"adjacency", adj}});
  }
  return {{"grid", grid_->to_json()},
          {"path", path_->to_json()},
          {"family", family_->to_json()},
          {"outer", grid_->outer()},
          {"fibers", fibers}};
}

// ---------------------------------------------------------------------------

namespace {

struct AxisRange {
  int lo;
  int hi;
  bool leaves;
};

// Boxes along one axis meeting the closed interval [a, b].
AxisRange axis_range(const Grid& grid, std::size_t axis, double a, double b) {
  const int n = grid.subdivisions()[axis];
  if (!std::isfinite(a) || !std::isfinite(b)) return {0, n - 1, true};
  const double lo = grid.lo()[axis];
  const double hi = grid.hi()[axis];
  const double w = grid.width()[axis];
  AxisRange r{0, n - 1, a < lo || b > hi};
  if (b < lo || a > hi) return {1, 0, true};
  r.lo = std::max(0, static_cast<int>(std::floor((a - lo) / w - 1e-9)));
  r.hi = std::min(n - 1, static_cast<int>(std::floor((b - lo) / w + 1e-9)));
  return r;
}

std::vector<BoxIndex> product_targets(const Grid& grid, const std::vector<AxisRange>& ranges) {
  std::vector<BoxIndex> out;
  bool leaves = false;
  bool empty = false;
  for (const auto& r : ranges) {
    leaves = leaves || r.leaves;
    empty = empty || r.lo > r.hi;
  }
  if (!empty) {
    std::vector<int> multi(grid.dims());
    for (std::size_t i = 0; i < grid.dims(); ++i) multi[i] = ranges[i].lo;
    while (true) {
      out.push_back(grid.flatten(multi));
      std::size_t i = 0;
      for (; i < grid.dims(); ++i) {
        if (++multi[i] <= ranges[i].hi) break;
        multi[i] = ranges[i].lo;
      }
      if (i == grid.dims()) break;
    }
    std::sort(out.begin(), out.end());
  }
  if (leaves) out.push_back(grid.outer());
  return out;
}

}  // namespace

std::vector<BoxIndex> enclose_box(const MapFamily& f, const Grid& grid, BoxIndex b, std::span<const double> noise) {
  const std::size_t d = grid.dims();
  std::vector<AxisRange> ranges(d);
  if (f.mode() == EnclosureMode::interval) {
    std::vector<Interval> box(d);
    std::vector<Interval> img(d);
    for (std::size_t i = 0; i < d; ++i) box[i] = Interval(grid.box_lo(b, i), grid.box_hi(b, i));
    f.apply(std::span<const Interval>(box), noise, std::span<Interval>(img));
    for (std::size_t i = 0; i < d; ++i) ranges[i] = axis_range(grid, i, img[i].lo, img[i].hi);
  } else {
    const auto bound = f.lipschitz_bound();
    if (!bound) throw InputError(f.name() + ": Lipschitz enclosure needs a lipschitz_bound");
    const auto c = grid.center(b);
    std::vector<double> img(d);
    f.apply(std::span<const double>(c), noise, std::span<double>(img));
    const double wmin = *std::min_element(grid.width().begin(), grid.width().end());
    const int pad = static_cast<int>(std::ceil(*bound * grid.half_diagonal() / wmin)) + 1;
    for (std::size_t i = 0; i < d; ++i) {
      const int n = grid.subdivisions()[i];
      if (!std::isfinite(img[i])) {
        ranges[i] = {0, n - 1, true};
        continue;
      }
      const double virt = std::floor((img[i] - grid.lo()[i]) / grid.width()[i]);
      const double vlo = virt - pad;
      const double vhi = virt + pad;
      ranges[i] = {static_cast<int>(std::max(0.0, vlo)), static_cast<int>(std::min<double>(n - 1, vhi)),
                   vlo < 0 || vhi > n - 1};
    }
  }
  return product_targets(grid, ranges);
}

FiberedEnclosure build_enclosure(const MapFamily& f, GridPtr grid, const NoisePath& path) {
  if (f.dims() != grid->dims()) {
    throw InputError("build_enclosure: map has dimension " + std::to_string(f.dims()) + ", grid has " +
                     std::to_string(grid->dims()));
  }
  if (path.dims() != f.noise_dims()) {
    throw InputError("build_enclosure: " + f.name() + " needs " + std::to_string(f.noise_dims()) +
                     " noise coordinates, path has " + std::to_string(path.dims()));
  }
  const int T = path.half_window();
  for (int t = -T; t < T; ++t) {
    const auto v = path.value(t);
    if (!path.model().in_support(v)) throw InputError("build_enclosure: noise value outside model support");
    f.check_noise(v);
  }
  const auto steps = 2 * static_cast<std::size_t>(T);
  const auto n = grid->box_count();
  std::vector<std::vector<std::uint32_t>> offsets(steps);
  std::vector<std::vector<BoxIndex>> targets(steps);
  // One job per (fiber, chunk of boxes); chunks are stitched in order.
  constexpr std::size_t chunk = 512;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<std::vector<std::vector<BoxIndex>>> parts(steps, std::vector<std::vector<BoxIndex>>(chunks));
  std::vector<std::vector<std::uint32_t>> counts(steps, std::vector<std::uint32_t>(n));
  parallel_for(steps * chunks, [&](std::size_t job) {
    const std::size_t s = job / chunks;
    const std::size_t c = job % chunks;
    const auto noise = path.value(static_cast<int>(s) - T);
    auto& out = parts[s][c];
    for (std::size_t b = c * chunk; b < std::min(n, (c + 1) * chunk); ++b) {
      auto tg = enclose_box(f, *grid, static_cast<BoxIndex>(b), noise);
      counts[s][b] = static_cast<std::uint32_t>(tg.size());
      out.insert(out.end(), tg.begin(), tg.end());
    }
  });
  for (std::size_t s = 0; s < steps; ++s) {
    offsets[s].resize(n + 1);
    offsets[s][0] = 0;
    for (std::size_t b = 0; b < n; ++b) offsets[s][b + 1] = offsets[s][b] + counts[s][b];
    targets[s].reserve(offsets[s][n]);
    for (auto& p : parts[s]) targets[s].insert(targets[s].end(), p.begin(), p.end());
  }
  return {std::move(grid), std::make_shared<const NoisePath>(path), std::make_shared<const MapFamily>(f),
          std::move(offsets), std::move(targets)};
}

BoxSet iterate_image(const FiberedEnclosure& e, const BoxSet& start, int t0, int k) {
  if (k < 0) throw InputError("iterate_image: negative step count");
  if (t0 < -e.half_window() || t0 + k > e.half_window()) throw InputError("iterate_image: window exhausted");
  BoxSet cur = start;
  for (int i = 0; i < k; ++i) cur = e.image(t0 + i, cur);
  return cur;
}

BoxSet iterate_image(const FiberedEnclosure& e, const FiberedSet& d, int t0, int k) {
  if (!d.has_fiber(t0)) throw InputError("iterate_image: window exhausted");
  return iterate_image(e, d[t0], t0, k);
}

}  // namespace rconley
