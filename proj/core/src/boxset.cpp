#include "rconley/boxset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rconley/error.hpp"

namespace rconley {

Grid::Grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> subdivisions)
    : lo_(std::move(lo)), hi_(std::move(hi)), subdivisions_(std::move(subdivisions)) {
  if (lo_.empty() || lo_.size() != hi_.size() || lo_.size() != subdivisions_.size()) {
    throw InputError("grid: lo, hi and subdivisions must have the same positive length");
  }
  width_.resize(dims());
  stride_.resize(dims());
  box_count_ = 1;
  for (std::size_t i = 0; i < dims(); ++i) {
    if (!(lo_[i] < hi_[i]) || !std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) {
      throw InputError("grid: need finite lo < hi on axis " + std::to_string(i));
    }
    if (subdivisions_[i] < 2) {
      throw InputError("grid: need at least 2 subdivisions on axis " + std::to_string(i));
    }
    width_[i] = (hi_[i] - lo_[i]) / subdivisions_[i];
    stride_[i] = box_count_;
    box_count_ *= static_cast<std::size_t>(subdivisions_[i]);
  }
  if (box_count_ >= std::numeric_limits<BoxIndex>::max()) {
    throw InputError("grid: too many boxes");
  }
}

BoxIndex Grid::locate(std::span<const double> p) const {
  if (p.size() != dims()) {
    throw InputError("locate: point has " + std::to_string(p.size()) + " coordinates, grid has " +
                     std::to_string(dims()));
  }
  BoxIndex flat = 0;
  for (std::size_t i = 0; i < dims(); ++i) {
    const double x = p[i];
    if (!(x >= lo_[i] && x <= hi_[i])) return outer();
    const int n = subdivisions_[i];
    int k = x == hi_[i] ? n - 1 : static_cast<int>(std::floor((x - lo_[i]) / width_[i]));
    k = std::clamp(k, 0, n - 1);
    // Settle rounding against the stored box bounds.
    while (k > 0 && x < lo_[i] + k * width_[i]) --k;
    while (k < n - 1 && x >= lo_[i] + (k + 1) * width_[i]) ++k;
    flat += static_cast<BoxIndex>(static_cast<std::size_t>(k) * stride_[i]);
  }
  return flat;
}

BoxIndex Grid::flatten(std::span<const int> multi) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims(); ++i) {
    if (multi[i] < 0 || multi[i] >= subdivisions_[i]) throw InputError("flatten: index out of range");
    flat += static_cast<std::size_t>(multi[i]) * stride_[i];
  }
  return static_cast<BoxIndex>(flat);
}

std::vector<int> Grid::unflatten(BoxIndex b) const {
  std::vector<int> multi(dims());
  std::size_t rest = b;
  for (std::size_t i = 0; i < dims(); ++i) {
    multi[i] = static_cast<int>(rest % static_cast<std::size_t>(subdivisions_[i]));
    rest /= static_cast<std::size_t>(subdivisions_[i]);
  }
  return multi;
}

double Grid::box_lo(BoxIndex b, std::size_t axis) const {
  const auto k = (b / stride_[axis]) % static_cast<std::size_t>(subdivisions_[axis]);
  return lo_[axis] + static_cast<double>(k) * width_[axis];
}

double Grid::box_hi(BoxIndex b, std::size_t axis) const {
  const auto k = (b / stride_[axis]) % static_cast<std::size_t>(subdivisions_[axis]);
  return k + 1 == static_cast<std::size_t>(subdivisions_[axis])
             ? hi_[axis]
             : lo_[axis] + static_cast<double>(k + 1) * width_[axis];
}

std::vector<double> Grid::center(BoxIndex b) const {
  std::vector<double> c(dims());
  for (std::size_t i = 0; i < dims(); ++i) c[i] = 0.5 * (box_lo(b, i) + box_hi(b, i));
  return c;
}

double Grid::half_diagonal() const {
  double s = 0.0;
  for (double w : width_) s += w * w;
  return 0.5 * std::sqrt(s);
}

bool Grid::on_boundary(BoxIndex b) const {
  for (std::size_t i = 0; i < dims(); ++i) {
    const auto k = (b / stride_[i]) % static_cast<std::size_t>(subdivisions_[i]);
    if (k == 0 || k + 1 == static_cast<std::size_t>(subdivisions_[i])) return true;
  }
  return false;
}

bool Grid::operator==(const Grid& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && subdivisions_ == other.subdivisions_;
}

nlohmann::json Grid::to_json() const {
  return {{"lo", lo_}, {"hi", hi_}, {"subdivisions", subdivisions_}};
}

GridPtr Grid::from_json(const nlohmann::json& j) {
  return make_grid(j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>(),
                   j.at("subdivisions").get<std::vector<int>>());
}

GridPtr make_grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> subdivisions) {
  return std::make_shared<const Grid>(std::move(lo), std::move(hi), std::move(subdivisions));
}

// ---------------------------------------------------------------------------

BoxSet::BoxSet(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw InputError("BoxSet: null grid");
  words_.assign((grid_->box_count() + 63) / 64, 0);
}

BoxSet::BoxSet(GridPtr grid, std::span<const BoxIndex> members) : BoxSet(std::move(grid)) {
  for (BoxIndex b : members) insert(b);
}

BoxSet BoxSet::full(GridPtr grid) {
  BoxSet s(std::move(grid));
  const std::size_t n = s.grid_->box_count();
  for (std::size_t w = 0; w < s.words_.size(); ++w) {
    const std::size_t used = std::min<std::size_t>(64, n - w * 64);
    s.words_[w] = used == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << used) - 1);
  }
  return s;
}

bool BoxSet::contains(BoxIndex b) const {
  if (b == grid_->outer()) return outer_;
  if (b > grid_->outer()) return false;
  return (words_[b / 64] >> (b % 64)) & 1U;
}

void BoxSet::insert(BoxIndex b) {
  if (b == grid_->outer()) {
    outer_ = true;
    return;
  }
  if (b > grid_->outer()) throw InputError("BoxSet: index " + std::to_string(b) + " out of grid");
  words_[b / 64] |= std::uint64_t{1} << (b % 64);
}

void BoxSet::erase(BoxIndex b) {
  if (b == grid_->outer()) {
    outer_ = false;
    return;
  }
  if (b > grid_->outer()) return;
  words_[b / 64] &= ~(std::uint64_t{1} << (b % 64));
}

std::size_t BoxSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

bool BoxSet::has_boxes() const {
  return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
}

bool BoxSet::empty() const { return !outer_ && !has_boxes(); }

void BoxSet::check_same_grid(const BoxSet& o) const {
  if (grid_ != o.grid_ && !(grid_ && o.grid_ && *grid_ == *o.grid_)) {
    throw InputError("BoxSet: operands live on different grids");
  }
}

BoxSet& BoxSet::operator|=(const BoxSet& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  outer_ = outer_ || o.outer_;
  return *this;
}

BoxSet& BoxSet::operator&=(const BoxSet& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  outer_ = outer_ && o.outer_;
  return *this;
}

BoxSet& BoxSet::operator-=(const BoxSet& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  outer_ = outer_ && !o.outer_;
  return *this;
}

BoxSet BoxSet::complement() const {
  BoxSet c = full(grid_);
  for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] &= ~words_[i];
  c.outer_ = !outer_;
  return c;
}

BoxSet BoxSet::in_domain() const {
  BoxSet c = *this;
  c.outer_ = false;
  return c;
}

bool BoxSet::subset_of(const BoxSet& o) const {
  check_same_grid(o);
  if (outer_ && !o.outer_) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~o.words_[i]) != 0) return false;
  }
  return true;
}

bool BoxSet::intersects(const BoxSet& o) const {
  check_same_grid(o);
  if (outer_ && o.outer_) return true;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & o.words_[i]) != 0) return true;
  }
  return false;
}

bool BoxSet::operator==(const BoxSet& o) const {
  if (!grid_ || !o.grid_) return !grid_ && !o.grid_;
  check_same_grid(o);
  return outer_ == o.outer_ && words_ == o.words_;
}

std::vector<BoxIndex> BoxSet::indices() const {
  std::vector<BoxIndex> out;
  out.reserve(size());
  for_each([&](BoxIndex b) { out.push_back(b); });
  return out;
}

nlohmann::json BoxSet::to_json() const {
  nlohmann::json boxes = nlohmann::json::array();
  for_each([&](BoxIndex b) { boxes.push_back(grid_->unflatten(b)); });
  return {{"grid", grid_->to_json()}, {"boxes", std::move(boxes)}, {"outer", outer_}};
}

BoxSet BoxSet::from_json(const nlohmann::json& j, GridPtr grid) {
  if (!grid) grid = Grid::from_json(j.at("grid"));
  BoxSet s(grid);
  for (const auto& m : j.at("boxes")) {
    const auto multi = m.get<std::vector<int>>();
    if (multi.size() != grid->dims()) throw InputError("BoxSet json: wrong multi-index length");
    s.insert(grid->flatten(multi));
  }
  s.outer_ = j.value("outer", false);
  return s;
}

std::string BoxSet::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "box";
  for (std::size_t i = 0; i < grid_->dims(); ++i) os << ",lo" << i << ",hi" << i;
  os << '\n';
  for_each([&](BoxIndex b) {
    os << b;
    for (std::size_t i = 0; i < grid_->dims(); ++i) os << ',' << grid_->box_lo(b, i) << ',' << grid_->box_hi(b, i);
    os << '\n';
  });
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// Separable morphology along one axis: dilate (grow=true) or erode by radius k.
// Out-of-domain neighbors count as absent.
std::vector<char> axis_pass(const Grid& g, const std::vector<char>& in, std::size_t axis, int k, bool grow) {
  const std::size_t n = g.box_count();
  const auto len = static_cast<std::size_t>(g.subdivisions()[axis]);
  std::size_t stride = 1;
  for (std::size_t i = 0; i < axis; ++i) stride *= static_cast<std::size_t>(g.subdivisions()[i]);
  std::vector<char> out(n, 0);
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / stride) % len != 0) continue;  // first element of a line
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t from = p >= static_cast<std::size_t>(k) ? p - static_cast<std::size_t>(k) : 0;
      const std::size_t to = std::min(len - 1, p + static_cast<std::size_t>(k));
      bool v = !grow;
      if (grow) {
        for (std::size_t q = from; q <= to && !v; ++q) v = in[base + q * stride] != 0;
      } else {
        if (p < static_cast<std::size_t>(k) || p + static_cast<std::size_t>(k) >= len) {
          v = false;
        } else {
          for (std::size_t q = from; q <= to && v; ++q) v = in[base + q * stride] != 0;
        }
      }
      out[base + p * stride] = v ? 1 : 0;
    }
  }
  return out;
}

std::vector<char> to_mask(const BoxSet& b) {
  std::vector<char> m(b.grid()->box_count(), 0);
  b.for_each([&](BoxIndex i) { m[i] = 1; });
  return m;
}

BoxSet from_mask(const GridPtr& g, const std::vector<char>& m, bool outer) {
  BoxSet s(g);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) s.insert(static_cast<BoxIndex>(i));
  }
  if (outer) s.insert(g->outer());
  return s;
}

}  // namespace

BoxSet interior(const BoxSet& b) {
  const auto& g = b.grid();
  auto m = to_mask(b);
  for (std::size_t axis = 0; axis < g->dims(); ++axis) m = axis_pass(*g, m, axis, 1, false);
  return from_mask(g, m, false);
}

BoxSet dilate(const BoxSet& b, int k) {
  if (k < 0) throw InputError("dilate: negative layer count");
  if (k == 0 || !b.has_boxes()) return b;
  const auto& g = b.grid();
  auto m = to_mask(b);
  for (std::size_t axis = 0; axis < g->dims(); ++axis) m = axis_pass(*g, m, axis, k, true);
  return from_mask(g, m, b.contains_outer());
}

BoxSet regularize(const BoxSet& b) { return b & dilate(interior(b), 1); }

double hausdorff_semidist(const BoxSet& a, const BoxSet& b) {
  if (!b.has_boxes()) throw InputError("hausdorff_semidist: empty target");
  const auto& g = *a.grid();
  const auto bs = b.indices();
  std::vector<std::vector<double>> bc;
  bc.reserve(bs.size());
  for (auto i : bs) bc.push_back(g.center(i));
  double worst = 0.0;
  a.for_each([&](BoxIndex i) {
    if (b.contains(i)) return;
    const auto ca = g.center(i);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : bc) {
      double s = 0.0;
      for (std::size_t d = 0; d < ca.size(); ++d) s += (ca[d] - c[d]) * (ca[d] - c[d]);
      best = std::min(best, s);
    }
    worst = std::max(worst, best);
  });
  return std::sqrt(worst);
}

double hausdorff_dist(const BoxSet& a, const BoxSet& b) {
  return std::max(hausdorff_semidist(a, b), hausdorff_semidist(b, a));
}

BoxSet boxes_meeting_ball(GridPtr grid, std::span<const double> center, double radius) {
  if (center.size() != grid->dims()) throw InputError("ball: center dimension mismatch");
  BoxSet s(grid);
  for (std::size_t b = 0; b < grid->box_count(); ++b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < grid->dims(); ++i) {
      const double lo = grid->box_lo(static_cast<BoxIndex>(b), i);
      const double hi = grid->box_hi(static_cast<BoxIndex>(b), i);
      const double nearest = std::clamp(center[i], lo, hi);
      d2 += (nearest - center[i]) * (nearest - center[i]);
    }
    if (d2 <= radius * radius) s.insert(static_cast<BoxIndex>(b));
  }
  return s;
}

BoxSet boxes_meeting_product(GridPtr grid, std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != grid->dims() || hi.size() != grid->dims()) {
    throw InputError("product set: dimension mismatch");
  }
  BoxSet s(grid);
  for (std::size_t b = 0; b < grid->box_count(); ++b) {
    bool meets = true;
    for (std::size_t i = 0; i < grid->dims() && meets; ++i) {
      meets = grid->box_hi(static_cast<BoxIndex>(b), i) >= lo[i] && grid->box_lo(static_cast<BoxIndex>(b), i) <= hi[i];
    }
    if (meets) s.insert(static_cast<BoxIndex>(b));
  }
  return s;
}

}  // namespace rconley
