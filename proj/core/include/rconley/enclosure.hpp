#pragma once

#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rconley/boxset.hpp"
#include "rconley/map_family.hpp"
#include "rconley/noise.hpp"

namespace rconley {

/// One box set per fiber t in [-T, T].
class FiberedSet {
 public:
  FiberedSet() = default;
  FiberedSet(GridPtr grid, int half_window);

  /// The same set on every fiber.
  static FiberedSet constant(const BoxSet& set, int half_window);

  const GridPtr& grid() const { return grid_; }
  int half_window() const { return half_window_; }
  bool has_fiber(int t) const { return t >= -half_window_ && t <= half_window_; }

  const BoxSet& operator[](int t) const;
  BoxSet& operator[](int t);

  bool subset_of(const FiberedSet& o) const;
  bool operator==(const FiberedSet& o) const;
  bool all_empty() const;

  FiberedSet& operator|=(const FiberedSet& o);
  FiberedSet& operator&=(const FiberedSet& o);
  FiberedSet& operator-=(const FiberedSet& o);
  friend FiberedSet operator|(FiberedSet a, const FiberedSet& b) { return a |= b; }
  friend FiberedSet operator&(FiberedSet a, const FiberedSet& b) { return a &= b; }
  friend FiberedSet operator-(FiberedSet a, const FiberedSet& b) { return a -= b; }

  nlohmann::json to_json() const;
  static FiberedSet from_json(const nlohmann::json& j);

 private:
  void check_compatible(const FiberedSet& o) const;

  GridPtr grid_;
  int half_window_ = 0;
  std::vector<BoxSet> sets_;
};

FiberedSet dilate(const FiberedSet& s, int k);
FiberedSet interior(const FiberedSet& s);

/// Per-fiber combinatorial multivalued map outer-enclosing the random map
/// along a sampled noise window. The outer cell maps to itself.
class FiberedEnclosure {
 public:
  FiberedEnclosure(GridPtr grid, std::shared_ptr<const NoisePath> path, std::shared_ptr<const MapFamily> family,
                   std::vector<std::vector<std::uint32_t>> offsets, std::vector<std::vector<BoxIndex>> targets);

  const GridPtr& grid() const { return grid_; }
  const NoisePath& path() const { return *path_; }
  const std::shared_ptr<const NoisePath>& path_ptr() const { return path_; }
  const MapFamily& family() const { return *family_; }
  int half_window() const { return path_->half_window(); }
  /// Fibers with a forward map: [-T, T-1].
  bool has_step(int t) const { return t >= -half_window() && t < half_window(); }

  /// Sorted targets on fiber t+1 of box b (the outer cell maps to itself).
  std::span<const BoxIndex> forward(int t, BoxIndex b) const;

  BoxSet image(int t, const BoxSet& b) const;
  /// {b on fiber t : forward_t(b) meets target}; includes the outer cell when
  /// target does.
  BoxSet preimage(int t, const BoxSet& target) const;

  std::size_t edge_count() const;

  nlohmann::json to_json() const;

 private:
  const std::vector<std::uint32_t>& offsets(int t) const;

  GridPtr grid_;
  std::shared_ptr<const NoisePath> path_;
  std::shared_ptr<const MapFamily> family_;
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<BoxIndex>> targets_;
  std::vector<BoxIndex> outer_self_;
};

FiberedEnclosure build_enclosure(const MapFamily& f, GridPtr grid, const NoisePath& path);

/// k-fold forward image of D at fiber t0, landing on fiber t0+k.
BoxSet iterate_image(const FiberedEnclosure& e, const FiberedSet& d, int t0, int k);
BoxSet iterate_image(const FiberedEnclosure& e, const BoxSet& start, int t0, int k);

/// Box targets of a single box under the family at one noise value; shared by
/// the enclosure builder and tests.
std::vector<BoxIndex> enclose_box(const MapFamily& f, const Grid& grid, BoxIndex b, std::span<const double> noise);

}  // namespace rconley
