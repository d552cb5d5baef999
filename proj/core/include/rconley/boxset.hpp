#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rconley {

using BoxIndex = std::uint32_t;

/// Uniform rectangular subdivision of a bounded phase-space domain.
///
/// Boxes are addressed by a flat index in [0, box_count()); the flat index
/// box_count() is reserved for the cell "outside the domain".
class Grid {
 public:
  Grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> subdivisions);

  std::size_t dims() const { return lo_.size(); }
  std::span<const double> lo() const { return lo_; }
  std::span<const double> hi() const { return hi_; }
  std::span<const double> width() const { return width_; }
  std::span<const int> subdivisions() const { return subdivisions_; }
  std::size_t box_count() const { return box_count_; }
  BoxIndex outer() const { return static_cast<BoxIndex>(box_count_); }

  /// Half-open cell location; the upper domain face belongs to the last box.
  /// Returns outer() for points outside the domain (and for NaN).
  BoxIndex locate(std::span<const double> p) const;

  BoxIndex flatten(std::span<const int> multi) const;
  std::vector<int> unflatten(BoxIndex b) const;

  double box_lo(BoxIndex b, std::size_t axis) const;
  double box_hi(BoxIndex b, std::size_t axis) const;
  std::vector<double> center(BoxIndex b) const;
  /// Half of the box diagonal.
  double half_diagonal() const;
  bool on_boundary(BoxIndex b) const;

  bool operator==(const Grid& other) const;

  nlohmann::json to_json() const;
  static std::shared_ptr<const Grid> from_json(const nlohmann::json& j);

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<int> subdivisions_;
  std::vector<double> width_;
  std::vector<std::size_t> stride_;
  std::size_t box_count_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> subdivisions);

/// A finite union of closed grid boxes, optionally together with the outer cell.
class BoxSet {
 public:
  BoxSet() = default;
  explicit BoxSet(GridPtr grid);
  BoxSet(GridPtr grid, std::span<const BoxIndex> members);

  static BoxSet full(GridPtr grid);

  const GridPtr& grid() const { return grid_; }

  bool contains(BoxIndex b) const;
  bool contains_outer() const { return outer_; }
  void insert(BoxIndex b);
  void erase(BoxIndex b);

  /// Number of in-domain boxes.
  std::size_t size() const;
  /// True when neither boxes nor the outer cell are present.
  bool empty() const;
  bool has_boxes() const;

  BoxSet& operator|=(const BoxSet& o);
  BoxSet& operator&=(const BoxSet& o);
  BoxSet& operator-=(const BoxSet& o);
  friend BoxSet operator|(BoxSet a, const BoxSet& b) { return a |= b; }
  friend BoxSet operator&(BoxSet a, const BoxSet& b) { return a &= b; }
  friend BoxSet operator-(BoxSet a, const BoxSet& b) { return a -= b; }

  /// Complement in domain ∪ {outer}.
  BoxSet complement() const;
  /// Same set without the outer cell.
  BoxSet in_domain() const;

  bool subset_of(const BoxSet& o) const;
  bool intersects(const BoxSet& o) const;
  bool operator==(const BoxSet& o) const;

  std::vector<BoxIndex> indices() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        f(static_cast<BoxIndex>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  nlohmann::json to_json() const;
  static BoxSet from_json(const nlohmann::json& j, GridPtr grid = nullptr);
  /// One row per box: index, then lo/hi per axis.
  std::string to_csv() const;

 private:
  void check_same_grid(const BoxSet& o) const;

  GridPtr grid_;
  std::vector<std::uint64_t> words_;
  bool outer_ = false;
};

/// Boxes of b whose full Moore neighborhood lies in b and that do not touch
/// the domain boundary.
BoxSet interior(const BoxSet& b);
/// Moore dilation by k layers, clipped to the domain. The outer flag is kept.
BoxSet dilate(const BoxSet& b, int k);
/// Drops boxes that are not adjacent to the interior.
BoxSet regularize(const BoxSet& b);

/// max over a-box centers of min distance to b-box centers. Outer cells are ignored.
double hausdorff_semidist(const BoxSet& a, const BoxSet& b);
double hausdorff_dist(const BoxSet& a, const BoxSet& b);

/// Boxes meeting the closed Euclidean ball.
BoxSet boxes_meeting_ball(GridPtr grid, std::span<const double> center, double radius);
/// Boxes meeting the closed product set prod [lo_i, hi_i].
BoxSet boxes_meeting_product(GridPtr grid, std::span<const double> lo, std::span<const double> hi);

}  // namespace rconley
