#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rconley/conley.hpp"

namespace rconley {

enum class Monotone { none, nonincreasing, nondecreasing };
std::string to_string(Monotone m);

/// Base-point preserving relation from the nodes of a source graph on fiber t
/// into the nodes of a target graph on fiber t + offset(t). Fibers without an
/// offset are undefined.
class GraphMap {
 public:
  GraphMap() = default;
  GraphMap(GridPtr grid, int half_window, Monotone direction);

  int half_window() const { return half_window_; }
  const GridPtr& grid() const { return grid_; }
  Monotone direction() const { return direction_; }

  bool defined(int t) const;
  int offset(int t) const;
  /// Sets the relation on fiber t: images[k] is the target set of source node k.
  void define(int t, int offset, std::vector<BoxIndex> sources, std::vector<std::vector<BoxIndex>> images);

  std::span<const BoxIndex> sources(int t) const;
  std::span<const BoxIndex> image(int t, BoxIndex node) const;
  BoxSet apply(int t, const BoxSet& x) const;

  /// Removes target from the image of node on fiber t (mutation testing).
  void drop_edge(int t, BoxIndex node, BoxIndex target);

  bool monotone_ok() const;
  std::size_t edge_count() const;

  nlohmann::json to_json() const;
  static GraphMap from_json(const nlohmann::json& j, GridPtr grid);

 private:
  struct Fiber {
    int offset = -1;
    std::vector<BoxIndex> sources;
    std::vector<std::vector<BoxIndex>> images;
  };
  const Fiber& fiber(int t) const;
  Fiber& fiber(int t);

  GridPtr grid_;
  int half_window_ = 0;
  Monotone direction_ = Monotone::none;
  std::vector<Fiber> fibers_;
};

/// g after f; defined where both pieces are.
GraphMap compose(const GraphMap& f, const GraphMap& g);

enum class Verdict { equal, outer_consistent, failed, unchecked };
std::string to_string(Verdict v);

struct FiberVerdicts {
  int t = 0;
  Verdict well_formed = Verdict::unchecked;
  Verdict r_commutes = Verdict::unchecked;
  Verdict s_commutes = Verdict::unchecked;
  Verdict rs_power = Verdict::unchecked;
  Verdict sr_power = Verdict::unchecked;

  Verdict overall() const;
};

struct WitnessReport {
  std::vector<FiberVerdicts> fibers;  // one per fiber in the range
  FiberRange range;

  int count(Verdict v) const;
  bool verified() const { return count(Verdict::failed) == 0 && count(Verdict::equal) + count(Verdict::outer_consistent) > 0; }
  nlohmann::json to_json() const;
};

/// Checks quasi-commutativity of r and s (both adjustment branches) and the
/// identities r∘s = d^*, s∘r = c^* on the range. Containment in which the
/// composite side is the larger one is reported as outer-consistent.
WitnessReport verify_witness(const PointedGraph& c, const PointedGraph& d, const GraphMap& r, const GraphMap& s,
                             FiberRange range);

struct EquivalenceWitness {
  PointedGraph c;
  PointedGraph d;
  GraphMap r;
  GraphMap s;
  WitnessReport report;
  std::vector<std::string> steps;

  nlohmann::json to_json() const;
  static EquivalenceWitness from_json(const nlohmann::json& j);
};

/// Witness for (N, L_small) ~ (N ∪ L_big, L_big) with r the quotient collapse.
EquivalenceWitness collapse_witness(const FiberedEnclosure& e, const FiltrationPair& small,
                                    const FiltrationPair& big, FiberRange range);
/// Witness for (N_inner, L) ~ (N_outer, L) with r the inclusion.
EquivalenceWitness enlarge_witness(const FiberedEnclosure& e, const FiltrationPair& inner,
                                   const FiltrationPair& outer, FiberRange range);

/// Swaps the roles of the two graphs.
EquivalenceWitness reverse(const EquivalenceWitness& w, FiberRange range);
/// Transitivity: w1 from C to D and w2 from D to E give a witness from C to E.
EquivalenceWitness chain(const EquivalenceWitness& w1, const EquivalenceWitness& w2, FiberRange range);

/// Common-block construction between two filtration pairs of the same
/// invariant set.
EquivalenceWitness equivalence_via_common_block(const FiberedEnclosure& e, const FiltrationPair& p,
                                                const FiltrationPair& q, int eps_layers, FiberRange range);

}  // namespace rconley
