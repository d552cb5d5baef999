#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rconley/enclosure.hpp"

namespace rconley {

enum class Check { pass, fail, unchecked };

std::string to_string(Check c);

struct FiberRange {
  int lo = 0;
  int hi = 0;
  bool contains(int t) const { return t >= lo && t <= hi; }
};

/// Fibers on which a truncated window of half-width T is trusted: [-T/2, T/2].
FiberRange reliable_range(int half_window);

/// One verdict per fiber t in [-T, T].
class FiberChecks {
 public:
  FiberChecks() = default;
  explicit FiberChecks(int half_window) : half_window_(half_window), flags_(2 * half_window + 1, Check::unchecked) {}

  int half_window() const { return half_window_; }
  Check at(int t) const { return flags_.at(static_cast<std::size_t>(t + half_window_)); }
  void set(int t, Check c) { flags_.at(static_cast<std::size_t>(t + half_window_)) = c; }
  void set(int t, bool ok) { set(t, ok ? Check::pass : Check::fail); }

  /// No fiber in the range failed and at least one passed.
  bool all_pass(FiberRange r) const;
  std::optional<int> first_failure(FiberRange r) const;

  nlohmann::json to_json() const;

 private:
  int half_window_ = 0;
  std::vector<Check> flags_;
};

struct InvResult {
  FiberedSet inv;
  int half_window = 0;
  FiberRange reliable;

  nlohmann::json to_json() const;
};

/// Two-sided reachability in the layered graph of N along the window: an
/// outer approximation of Inv N.
InvResult invariant_set(const FiberedEnclosure& e, const FiberedSet& n);

/// Union of the k-step images of D from fiber -k for k in [n0, T], at fiber 0.
BoxSet omega_limit(const FiberedEnclosure& e, const FiberedSet& d, int burn_in);

/// Boxes of N_t whose image is not inside int N_{t+1}. Computed by the direct
/// and the preimage formula; a disagreement throws.
BoxSet exit_set(const FiberedEnclosure& e, const FiberedSet& n, int t);
/// Exit sets on fibers [-T, T-1]; fiber T is left empty.
FiberedSet exit_sets(const FiberedEnclosure& e, const FiberedSet& n);

FiberChecks is_isolating_neighborhood(const FiberedEnclosure& e, const FiberedSet& n);
FiberChecks is_isolating_neighborhood(const InvResult& inv, const FiberedSet& n);
FiberChecks is_isolating_block(const FiberedEnclosure& e, const FiberedSet& n);

FiberedSet chain_neighborhood(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& s, int eps_layers);

/// Chain neighborhood verified as an isolating block on the range; retries with
/// fewer layers before giving up.
struct BlockResult {
  FiberedSet block;
  int eps_layers = 0;
  FiberChecks block_checks;
};
BlockResult block_from_chain(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& s, int eps_layers,
                             FiberRange range);

struct AxiomReport {
  FiberChecks isolating;    // Inv(N\L) inside int(N\L)
  FiberChecks exit_collar;  // dilate(exit, 1) ∩ N inside L
  FiberChecks l_closed;     // image(L) misses N\L
  bool degenerate = false;  // N\L empty on every fiber

  bool valid_on(FiberRange r) const;
  std::optional<int> first_failure(FiberRange r) const;
  nlohmann::json to_json() const;
};

struct FiltrationPair {
  FiberedSet n;
  FiberedSet l;
  int dilation = 0;
  AxiomReport axioms;

  nlohmann::json to_json() const;
};

AxiomReport verify_filtration_pair(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& l);
inline AxiomReport verify_filtration_pair(const FiberedEnclosure& e, const FiltrationPair& p) {
  return verify_filtration_pair(e, p.n, p.l);
}

/// L_t = dilate(exit_t, k) ∩ B_t with k lowered until the axioms hold on the range.
FiltrationPair build_filtration_pair(const FiberedEnclosure& e, const FiberedSet& block, int dilation,
                                     FiberRange range);
/// Wraps a given pair with its axiom report.
FiltrationPair make_filtration_pair(const FiberedEnclosure& e, FiberedSet n, FiberedSet l);

/// Quotient graph of a filtration pair: per fiber, the boxes of N\L plus the
/// base point, which reuses the grid's outer index.
class PointedGraph {
 public:
  PointedGraph(GridPtr grid, int half_window, std::vector<BoxSet> nodes,
               std::vector<std::vector<std::vector<BoxIndex>>> successors);

  const GridPtr& grid() const { return grid_; }
  int half_window() const { return half_window_; }
  BoxIndex star() const { return grid_->outer(); }

  /// Node set of fiber t; the outer flag stands for the base point.
  const BoxSet& nodes(int t) const;
  std::span<const BoxIndex> node_list(int t) const;
  std::span<const BoxIndex> successors(int t, BoxIndex node) const;
  bool has_node(int t, BoxIndex node) const;

  BoxSet step(int t, const BoxSet& x) const;
  BoxSet power(int t, int k, const BoxSet& x) const;

  /// Per fiber: boxes adjacent to L map only to the base point.
  const FiberChecks& collar() const { return collar_; }
  void set_collar(FiberChecks c) { collar_ = std::move(c); }

  std::size_t edge_count() const;
  nlohmann::json to_json() const;
  static PointedGraph from_json(const nlohmann::json& j);

 private:
  std::size_t slot(int t) const;
  int position(int t, BoxIndex node) const;

  GridPtr grid_;
  int half_window_;
  std::vector<BoxSet> nodes_;
  std::vector<std::vector<BoxIndex>> node_lists_;
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<BoxIndex>> targets_;
  FiberChecks collar_;
};

PointedGraph pointed_map(const FiberedEnclosure& e, const FiltrationPair& p);
PointedGraph pointed_map(const FiberedEnclosure& e, const FiberedSet& n, const FiberedSet& l);

/// Per fiber, least n with t+n <= T such that every n-step path from the
/// non-base nodes of fiber t ends at the base point.
std::vector<std::optional<int>> absorption_times(const PointedGraph& g);
/// Same, restricted to the given start sets (one per fiber).
std::vector<std::optional<int>> absorption_times(const PointedGraph& g, const FiberedSet& start);

enum class IndexVerdict { trivial_certified, no_certificate, nonempty_invariant_evidence };
std::string to_string(IndexVerdict v);

struct IndexCertificate {
  IndexVerdict verdict = IndexVerdict::no_certificate;
  std::optional<int> horizon;
  std::vector<std::optional<int>> absorption;  // index t + T
  FiberRange range;
  bool invariant_nonempty = false;

  nlohmann::json to_json() const;
};

IndexCertificate index_certificate(const PointedGraph& g, FiberRange range);

/// Inv over the non-base nodes of the graph.
FiberedSet graph_invariant_set(const PointedGraph& g);

struct RandomMetric {
  std::vector<double> values;  // fibers [-T+1, T-1], index t + T - 1
  bool inverse_term = true;
  double max_on(FiberRange r) const;
  nlohmann::json to_json() const;
};

/// Sampled surrogate of the random metric between f and g on N.
RandomMetric random_metric(const MapFamily& f, const MapFamily& g, const FiberedSet& n, const NoisePath& path,
                           int samples, std::uint64_t seed, bool strict = false);

struct RobustnessReport {
  double metric = 0.0;
  AxiomReport axioms;
  bool holds = false;
  std::optional<int> failing_fiber;
  nlohmann::json to_json() const;
};

RobustnessReport robustness_check(const FiberedEnclosure& e_f, const FiltrationPair& p, const MapFamily& g,
                                  FiberRange range, int samples = 200);

}  // namespace rconley
