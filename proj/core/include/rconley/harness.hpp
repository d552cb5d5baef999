#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rconley/conley.hpp"
#include "rconley/map_family.hpp"
#include "rconley/noise.hpp"

namespace rconley {

/// Geometric predicate selecting the boxes of a grid: a closed ball, a
/// product of closed intervals, or (1D shorthand) a single interval.
class Region {
 public:
  static Region ball(std::vector<double> center, double radius);
  static Region product(std::vector<double> lo, std::vector<double> hi);

  BoxSet boxes(const GridPtr& grid) const;

  nlohmann::json to_json() const;
  static Region from_json(const nlohmann::json& j);

 private:
  enum class Shape { ball, product };
  Shape shape_ = Shape::ball;
  std::vector<double> a_;
  std::vector<double> b_;
  double radius_ = 0.0;
};

/// Inv at fiber 0 must lie within `layers` Moore layers of the box holding `point`.
struct InvTarget {
  std::vector<double> point;
  int layers = 0;

  BoxSet boxes(const GridPtr& grid) const;
  nlohmann::json to_json() const;
  static InvTarget from_json(const nlohmann::json& j);
};

struct SweepConfig {
  MapFamily system{RandomDiagonal{}};
  NoiseModel noise = NoiseModel::uniform(0.0, 1.0, 2);
  GridPtr grid;
  int half_window = 16;
  std::vector<double> lambdas{1.0};
  std::vector<std::uint64_t> seeds{0};
  Region n = Region::ball({0.0, 0.0}, 1.0);
  /// Subset of {isolating, block, pair, certificate, witness}.
  std::set<std::string> checks{"isolating"};
  std::optional<InvTarget> target;
  int pair_dilation = 2;
  int eps_layers = 2;
  /// The user vouches for a nontrivial index of the lambda = 0 system.
  bool asserted_nontrivial = false;

  /// Throws InputError naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  static SweepConfig from_json(const nlohmann::json& j);
};

struct CellResult {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool isolating = false;
  std::optional<int> isolating_failure;
  std::size_t inv_boxes = 0;  // fiber 0
  bool inv_nonempty = false;  // every reliable fiber
  std::optional<bool> inv_in_target;
  int exit_nonempty_fibers = 0;  // over [-T, T-1]
  int exit_fibers = 0;
  std::optional<bool> block;
  std::optional<int> pair_dilation;
  std::optional<IndexCertificate> certificate;
  std::optional<bool> witness;
  std::string pair_error;
  std::string error;

  /// One of the sweep checks, or "target" for the Inv containment.
  bool passed_check(const std::string& check) const;
  bool passed(const std::set<std::string>& checks) const;
  nlohmann::json to_json() const;
};

struct WazewskiReport {
  std::string verdict;
  bool conclusion = false;
  std::string basis;
  std::string ergodicity;
  double nonempty_fraction = 0.0;
  int paths = 0;

  nlohmann::json to_json() const;
};

/// Nonemptiness inference from a nontrivial index along sampled paths.
WazewskiReport wazewski_report(std::span<const IndexCertificate> certs, std::span<const InvResult> invs,
                               const NoiseModel& model, bool continuation_ok, bool asserted_nontrivial);
WazewskiReport wazewski_report(const IndexCertificate& cert, const InvResult& inv, const NoiseModel& model,
                               bool continuation_ok = true, bool asserted_nontrivial = false);

struct EnsembleReport {
  nlohmann::json config;
  std::vector<CellResult> cells;  // sorted by (lambda, seed)
  std::set<std::string> checks;
  bool continuation_ok = false;
  std::vector<std::string> hypothesis_failures;
  std::vector<std::string> conclusions;
  std::vector<std::string> anomalies;
  std::optional<WazewskiReport> wazewski;

  double pass_fraction(const std::string& check) const;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

EnsembleReport continuation_sweep(const SweepConfig& cfg);

struct TimeHEntry {
  double h = 0.0;
  EnsembleReport sweep;
  /// (seed, fiber) pairs where the integrator produced non-finite or runaway values on N.
  std::vector<std::pair<std::uint64_t, int>> rejections;
  bool isolating() const { return sweep.continuation_ok; }
};

struct TimeHReport {
  std::vector<TimeHEntry> entries;
  bool inference = false;
  std::vector<std::string> conclusions;
  std::vector<std::string> caveats;

  nlohmann::json to_json() const;
};

TimeHReport time_h_check(const OdeField& field, std::span<const double> h_list, Integrator integrator, int substeps,
                         const SweepConfig& rest);

struct PerturbationEntry {
  double delta = 0.0;
  double metric = 0.0;
  bool holds = false;
  /// Passing and no smaller delta failed.
  bool reported_pass = false;
  std::optional<int> failing_fiber;
};

struct PerturbationReport {
  std::vector<PerturbationEntry> entries;  // ascending delta
  std::optional<double> radius;            // largest reported pass
  std::optional<double> cutoff;            // smallest failure
  bool monotone = true;                    // no raw pass above the cutoff

  nlohmann::json to_json() const;
};

/// Translates the base map by delta along the first coordinate and re-verifies P.
PerturbationReport perturbation_sweep(const FiberedEnclosure& base, std::span<const double> deltas,
                                      const FiltrationPair& p, FiberRange range, int samples = 200);

}  // namespace rconley
