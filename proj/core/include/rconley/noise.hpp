#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace rconley {

struct UniformNoise {
  double a = 0.0;
  double b = 1.0;
};

struct DiscreteNoise {
  std::vector<double> values;
  std::vector<double> weights;
};

struct ConstantNoise {
  std::vector<double> value;  // one entry per noise coordinate
};

/// Stationary i.i.d. noise driving the sampled metric dynamical system.
/// Every coordinate of a step is drawn independently from the same law.
class NoiseModel {
 public:
  using Kind = std::variant<UniformNoise, DiscreteNoise, ConstantNoise>;

  NoiseModel(Kind kind, std::size_t dims);

  static NoiseModel uniform(double a, double b, std::size_t dims) { return {UniformNoise{a, b}, dims}; }
  static NoiseModel constant(std::vector<double> c) {
    const auto d = c.size();
    return {ConstantNoise{std::move(c)}, d};
  }
  static NoiseModel discrete(std::vector<double> values, std::vector<double> weights, std::size_t dims) {
    return {DiscreteNoise{std::move(values), std::move(weights)}, dims};
  }

  std::size_t dims() const { return dims_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  /// I.i.d. shifts are Bernoulli and hence ergodic; constant noise is a one-point space.
  bool ergodic_by_construction() const { return true; }

  /// Draw of step t under the given seed; depends only on (seed, t).
  std::vector<double> draw(std::uint64_t seed, std::int64_t t) const;

  bool in_support(std::span<const double> v) const;

  nlohmann::json to_json() const;
  static NoiseModel from_json(const nlohmann::json& j);

 private:
  Kind kind_;
  std::size_t dims_;
};

/// Finite window of a noise realization: values[t] for t in [-T, T-1] drive
/// the step from fiber t to fiber t+1.
class NoisePath {
 public:
  NoisePath(NoiseModel model, std::uint64_t seed, int half_window, std::int64_t origin,
            std::vector<double> values);

  const NoiseModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  int half_window() const { return half_window_; }
  /// Absolute step index of fiber 0 (nonzero after shifting).
  std::int64_t origin() const { return origin_; }
  std::size_t dims() const { return model_.dims(); }

  std::span<const double> value(int t) const;

  bool operator==(const NoisePath& o) const;

  nlohmann::json to_json() const;
  static NoisePath from_json(const nlohmann::json& j);

 private:
  NoiseModel model_;
  std::uint64_t seed_;
  int half_window_;
  std::int64_t origin_;
  std::vector<double> values_;
};

NoisePath sample_path(const NoiseModel& model, std::uint64_t seed, int half_window);

/// Reindexes so the new fiber t reads the old fiber t+k; the window shrinks to T-|k|.
NoisePath shift(const NoisePath& path, int k);

}  // namespace rconley
