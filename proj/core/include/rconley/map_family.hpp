#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rconley/interval.hpp"

namespace rconley {

/// x_i -> a_i x_i with a_i read from noise coordinate i. For lambda < 1 the
/// coefficient is blended toward `nominal`.
struct RandomDiagonal {
  std::size_t dims = 2;
  std::vector<double> nominal;
};

/// Euler step of the logistic equation, r perturbed additively by noise.
struct RandomLogistic {
  double h = 0.1;
  double r = 0.8;
  double K = 1.0;
};

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  /// Planar (x, z) dynamics with y frozen at zero.
  bool reduced_y0 = false;
};

/// Euler step of Lorenz with sigma, rho, beta perturbed by three noise coordinates.
struct RandomLorenzEuler {
  double h = 0.05;
  LorenzParams params;
};

/// x -> A(xi) x + b(xi), A(xi) = A0 + lambda * sum_k xi_k A_k.
struct AffineMap {
  std::size_t dims = 1;
  std::vector<double> matrix;                     // row-major dims x dims
  std::vector<std::vector<double>> matrix_noise;  // one matrix per noise coordinate
  std::vector<double> offset;
  std::vector<std::vector<double>> offset_noise;
};

struct Monomial {
  std::vector<int> exponents;
  double coeff = 0.0;
  std::vector<double> noise_coeffs;  // coefficient += lambda * sum_k noise_coeffs[k] * xi_k
};

struct PolynomialMap {
  std::size_t dims = 1;
  std::size_t noise_dims = 1;
  std::vector<std::vector<Monomial>> components;
};

struct LorenzField {
  LorenzParams params;
};

/// dx/dt = A(xi) x.
struct LinearField {
  std::size_t dims = 1;
  std::vector<double> matrix;
  std::vector<std::vector<double>> matrix_noise;
};

struct LogisticField {
  double r = 0.8;
  double K = 1.0;
};

using OdeField = std::variant<LorenzField, LinearField, LogisticField>;

enum class Integrator { euler, rk4 };

/// Time-h map of an ODE by a fixed-step integrator (not validated against the flow).
struct TimeHMap {
  OdeField field;
  double h = 0.05;
  int substeps = 1;
  Integrator integrator = Integrator::euler;
};

enum class EnclosureMode { interval, lipschitz };

/// A lambda-parameterized family of random maps phi_lambda(xi, x), optionally
/// translated by a constant C^0 perturbation.
class MapFamily {
 public:
  using Kind = std::variant<RandomDiagonal, RandomLogistic, RandomLorenzEuler, AffineMap, PolynomialMap, TimeHMap>;

  explicit MapFamily(Kind kind, double lambda = 1.0);

  const Kind& kind() const { return kind_; }
  std::string name() const;
  std::size_t dims() const;
  std::size_t noise_dims() const;

  double lambda() const { return lambda_; }
  MapFamily with_lambda(double lambda) const;

  std::span<const double> offset() const { return offset_; }
  MapFamily with_offset(std::vector<double> offset) const;

  std::optional<double> lipschitz_bound() const { return lipschitz_; }
  MapFamily with_lipschitz(double bound) const;

  EnclosureMode mode() const { return mode_; }
  MapFamily with_mode(EnclosureMode mode) const;

  /// Throws InputError for noise values the family is not defined for.
  void check_noise(std::span<const double> noise) const;

  void apply(std::span<const double> x, std::span<const double> noise, std::span<double> out) const;
  void apply(std::span<const Interval> x, std::span<const double> noise, std::span<Interval> out) const;
  std::vector<double> operator()(std::span<const double> x, std::span<const double> noise) const;

  /// Closed-form inverse when the family has one.
  std::optional<std::vector<double>> inverse(std::span<const double> y, std::span<const double> noise) const;
  bool has_inverse() const;

  nlohmann::json to_json() const;
  static MapFamily from_json(const nlohmann::json& j);

 private:
  template <class T>
  void eval(std::span<const T> x, std::span<const double> noise, std::span<T> out) const;

  Kind kind_;
  double lambda_ = 1.0;
  std::vector<double> offset_;
  std::optional<double> lipschitz_;
  EnclosureMode mode_ = EnclosureMode::interval;
};

MapFamily make_builtin(const std::string& name, const nlohmann::json& params);

}  // namespace rconley
