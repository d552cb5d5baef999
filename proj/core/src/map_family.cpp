#include "rconley/map_family.hpp"

#include <cmath>

#include "rconley/error.hpp"

namespace rconley {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double blend(double base, double lambda, std::span<const std::vector<double>> per_noise, std::size_t idx,
             std::span<const double> noise) {
  double v = base;
  for (std::size_t k = 0; k < per_noise.size(); ++k) v += lambda * noise[k] * per_noise[k][idx];
  return v;
}

struct LorenzCoefficients {
  double sigma;
  double rho;
  double beta;
};

LorenzCoefficients lorenz_coefficients(const LorenzParams& p, double lambda, std::span<const double> noise) {
  return {p.sigma + lambda * noise[0], p.rho + lambda * noise[1], p.beta + lambda * noise[2]};
}

template <class T>
void ode_rhs(const OdeField& field, double lambda, std::span<const double> noise, std::span<const T> x,
             std::span<T> dx) {
  std::visit(Overloaded{
                 [&](const LorenzField& f) {
                   const auto c = lorenz_coefficients(f.params, lambda, noise);
                   if (f.params.reduced_y0) {
                     dx[0] = T(-c.sigma) * x[0];
                     dx[1] = T(-c.beta) * x[1];
                   } else {
                     dx[0] = T(c.sigma) * (x[1] - x[0]);
                     dx[1] = T(c.rho) * x[0] - x[1] - x[0] * x[2];
                     dx[2] = x[0] * x[1] - T(c.beta) * x[2];
                   }
                 },
                 [&](const LinearField& f) {
                   for (std::size_t i = 0; i < f.dims; ++i) {
                     T acc(0.0);
                     for (std::size_t j = 0; j < f.dims; ++j) {
                       const double a = blend(f.matrix[i * f.dims + j], lambda, f.matrix_noise, i * f.dims + j, noise);
                       acc = acc + T(a) * x[j];
                     }
                     dx[i] = acc;
                   }
                 },
                 [&](const LogisticField& f) {
                   const double r = f.r + lambda * noise[0];
                   dx[0] = T(r) * x[0] - T(r / f.K) * sqr(x[0]);
                 },
             },
             field);
}

std::size_t field_dims(const OdeField& field) {
  return std::visit(Overloaded{[](const LorenzField& f) -> std::size_t { return f.params.reduced_y0 ? 2 : 3; },
                               [](const LinearField& f) { return f.dims; },
                               [](const LogisticField&) -> std::size_t { return 1; }},
                    field);
}

std::size_t field_noise_dims(const OdeField& field) {
  return std::visit(Overloaded{[](const LorenzField&) -> std::size_t { return 3; },
                               [](const LinearField& f) { return std::max<std::size_t>(1, f.matrix_noise.size()); },
                               [](const LogisticField&) -> std::size_t { return 1; }},
                    field);
}

template <class T>
void integrate(const TimeHMap& m, double lambda, std::span<const double> noise, std::span<const T> x,
               std::span<T> out) {
  const std::size_t d = x.size();
  std::vector<T> state(x.begin(), x.end());
  std::vector<T> k1(d), k2(d), k3(d), k4(d), tmp(d);
  const double dt = m.h / m.substeps;
  for (int step = 0; step < m.substeps; ++step) {
    ode_rhs<T>(m.field, lambda, noise, state, k1);
    if (m.integrator == Integrator::euler) {
      for (std::size_t i = 0; i < d; ++i) state[i] = state[i] + T(dt) * k1[i];
      continue;
    }
    for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + T(0.5 * dt) * k1[i];
    ode_rhs<T>(m.field, lambda, noise, tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + T(0.5 * dt) * k2[i];
    ode_rhs<T>(m.field, lambda, noise, tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = state[i] + T(dt) * k3[i];
    ode_rhs<T>(m.field, lambda, noise, tmp, k4);
    for (std::size_t i = 0; i < d; ++i) {
      state[i] = state[i] + T(dt / 6.0) * (k1[i] + T(2.0) * k2[i] + T(2.0) * k3[i] + k4[i]);
    }
  }
  std::copy(state.begin(), state.end(), out.begin());
}

std::optional<std::vector<double>> solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) < 1e-300) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

std::vector<double> matrix_at(const std::vector<double>& base, const std::vector<std::vector<double>>& per_noise,
                              double lambda, std::span<const double> noise) {
  std::vector<double> m(base.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = blend(base[i], lambda, per_noise, i, noise);
  return m;
}

nlohmann::json lorenz_json(const LorenzParams& p) {
  return {{"sigma", p.sigma}, {"rho", p.rho}, {"beta", p.beta}, {"reduced_y0", p.reduced_y0}};
}

LorenzParams lorenz_from(const nlohmann::json& j) {
  LorenzParams p;
  p.sigma = j.value("sigma", p.sigma);
  p.rho = j.value("rho", p.rho);
  p.beta = j.value("beta", p.beta);
  p.reduced_y0 = j.value("reduced_y0", false);
  return p;
}

nlohmann::json field_json(const OdeField& f) {
  return std::visit(Overloaded{[](const LorenzField& l) {
                                 auto j = lorenz_json(l.params);
                                 j["name"] = "lorenz";
                                 return j;
                               },
                               [](const LinearField& l) {
                                 return nlohmann::json{{"name", "linear"},
                                                       {"dims", l.dims},
                                                       {"matrix", l.matrix},
                                                       {"matrix_noise", l.matrix_noise}};
                               },
                               [](const LogisticField& l) {
                                 return nlohmann::json{{"name", "logistic"}, {"r", l.r}, {"K", l.K}};
                               }},
                    f);
}

OdeField field_from(const nlohmann::json& j) {
  const auto name = j.at("name").get<std::string>();
  if (name == "lorenz") return LorenzField{lorenz_from(j)};
  if (name == "linear") {
    LinearField f;
    f.dims = j.at("dims").get<std::size_t>();
    f.matrix = j.at("matrix").get<std::vector<double>>();
    f.matrix_noise = j.value("matrix_noise", std::vector<std::vector<double>>{});
    if (f.matrix.size() != f.dims * f.dims) throw InputError("linear field: matrix must have dims^2 entries");
    return f;
  }
  if (name == "logistic") return LogisticField{j.value("r", 0.8), j.value("K", 1.0)};
  throw InputError("unknown ODE field '" + name + "'");
}

}  // namespace

MapFamily::MapFamily(Kind kind, double lambda) : kind_(std::move(kind)), lambda_(lambda) {
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) throw InputError("map family: lambda must lie in [0,1]");
  std::visit(Overloaded{
                 [](const RandomDiagonal& d) {
                   if (d.dims == 0) throw InputError("random-diagonal: dims must be positive");
                   if (!d.nominal.empty() && d.nominal.size() != d.dims) {
                     throw InputError("random-diagonal: nominal must have dims entries");
                   }
                 },
                 [](const RandomLogistic& l) {
                   if (!(l.h > 0) || !(l.K > 0)) throw InputError("random-logistic: need h > 0 and K > 0");
                 },
                 [](const RandomLorenzEuler& l) {
                   if (!(l.h > 0)) throw InputError("random-lorenz-euler: need h > 0");
                 },
                 [](const AffineMap& a) {
                   if (a.matrix.size() != a.dims * a.dims) throw InputError("affine: matrix must have dims^2 entries");
                   if (!a.offset.empty() && a.offset.size() != a.dims) throw InputError("affine: offset size");
                 },
                 [](const PolynomialMap& p) {
                   if (p.components.size() != p.dims) throw InputError("polynomial: need one component per axis");
                   int degree = 0;
                   for (const auto& comp : p.components) {
                     for (const auto& m : comp) {
                       if (m.exponents.size() != p.dims) throw InputError("polynomial: exponent vector size");
                       int deg = 0;
                       for (int e : m.exponents) {
                         if (e < 0) throw InputError("polynomial: negative exponent");
                         deg += e;
                       }
                       degree = std::max(degree, deg);
                       if (!m.noise_coeffs.empty() && m.noise_coeffs.size() != p.noise_dims) {
                         throw InputError("polynomial: noise coefficient count");
                       }
                     }
                   }
                   if (degree < 1) throw InputError("polynomial: degree must be >= 1");
                 },
                 [](const TimeHMap& t) {
                   if (!(t.h > 0) || t.substeps < 1) throw InputError("time-h map: need h > 0 and substeps >= 1");
                 },
             },
             kind_);
}

std::string MapFamily::name() const {
  return std::visit(Overloaded{[](const RandomDiagonal&) { return std::string("random-diagonal"); },
                               [](const RandomLogistic&) { return std::string("random-logistic"); },
                               [](const RandomLorenzEuler&) { return std::string("random-lorenz-euler"); },
                               [](const AffineMap&) { return std::string("affine"); },
                               [](const PolynomialMap&) { return std::string("polynomial"); },
                               [](const TimeHMap&) { return std::string("time-h"); }},
                    kind_);
}

std::size_t MapFamily::dims() const {
  return std::visit(Overloaded{[](const RandomDiagonal& d) { return d.dims; },
                               [](const RandomLogistic&) -> std::size_t { return 1; },
                               [](const RandomLorenzEuler& l) -> std::size_t { return l.params.reduced_y0 ? 2 : 3; },
                               [](const AffineMap& a) { return a.dims; },
                               [](const PolynomialMap& p) { return p.dims; },
                               [](const TimeHMap& t) { return field_dims(t.field); }},
                    kind_);
}

std::size_t MapFamily::noise_dims() const {
  return std::visit(
      Overloaded{[](const RandomDiagonal& d) { return d.dims; },
                 [](const RandomLogistic&) -> std::size_t { return 1; },
                 [](const RandomLorenzEuler&) -> std::size_t { return 3; },
                 [](const AffineMap& a) {
                   return std::max<std::size_t>({1, a.matrix_noise.size(), a.offset_noise.size()});
                 },
                 [](const PolynomialMap& p) { return p.noise_dims; },
                 [](const TimeHMap& t) { return field_noise_dims(t.field); }},
      kind_);
}

MapFamily MapFamily::with_lambda(double lambda) const {
  MapFamily m = *this;
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("map family: lambda must lie in [0,1]");
  m.lambda_ = lambda;
  return m;
}

MapFamily MapFamily::with_offset(std::vector<double> offset) const {
  if (!offset.empty() && offset.size() != dims()) throw InputError("map family: offset dimension mismatch");
  MapFamily m = *this;
  m.offset_ = std::move(offset);
  return m;
}

MapFamily MapFamily::with_lipschitz(double bound) const {
  if (!(bound >= 0)) throw InputError("map family: Lipschitz bound must be nonnegative");
  MapFamily m = *this;
  m.lipschitz_ = bound;
  return m;
}

MapFamily MapFamily::with_mode(EnclosureMode mode) const {
  MapFamily m = *this;
  m.mode_ = mode;
  return m;
}

void MapFamily::check_noise(std::span<const double> noise) const {
  if (noise.size() != noise_dims()) {
    throw InputError(name() + ": expected " + std::to_string(noise_dims()) + " noise coordinates, got " +
                     std::to_string(noise.size()));
  }
  for (double v : noise) {
    if (!std::isfinite(v)) throw InputError(name() + ": non-finite noise value");
  }
  std::visit(Overloaded{
                 [&](const RandomDiagonal& d) {
                   if (lambda_ < 1.0 && d.nominal.empty()) {
                     throw InputError("random-diagonal: lambda < 1 requires nominal coefficients");
                   }
                 },
                 [&](const RandomLogistic& l) {
                   if (!(l.r + lambda_ * noise[0] > 0)) throw InputError("random-logistic: r + lambda*xi must be > 0");
                 },
                 [&](const RandomLorenzEuler& l) {
                   const auto c = lorenz_coefficients(l.params, lambda_, noise);
                   if (!(c.sigma > 0 && c.beta > 0)) throw InputError("random-lorenz-euler: sigma, beta must stay > 0");
                 },
                 [](const auto&) {},
             },
             kind_);
}

template <class T>
void MapFamily::eval(std::span<const T> x, std::span<const double> noise, std::span<T> out) const {
  std::visit(
      Overloaded{
          [&](const RandomDiagonal& d) {
            for (std::size_t i = 0; i < d.dims; ++i) {
              const double a = d.nominal.empty() ? noise[i] : d.nominal[i] + lambda_ * (noise[i] - d.nominal[i]);
              out[i] = T(a) * x[i];
            }
          },
          [&](const RandomLogistic& l) {
            const double c = l.h * (l.r + lambda_ * noise[0]);
            out[0] = T(1.0 + c) * x[0] - T(c / l.K) * sqr(x[0]);
          },
          [&](const RandomLorenzEuler& l) {
            const auto c = lorenz_coefficients(l.params, lambda_, noise);
            const double h = l.h;
            if (l.params.reduced_y0) {
              out[0] = T(1.0 - h * c.sigma) * x[0];
              out[1] = T(1.0 - h * c.beta) * x[1];
            } else {
              // (hB + I) X + h F(X)
              out[0] = T(1.0 - h * c.sigma) * x[0] + T(h * c.sigma) * x[1];
              out[1] = T(h * c.rho) * x[0] + T(1.0 - h) * x[1] - T(h) * (x[0] * x[2]);
              out[2] = T(1.0 - h * c.beta) * x[2] + T(h) * (x[0] * x[1]);
            }
          },
          [&](const AffineMap& a) {
            for (std::size_t i = 0; i < a.dims; ++i) {
              T acc(a.offset.empty() ? 0.0 : blend(a.offset[i], lambda_, a.offset_noise, i, noise));
              for (std::size_t j = 0; j < a.dims; ++j) {
                acc = acc + T(blend(a.matrix[i * a.dims + j], lambda_, a.matrix_noise, i * a.dims + j, noise)) * x[j];
              }
              out[i] = acc;
            }
          },
          [&](const PolynomialMap& p) {
            for (std::size_t i = 0; i < p.dims; ++i) {
              T acc(0.0);
              for (const auto& m : p.components[i]) {
                double c = m.coeff;
                for (std::size_t k = 0; k < m.noise_coeffs.size(); ++k) c += lambda_ * m.noise_coeffs[k] * noise[k];
                T term(c);
                for (std::size_t j = 0; j < p.dims; ++j) {
                  if (m.exponents[j] > 0) term = term * ipow(x[j], m.exponents[j]);
                }
                acc = acc + term;
              }
              out[i] = acc;
            }
          },
          [&](const TimeHMap& t) { integrate<T>(t, lambda_, noise, x, out); },
      },
      kind_);
  for (std::size_t i = 0; i < offset_.size(); ++i) out[i] = out[i] + T(offset_[i]);
}

void MapFamily::apply(std::span<const double> x, std::span<const double> noise, std::span<double> out) const {
  eval<double>(x, noise, out);
}

void MapFamily::apply(std::span<const Interval> x, std::span<const double> noise, std::span<Interval> out) const {
  eval<Interval>(x, noise, out);
}

std::vector<double> MapFamily::operator()(std::span<const double> x, std::span<const double> noise) const {
  std::vector<double> out(dims());
  apply(x, noise, out);
  return out;
}

bool MapFamily::has_inverse() const {
  return std::visit(Overloaded{[](const RandomDiagonal&) { return true; }, [](const RandomLogistic&) { return true; },
                               [](const AffineMap&) { return true; },
                               [](const TimeHMap& t) {
                                 return std::holds_alternative<LinearField>(t.field) &&
                                        t.integrator == Integrator::euler;
                               },
                               [](const auto&) { return false; }},
                    kind_);
}

std::optional<std::vector<double>> MapFamily::inverse(std::span<const double> y_in,
                                                      std::span<const double> noise) const {
  std::vector<double> y(y_in.begin(), y_in.end());
  for (std::size_t i = 0; i < offset_.size(); ++i) y[i] -= offset_[i];
  return std::visit(
      Overloaded{
          [&](const RandomDiagonal& d) -> std::optional<std::vector<double>> {
            std::vector<double> x(d.dims);
            for (std::size_t i = 0; i < d.dims; ++i) {
              const double a = d.nominal.empty() ? noise[i] : d.nominal[i] + lambda_ * (noise[i] - d.nominal[i]);
              if (a == 0.0) return std::nullopt;
              x[i] = y[i] / a;
            }
            return x;
          },
          [&](const RandomLogistic& l) -> std::optional<std::vector<double>> {
            // (c/K) x^2 - (1+c) x + y = 0, branch through the identity as c -> 0.
            const double c = l.h * (l.r + lambda_ * noise[0]);
            if (c == 0.0) return std::vector<double>{y[0]};
            const double disc = (1.0 + c) * (1.0 + c) - 4.0 * c * y[0] / l.K;
            if (disc < 0) return std::nullopt;
            const double root = (2.0 * y[0]) / ((1.0 + c) + std::sqrt(disc));
            return std::vector<double>{root};
          },
          [&](const AffineMap& a) -> std::optional<std::vector<double>> {
            auto m = matrix_at(a.matrix, a.matrix_noise, lambda_, noise);
            std::vector<double> rhs = y;
            for (std::size_t i = 0; i < a.dims && !a.offset.empty(); ++i) {
              rhs[i] -= blend(a.offset[i], lambda_, a.offset_noise, i, noise);
            }
            return solve(std::move(m), std::move(rhs), a.dims);
          },
          [&](const TimeHMap& t) -> std::optional<std::vector<double>> {
            const auto* lin = std::get_if<LinearField>(&t.field);
            if (lin == nullptr || t.integrator != Integrator::euler) return std::nullopt;
            auto a = matrix_at(lin->matrix, lin->matrix_noise, lambda_, noise);
            const double dt = t.h / t.substeps;
            std::vector<double> step(a.size());
            for (std::size_t i = 0; i < lin->dims; ++i) {
              for (std::size_t j = 0; j < lin->dims; ++j) {
                step[i * lin->dims + j] = (i == j ? 1.0 : 0.0) + dt * a[i * lin->dims + j];
              }
            }
            std::vector<double> x = y;
            for (int s = 0; s < t.substeps; ++s) {
              auto next = solve(step, x, lin->dims);
              if (!next) return std::nullopt;
              x = *next;
            }
            return x;
          },
          [](const auto&) -> std::optional<std::vector<double>> { return std::nullopt; },
      },
      kind_);
}

nlohmann::json MapFamily::to_json() const {
  nlohmann::json j = std::visit(
      Overloaded{
          [](const RandomDiagonal& d) {
            nlohmann::json p = {{"dims", d.dims}};
            if (!d.nominal.empty()) p["nominal"] = d.nominal;
            return nlohmann::json{{"kind", "builtin"}, {"name", "random-diagonal"}, {"params", p}};
          },
          [](const RandomLogistic& l) {
            return nlohmann::json{
                {"kind", "builtin"}, {"name", "random-logistic"}, {"params", {{"h", l.h}, {"r", l.r}, {"K", l.K}}}};
          },
          [](const RandomLorenzEuler& l) {
            auto p = lorenz_json(l.params);
            p["h"] = l.h;
            return nlohmann::json{{"kind", "builtin"}, {"name", "random-lorenz-euler"}, {"params", p}};
          },
          [](const AffineMap& a) {
            return nlohmann::json{{"kind", "affine"},         {"dims", a.dims},
                                  {"matrix", a.matrix},       {"matrix_noise", a.matrix_noise},
                                  {"offset", a.offset},       {"offset_noise", a.offset_noise}};
          },
          [](const PolynomialMap& p) {
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& comp : p.components) {
              nlohmann::json terms = nlohmann::json::array();
              for (const auto& m : comp) {
                terms.push_back({{"exponents", m.exponents}, {"coeff", m.coeff}, {"noise", m.noise_coeffs}});
              }
              comps.push_back(terms);
            }
            return nlohmann::json{
                {"kind", "polynomial"}, {"dims", p.dims}, {"noise_dims", p.noise_dims}, {"components", comps}};
          },
          [](const TimeHMap& t) {
            return nlohmann::json{{"kind", "time-h"},
                                  {"field", field_json(t.field)},
                                  {"h", t.h},
                                  {"substeps", t.substeps},
                                  {"integrator", t.integrator == Integrator::euler ? "euler" : "rk4"}};
          },
      },
      kind_);
  j["lambda"] = lambda_;
  if (!offset_.empty()) j["offset"] = offset_;
  if (lipschitz_) j["lipschitz_bound"] = *lipschitz_;
  j["enclosure"] = mode_ == EnclosureMode::interval ? "interval" : "lipschitz";
  return j;
}

MapFamily make_builtin(const std::string& name, const nlohmann::json& params) {
  if (name == "random-diagonal") {
    RandomDiagonal d;
    d.dims = params.value("dims", std::size_t{2});
    d.nominal = params.value("nominal", std::vector<double>{});
    return MapFamily(d);
  }
  if (name == "random-logistic") {
    return MapFamily(RandomLogistic{params.value("h", 0.1), params.value("r", 0.8), params.value("K", 1.0)});
  }
  if (name == "random-lorenz-euler") {
    return MapFamily(RandomLorenzEuler{params.value("h", 0.05), lorenz_from(params)});
  }
  throw InputError("unknown builtin system '" + name + "'");
}

MapFamily MapFamily::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  std::optional<MapFamily> m;
  if (kind == "builtin") {
    m = make_builtin(j.at("name").get<std::string>(), j.value("params", nlohmann::json::object()));
  } else if (kind == "affine") {
    AffineMap a;
    a.dims = j.at("dims").get<std::size_t>();
    a.matrix = j.at("matrix").get<std::vector<double>>();
    a.matrix_noise = j.value("matrix_noise", std::vector<std::vector<double>>{});
    a.offset = j.value("offset", std::vector<double>{});
    a.offset_noise = j.value("offset_noise", std::vector<std::vector<double>>{});
    m = MapFamily(a);
  } else if (kind == "polynomial") {
    PolynomialMap p;
    p.dims = j.at("dims").get<std::size_t>();
    p.noise_dims = j.value("noise_dims", std::size_t{1});
    for (const auto& comp : j.at("components")) {
      std::vector<Monomial> terms;
      for (const auto& t : comp) {
        terms.push_back({t.at("exponents").get<std::vector<int>>(), t.value("coeff", 0.0),
                         t.value("noise", std::vector<double>{})});
      }
      p.components.push_back(std::move(terms));
    }
    m = MapFamily(p);
  } else if (kind == "time-h") {
    TimeHMap t;
    t.field = field_from(j.at("field"));
    t.h = j.at("h").get<double>();
    t.substeps = j.value("substeps", 1);
    const auto integ = j.value("integrator", std::string("euler"));
    if (integ != "euler" && integ != "rk4") throw InputError("time-h map: integrator must be euler or rk4");
    t.integrator = integ == "euler" ? Integrator::euler : Integrator::rk4;
    m = MapFamily(t);
  } else {
    throw InputError("unknown map family kind '" + kind + "'");
  }
  MapFamily out = m->with_lambda(j.value("lambda", 1.0));
  if (j.contains("offset") && kind != "affine") out = out.with_offset(j.at("offset").get<std::vector<double>>());
  if (j.contains("lipschitz_bound") && !j.at("lipschitz_bound").is_null()) {
    out = out.with_lipschitz(j.at("lipschitz_bound").get<double>());
  }
  const auto mode = j.value("enclosure", std::string("interval"));
  if (mode != "interval" && mode != "lipschitz") throw InputError("map family: enclosure must be interval or lipschitz");
  out = out.with_mode(mode == "interval" ? EnclosureMode::interval : EnclosureMode::lipschitz);
  return out;
}

}  // namespace rconley
