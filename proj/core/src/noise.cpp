#include "rconley/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rconley/error.hpp"

namespace rconley {

namespace {

// 53-bit mantissa fill; independent of the standard library's distributions
// so paths are reproducible across toolchains.
double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

NoiseModel::NoiseModel(Kind kind, std::size_t dims) : kind_(std::move(kind)), dims_(dims) {
  if (dims_ == 0) throw InputError("noise: dims must be positive");
  std::visit(Overloaded{
                 [](const UniformNoise& u) {
                   if (!(u.a < u.b)) throw InputError("noise: iid-uniform needs a < b");
                 },
                 [](DiscreteNoise& d) {
                   if (d.values.empty() || d.values.size() != d.weights.size()) {
                     throw InputError("noise: iid-discrete needs matching nonempty values and weights");
                   }
                   double total = 0.0;
                   for (double w : d.weights) {
                     if (!(w > 0)) throw InputError("noise: iid-discrete weights must be positive");
                     total += w;
                   }
                   for (double& w : d.weights) w /= total;
                 },
                 [this](const ConstantNoise& c) {
                   if (c.value.size() != dims_) throw InputError("noise: constant value must have dims entries");
                 },
             },
             kind_);
}

std::string NoiseModel::kind_name() const {
  return std::visit(Overloaded{[](const UniformNoise&) { return std::string("iid-uniform"); },
                               [](const DiscreteNoise&) { return std::string("iid-discrete"); },
                               [](const ConstantNoise&) { return std::string("constant"); }},
                    kind_);
}

std::vector<double> NoiseModel::draw(std::uint64_t seed, std::int64_t t) const {
  std::vector<double> out(dims_);
  if (const auto* c = std::get_if<ConstantNoise>(&kind_)) return c->value;
  const auto ut = static_cast<std::uint64_t>(t);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(ut), static_cast<std::uint32_t>(ut >> 32)};
  std::mt19937_64 gen(seq);
  for (auto& v : out) {
    const double u = unit_draw(gen);
    if (const auto* un = std::get_if<UniformNoise>(&kind_)) {
      v = un->a + (un->b - un->a) * u;
    } else {
      const auto& d = std::get<DiscreteNoise>(kind_);
      double acc = 0.0;
      v = d.values.back();
      for (std::size_t i = 0; i < d.values.size(); ++i) {
        acc += d.weights[i];
        if (u < acc) {
          v = d.values[i];
          break;
        }
      }
    }
  }
  return out;
}

bool NoiseModel::in_support(std::span<const double> v) const {
  if (v.size() != dims_) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    const bool ok = std::visit(
        Overloaded{[&](const UniformNoise& u) { return x >= u.a && x <= u.b; },
                   [&](const DiscreteNoise& d) {
                     return std::find(d.values.begin(), d.values.end(), x) != d.values.end();
                   },
                   [&](const ConstantNoise& c) { return x == c.value[i]; }},
        kind_);
    if (!ok) return false;
  }
  return true;
}

nlohmann::json NoiseModel::to_json() const {
  nlohmann::json j = {{"kind", kind_name()}, {"dims", dims_}};
  std::visit(Overloaded{[&](const UniformNoise& u) {
                          j["a"] = u.a;
                          j["b"] = u.b;
                        },
                        [&](const DiscreteNoise& d) {
                          j["values"] = d.values;
                          j["weights"] = d.weights;
                        },
                        [&](const ConstantNoise& c) { j["value"] = c.value; }},
             kind_);
  return j;
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "iid-uniform") {
    return uniform(j.at("a").get<double>(), j.at("b").get<double>(), j.value("dims", std::size_t{1}));
  }
  if (kind == "iid-discrete") {
    return discrete(j.at("values").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>(),
                    j.value("dims", std::size_t{1}));
  }
  if (kind == "constant") {
    const auto& v = j.at("value");
    if (v.is_array()) return constant(v.get<std::vector<double>>());
    return constant(std::vector<double>(j.value("dims", std::size_t{1}), v.get<double>()));
  }
  throw InputError("noise: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

NoisePath::NoisePath(NoiseModel model, std::uint64_t seed, int half_window, std::int64_t origin,
                     std::vector<double> values)
    : model_(std::move(model)), seed_(seed), half_window_(half_window), origin_(origin), values_(std::move(values)) {
  if (half_window_ < 1) throw InputError("noise path: half window must be >= 1");
  if (values_.size() != 2 * static_cast<std::size_t>(half_window_) * model_.dims()) {
    throw InputError("noise path: expected 2T noise vectors");
  }
}

std::span<const double> NoisePath::value(int t) const {
  if (t < -half_window_ || t >= half_window_) {
    throw InputError("noise path: fiber " + std::to_string(t) + " outside window");
  }
  const auto row = static_cast<std::size_t>(t + half_window_);
  return std::span<const double>(values_).subspan(row * dims(), dims());
}

bool NoisePath::operator==(const NoisePath& o) const {
  return seed_ == o.seed_ && half_window_ == o.half_window_ && origin_ == o.origin_ && values_ == o.values_ &&
         model_.to_json() == o.model_.to_json();
}

nlohmann::json NoisePath::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int t = -half_window_; t < half_window_; ++t) {
    const auto v = value(t);
    rows.push_back(std::vector<double>(v.begin(), v.end()));
  }
  return {{"seed", seed_}, {"T", half_window_}, {"origin", origin_}, {"model", model_.to_json()}, {"values", rows}};
}

NoisePath NoisePath::from_json(const nlohmann::json& j) {
  auto model = NoiseModel::from_json(j.at("model"));
  const int T = j.at("T").get<int>();
  std::vector<double> flat;
  const auto& rows = j.at("values");
  if (rows.size() != 2 * static_cast<std::size_t>(T)) throw InputError("noise path json: expected 2T rows");
  for (const auto& row : rows) {
    const auto v = row.get<std::vector<double>>();
    if (v.size() != model.dims()) throw InputError("noise path json: row has wrong dimension");
    if (!model.in_support(v)) throw InputError("noise path json: value outside model support");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return {std::move(model), j.value("seed", std::uint64_t{0}), T, j.value("origin", std::int64_t{0}),
          std::move(flat)};
}

NoisePath sample_path(const NoiseModel& model, std::uint64_t seed, int half_window) {
  if (half_window < 1) throw InputError("sample_path: T must be >= 1");
  std::vector<double> flat;
  flat.reserve(2 * static_cast<std::size_t>(half_window) * model.dims());
  for (int t = -half_window; t < half_window; ++t) {
    const auto v = model.draw(seed, t);
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return {model, seed, half_window, 0, std::move(flat)};
}

NoisePath shift(const NoisePath& path, int k) {
  const int T = path.half_window();
  if (std::abs(k) >= T) throw InputError("shift: window exhausted");
  const int nT = T - std::abs(k);
  std::vector<double> flat;
  flat.reserve(2 * static_cast<std::size_t>(nT) * path.dims());
  for (int t = -nT; t < nT; ++t) {
    const auto v = path.value(t + k);
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return {path.model(), path.seed(), nT, path.origin() + k, std::move(flat)};
}

}  // namespace rconley
