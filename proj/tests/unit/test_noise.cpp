#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rconley/error.hpp"
#include "rconley/noise.hpp"

using namespace rconley;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("draws depend only on seed and step") {
  const auto m = NoiseModel::uniform(0.3, 0.7, 2);
  CHECK(m.draw(5, 3) == m.draw(5, 3));
  CHECK(m.draw(5, 3) != m.draw(6, 3));
  CHECK(m.draw(5, 3) != m.draw(5, 4));
  const auto short_path = sample_path(m, 9, 4);
  const auto long_path = sample_path(m, 9, 12);
  for (int t = -4; t < 4; ++t) {
    const auto a = short_path.value(t);
    const auto b = long_path.value(t);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("uniform draws stay in support") {
  const auto m = NoiseModel::uniform(-0.4, 0.4, 1);
  for (std::int64_t t = -500; t < 500; ++t) {
    const auto v = m.draw(1, t);
    CHECK(m.in_support(v));
  }
  const double out[] = {0.5};
  CHECK_FALSE(m.in_support(out));
}

TEST_CASE("discrete draws follow weights") {
  const auto m = NoiseModel::discrete({1.0, 2.0}, {0.25, 0.75}, 1);
  int twos = 0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) twos += m.draw(3, t)[0] == 2.0;
  CHECK(static_cast<double>(twos) / n == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("constant noise") {
  const auto m = NoiseModel::constant({0.5, 0.25});
  CHECK(m.draw(0, 0) == std::vector<double>{0.5, 0.25});
  CHECK(m.draw(99, -7) == std::vector<double>{0.5, 0.25});
}

TEST_CASE("noise models reject bad parameters") {
  CHECK_THROWS_AS(NoiseModel::uniform(1.0, 0.0, 1), InputError);
  CHECK_THROWS_AS(NoiseModel::discrete({1.0}, {0.5, 0.5}, 1), InputError);
  CHECK_THROWS_AS(NoiseModel::discrete({1.0, 2.0}, {-1.0, 2.0}, 1), InputError);
  CHECK_THROWS_AS(sample_path(NoiseModel::uniform(0, 1, 1), 0, 0), InputError);
}

TEST_CASE("shift reindexes the window") {
  const auto p = sample_path(NoiseModel::uniform(0.0, 1.0, 2), 4, 8);
  const auto s = shift(p, 3);
  CHECK(s.half_window() == 5);
  CHECK(s.origin() == p.origin() + 3);
  for (int t = -5; t < 5; ++t) {
    const auto a = s.value(t);
    const auto b = p.value(t + 3);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  CHECK_THROWS_AS(p.value(8), InputError);
}

TEST_CASE("shifted values are distributed like unshifted ones") {
  const auto m = NoiseModel::uniform(0.3, 0.7, 1);
  std::vector<double> base;
  std::vector<double> shifted;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto p = sample_path(m, seed, 6);
    const auto s = shift(p, 4);
    base.push_back(p.value(-3)[0]);
    shifted.push_back(s.value(-1)[0]);
  }
  // critical value of the two-sample test at p = 0.01 for n = m = 10^4
  const double critical = 1.628 * std::sqrt(2.0 / 10000.0);
  CHECK(ks_statistic(base, shifted) < critical);
}

TEST_CASE("paths serialize") {
  const auto p = sample_path(NoiseModel::discrete({0.1, 0.9}, {1.0, 1.0}, 3), 12, 5);
  CHECK(NoisePath::from_json(p.to_json()) == p);
  const auto m = NoiseModel::from_json(NoiseModel::uniform(1.5, 2.5, 2).to_json());
  CHECK(m.dims() == 2);
  CHECK(m.kind_name() == "iid-uniform");
}
