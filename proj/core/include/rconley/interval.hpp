#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace rconley {

/// Closed interval with outward rounding: every arithmetic result is widened
/// by one ulp on each side, which covers round-to-nearest error.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

namespace detail {
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline Interval widen(double l, double h) { return {down(l), up(h)}; }
}  // namespace detail

inline Interval operator+(Interval a, Interval b) { return detail::widen(a.lo + b.lo, a.hi + b.hi); }
inline Interval operator-(Interval a, Interval b) { return detail::widen(a.lo - b.hi, a.hi - b.lo); }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return detail::widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

inline Interval& operator+=(Interval& a, Interval b) { return a = a + b; }
inline Interval& operator-=(Interval& a, Interval b) { return a = a - b; }
inline Interval& operator*=(Interval& a, Interval b) { return a = a * b; }

/// Exact-range square (never negative).
inline Interval sqr(Interval a) {
  if (a.lo >= 0) return detail::widen(a.lo * a.lo, a.hi * a.hi);
  if (a.hi <= 0) return detail::widen(a.hi * a.hi, a.lo * a.lo);
  const double m = std::max(-a.lo, a.hi);
  return {0.0, detail::up(m * m)};
}

inline double sqr(double a) { return a * a; }

inline Interval ipow(Interval a, int n) {
  if (n == 0) return Interval(1.0);
  if (n == 1) return a;
  if (n % 2 == 0) return sqr(ipow(a, n / 2));
  return a * ipow(a, n - 1);
}

inline double ipow(double a, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

inline Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace rconley
