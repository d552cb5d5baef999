#pragma once

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>
#include <vector>

#include "rconley/boxset.hpp"

namespace oracle {

using rconley::BoxIndex;
using rconley::BoxSet;
using rconley::GridPtr;

inline BoxSet random_set(const GridPtr& g, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution coin(density);
  BoxSet s(g);
  for (BoxIndex b = 0; b < g->box_count(); ++b) {
    if (coin(rng)) s.insert(b);
  }
  return s;
}

inline std::set<BoxIndex> as_set(const BoxSet& s) {
  const auto v = s.indices();
  return {v.begin(), v.end()};
}

inline int chebyshev(const GridPtr& g, BoxIndex a, BoxIndex b) {
  const auto ma = g->unflatten(a);
  const auto mb = g->unflatten(b);
  int d = 0;
  for (std::size_t i = 0; i < ma.size(); ++i) d = std::max(d, std::abs(ma[i] - mb[i]));
  return d;
}

/// Dilation straight from the definition: every box within Chebyshev distance k.
inline std::set<BoxIndex> dilate(const GridPtr& g, const std::set<BoxIndex>& s, int k) {
  std::set<BoxIndex> out;
  for (BoxIndex b = 0; b < g->box_count(); ++b) {
    for (BoxIndex a : s) {
      if (chebyshev(g, a, b) <= k) {
        out.insert(b);
        break;
      }
    }
  }
  return out;
}

/// Interior straight from the definition: not on the boundary, all Moore neighbors inside.
inline std::set<BoxIndex> interior(const GridPtr& g, const std::set<BoxIndex>& s) {
  std::set<BoxIndex> out;
  for (BoxIndex b : s) {
    if (g->on_boundary(b)) continue;
    bool ok = true;
    for (BoxIndex c = 0; c < g->box_count() && ok; ++c) {
      if (chebyshev(g, b, c) <= 1 && !s.contains(c)) ok = false;
    }
    if (ok) out.insert(b);
  }
  return out;
}

}  // namespace oracle
