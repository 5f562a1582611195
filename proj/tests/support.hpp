#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "nichols/diagram.hpp"
#include "nichols/hlist.hpp"

namespace testing {

// NICHOLS_SEED overrides the default seed of the randomized tests.
inline uint64_t test_seed() {
  if (const char* s = std::getenv("NICHOLS_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240917;
}

inline const nichols::HlistDb& db() {
  static const nichols::HlistDb d = nichols::load_hlist(nichols::resolve_hlist_path(""));
  return d;
}

inline nichols::RootOfUnity random_root(std::mt19937_64& rng, bool allow_one) {
  static const int orders[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 18, 24};
  for (;;) {
    int n = orders[rng() % std::size(orders)];
    auto x = nichols::RootOfUnity::from(static_cast<int64_t>(rng() % n), n);
    if (allow_one || !x.is_one()) return x;
  }
}

// Vertex labels are never 1; each pair carries an edge with probability p.
inline nichols::Diagram random_diagram(std::mt19937_64& rng, int rank, double p = 0.5) {
  nichols::Diagram d(rank);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < rank; ++i) d.set_vertex(i, random_root(rng, false));
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      if (u(rng) < p) d.set_edge(i, j, random_root(rng, false));
  return d;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace testing
