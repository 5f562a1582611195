#pragma once

// Brute-force root system oracle, written independently of the library's
// Weyl groupoid code. Labels are integer exponents of a primitive N-th root
// of unity, and reflections act on the symmetric data (q_ii, q_ij q_ji)
// through the bilinear form. Roots at the base object are the images of the
// simple roots under all morphisms into it, found by a breadth-first walk
// over (object, linear map) states.

#include <algorithm>
#include <map>
#include <tuple>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "nichols/diagram.hpp"

namespace oracle {

using Vec = std::vector<long>;

struct Obj {
  long N = 1;
  std::vector<long> v;               // vertex exponents
  std::vector<std::vector<long>> t;  // symmetric edge exponents, t[i][i] unused
  bool operator<(const Obj& o) const { return std::tie(v, t) < std::tie(o.v, o.t); }
};

inline long md(long a, long n) { return ((a % n) + n) % n; }

inline Obj from_diagram(const nichols::Diagram& d) {
  long N = 1;
  int n = d.rank();
  for (int i = 0; i < n; ++i) {
    N = std::lcm(N, static_cast<long>(d.vertex(i).den()));
    for (int j = 0; j < n; ++j)
      if (i != j) N = std::lcm(N, static_cast<long>(d.edge(i, j).den()));
  }
  Obj o;
  o.N = N;
  o.v.resize(n);
  o.t.assign(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) {
    o.v[i] = d.vertex(i).num() * (N / d.vertex(i).den());
    for (int j = 0; j < n; ++j)
      if (i != j) o.t[i][j] = d.edge(i, j).num() * (N / d.edge(i, j).den());
  }
  return o;
}

// -c_ij, or nullopt when not defined.
inline std::optional<long> m_entry(const Obj& o, int i, int j) {
  long a = o.v[i], t = o.t[i][j], N = o.N;
  if (t == 0) return 0;
  for (long m = 0; m <= N; ++m) {
    bool qint_zero = a != 0 && md((m + 1) * a, N) == 0;
    bool factor_zero = md(m * a + t, N) == 0;
    if (qint_zero || factor_zero) return m;
  }
  return std::nullopt;
}

// Symmetric form values for vectors x, y: exponent of q(x,y) q(y,x), and of q(x,x).
inline long self(const Obj& o, const Vec& x) {
  long s = 0;
  int n = static_cast<int>(o.v.size());
  for (int a = 0; a < n; ++a) {
    s += x[a] * x[a] * o.v[a];
    for (int b = a + 1; b < n; ++b) s += x[a] * x[b] * o.t[a][b];
  }
  return md(s, o.N);
}
inline long pair(const Obj& o, const Vec& x, const Vec& y) {
  long s = 0;
  int n = static_cast<int>(o.v.size());
  for (int a = 0; a < n; ++a) {
    s += 2 * x[a] * y[a] * o.v[a];
    for (int b = a + 1; b < n; ++b) s += (x[a] * y[b] + x[b] * y[a]) * o.t[a][b];
  }
  return md(s, o.N);
}

// Column j of the reflection matrix at i: s_i(alpha_j).
inline std::optional<std::vector<Vec>> reflection(const Obj& o, int i) {
  int n = static_cast<int>(o.v.size());
  std::vector<Vec> s(n, Vec(n, 0));
  for (int j = 0; j < n; ++j) {
    s[j][j] = 1;
    if (j == i) {
      s[j][i] = -1;
      continue;
    }
    auto m = m_entry(o, i, j);
    if (!m) return std::nullopt;
    s[j][i] += *m;
  }
  return s;
}

inline Obj act(const Obj& o, const std::vector<Vec>& s) {
  int n = static_cast<int>(o.v.size());
  Obj r = o;
  for (int j = 0; j < n; ++j) {
    r.v[j] = self(o, s[j]);
    for (int k = 0; k < n; ++k)
      if (k != j) r.t[j][k] = pair(o, s[j], s[k]);
  }
  return r;
}

struct Result {
  bool finite = false;      // false: cap reached or some reflection undefined
  bool capped = false;
  std::set<Vec> positive;
};

inline Result positive_roots(const nichols::Diagram& d, size_t max_states = 20000) {
  Obj base = from_diagram(d);
  int n = d.rank();
  using M = std::vector<Vec>;  // columns: images of the simple roots
  M id(n, Vec(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  std::set<std::pair<Obj, M>> seen{{base, id}};
  std::vector<std::pair<Obj, M>> queue{{base, id}};
  Result res;
  for (size_t h = 0; h < queue.size(); ++h) {
    const Obj o = queue[h].first;
    const M m = queue[h].second;
    for (const auto& col : m) {
      bool pos = std::all_of(col.begin(), col.end(), [](long x) { return x >= 0; });
      if (pos) res.positive.insert(col);
    }
    for (int i = 0; i < n; ++i) {
      auto s = reflection(o, i);
      if (!s) return res;
      M m2(n, Vec(n, 0));
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) m2[j][k] += m[l][k] * (*s)[j][l];
      auto state = std::make_pair(act(o, *s), m2);
      if (seen.insert(state).second) {
        if (seen.size() > max_states) {
          res.capped = true;
          return res;
        }
        queue.push_back(state);
      }
    }
  }
  res.finite = true;
  return res;
}

}  // namespace oracle
