#include "nichols/cartan.hpp"

#include <algorithm>
#include <numeric>

namespace nichols {

BraidingMatrix BraidingMatrix::canonical(const Diagram& d) {
  BraidingMatrix b;
  b.rank = d.rank();
  for (int i = 0; i < d.rank(); ++i) {
    b.q[i][i] = d.vertex(i);
    for (int j = i + 1; j < d.rank(); ++j) b.q[i][j] = d.edge(i, j);
  }
  return b;
}

Diagram BraidingMatrix::diagram() const {
  Diagram d(rank);
  for (int i = 0; i < rank; ++i) {
    d.set_vertex(i, q[i][i]);
    for (int j = i + 1; j < rank; ++j) d.set_edge(i, j, q[i][j] * q[j][i]);
  }
  return d;
}

std::vector<std::vector<int64_t>> CartanMatrix::rows() const {
  std::vector<std::vector<int64_t>> out(rank, std::vector<int64_t>(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) out[i][j] = c[i][j];
  return out;
}

namespace {

// Modular inverse of a modulo m (gcd(a, m) = 1, m >= 1).
int64_t inv_mod(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, r = mod64(a, m);
  while (r != 0) {
    int64_t t = g / r;
    std::tie(g, r) = std::make_pair(r, g - t * r);
    std::tie(x, x1) = std::make_pair(x1, x - t * x1);
  }
  return mod64(x, m);
}

// Least n >= 0 with a^n * b = 1, if any.
std::optional<int64_t> discrete_solve(const RootOfUnity& a, const RootOfUnity& b) {
  if (b.is_one()) return 0;
  const int64_t L = lcm64(a.den(), b.den());
  const int64_t A = a.num() * (L / a.den()) % L;
  const int64_t B = b.num() * (L / b.den()) % L;
  // n * A + B == 0 (mod L)
  const int64_t g = gcd64(A, L);
  const int64_t rhs = mod64(-B, L);
  if (rhs % g != 0) return std::nullopt;
  const int64_t m = L / g;
  return static_cast<int64_t>((__int128)(rhs / g) * inv_mod(A / g, m) % m);
}

}  // namespace

std::optional<int64_t> cartan_entry(const RootOfUnity& qii, const RootOfUnity& qtij) {
  std::optional<int64_t> best = discrete_solve(qii, qtij);
  if (!qii.is_one()) {
    int64_t cand = qii.order() - 1;
    if (!best || cand < *best) best = cand;
  }
  if (!best) return std::nullopt;
  return -*best;
}

std::optional<int64_t> cartan_entry(const BraidingMatrix& q, int i, int j) {
  if (i == j) throw std::invalid_argument("cartan_entry: i must differ from j");
  return cartan_entry(q.q[i][i], q.q[i][j] * q.q[j][i]);
}

std::optional<std::array<int64_t, kMaxRank>> cartan_row(const Diagram& d, int i) {
  std::array<int64_t, kMaxRank> row{};
  for (int j = 0; j < d.rank(); ++j) {
    if (j == i) {
      row[j] = 2;
      continue;
    }
    auto c = cartan_entry(d.vertex(i), d.edge(i, j));
    if (!c) return std::nullopt;
    row[j] = *c;
  }
  return row;
}

CartanResult cartan_matrix(const Diagram& d) {
  CartanResult res;
  CartanMatrix C;
  C.rank = d.rank();
  for (int i = 0; i < d.rank(); ++i) {
    auto row = cartan_row(d, i);
    if (!row) {
      res.failing_vertex = i;
      return res;
    }
    C.c[i] = *row;
  }
  res.matrix = C;
  return res;
}

std::optional<bool> is_cartan_type(const Diagram& d) {
  auto cm = cartan_matrix(d);
  if (!cm.ok()) return std::nullopt;
  const auto& C = *cm.matrix;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j)
      if (i != j && d.vertex(i).pow(C(i, j)) != d.edge(i, j)) return false;
  return true;
}

std::vector<std::pair<int, int>> zero_pattern_violations(const CartanMatrix& C) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < C.rank; ++i)
    for (int j = 0; j < C.rank; ++j)
      if (i != j && C(i, j) == 0 && C(j, i) != 0) out.emplace_back(i, j);
  return out;
}

namespace {

// Recognizes one connected component (vertex list `vs`). Returns "" if the
// component is not of finite type.
std::string classify_component(const CartanMatrix& C, const std::vector<int>& vs) {
  const int k = static_cast<int>(vs.size());
  if (k == 1) return "A1";
  std::vector<std::vector<int>> adj(k);
  int edges = 0;
  int heavy = 0;  // edges with product 2 or 3
  int heavy_a = -1, heavy_b = -1;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      int64_t x = C(vs[a], vs[b]), y = C(vs[b], vs[a]);
      if (x == 0 && y == 0) continue;
      if (x == 0 || y == 0 || x > 0 || y > 0) return "";
      int64_t p = x * y;
      if (p > 3 || (p > 1 && std::min(x, y) != -p)) return "";
      adj[a].push_back(b);
      adj[b].push_back(a);
      ++edges;
      if (p > 1) {
        ++heavy;
        heavy_a = a;
        heavy_b = b;
      }
    }
  if (edges != k - 1) return "";  // components are connected, so tree iff k-1 edges
  int maxdeg = 0;
  for (auto& v : adj) maxdeg = std::max(maxdeg, static_cast<int>(v.size()));
  auto tag = [](const char* s, int n) { return std::string(s) + std::to_string(n); };
  if (heavy == 0) {
    if (maxdeg <= 2) return tag("A", k);
    if (maxdeg > 3) return "";
    int hub = -1, hubs = 0;
    for (int a = 0; a < k; ++a)
      if (adj[a].size() == 3) {
        hub = a;
        ++hubs;
      }
    if (hubs != 1) return "";
    std::vector<int> arms;
    for (int s : adj[hub]) {
      int len = 1, prev = hub, cur = s;
      while (adj[cur].size() == 2) {
        int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = nxt;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return tag("D", k);
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return tag("E", k);
    return "";
  }
  if (heavy > 1 || maxdeg > 2) return "";
  int64_t x = C(vs[heavy_a], vs[heavy_b]), y = C(vs[heavy_b], vs[heavy_a]);
  if (x * y == 3) return k == 2 ? "G2" : "";
  if (k == 2) return "B2";
  bool a_leaf = adj[heavy_a].size() == 1, b_leaf = adj[heavy_b].size() == 1;
  if (!a_leaf && !b_leaf) return k == 4 ? "F4" : "";
  // Orient so that `leaf` is the end vertex of the double edge.
  int leaf = a_leaf ? heavy_a : heavy_b, inner = a_leaf ? heavy_b : heavy_a;
  if (k == 3 && a_leaf && b_leaf) return "";  // impossible in a path of length 3
  return C(vs[leaf], vs[inner]) == -2 ? tag("B", k) : tag("C", k);
}

}  // namespace

FiniteTypeResult gcm_finite_type(const CartanMatrix& C) {
  const int n = C.rank;
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = static_cast<int>(comps.size());
    for (size_t h = 0; h < members.size(); ++h)
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && j != members[h] && (C(members[h], j) != 0 || C(j, members[h]) != 0)) {
          comp[j] = comp[s];
          members.push_back(j);
        }
    std::sort(members.begin(), members.end());
    comps.push_back(std::move(members));
  }
  FiniteTypeResult res;
  std::vector<std::string> names;
  for (const auto& vs : comps) {
    std::string name = classify_component(C, vs);
    if (name.empty()) return FiniteTypeResult{};
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  res.finite = true;
  for (size_t i = 0; i < names.size(); ++i) res.name += (i ? "+" : "") + names[i];
  return res;
}

}  // namespace nichols
