#include "nichols/criteria.hpp"

#include <algorithm>
#include <unordered_map>
#include <numeric>
#include <sstream>

#include "nichols/weyl.hpp"

namespace nichols {

namespace {

// Determinant by fraction-free elimination; entries stay tiny here.
int64_t det(std::vector<std::vector<int64_t>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  int64_t sign = 1, prev = 1;
  for (int k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      int p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

DegreeVector unit(int i) {
  DegreeVector v{};
  v[i] = 1;
  return v;
}

int64_t m_entry(const Diagram& d, int i, int j) {
  auto row = cartan_row(d, i);
  if (!row) throw CriteriumError("criterium: vertex " + std::to_string(i + 1) + " is not reflectable");
  return -(*row)[j];
}

void check_index(const Diagram& d, int i, const char* what) {
  if (i < 0 || i >= d.rank())
    throw CriteriumError(std::string(what) + ": index " + std::to_string(i + 1) + " out of range");
}

void check_perm(const Diagram& d, const std::vector<int>& sigma, const char* what) {
  std::vector<int> s = sigma;
  std::sort(s.begin(), s.end());
  for (int k = 0; k < static_cast<int>(s.size()); ++k)
    if (s[k] != k || static_cast<int>(s.size()) != d.rank())
      throw CriteriumError(std::string(what) + ": not a permutation of the vertices");
}

// Simple paths visiting exactly len distinct vertices, as ordered lists.
void paths(const Diagram& d, int len, std::vector<int>& cur, std::vector<bool>& used,
           std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v < d.rank(); ++v) {
    if (used[v]) continue;
    if (!cur.empty() && !d.adjacent(cur.back(), v)) continue;
    used[v] = true;
    cur.push_back(v);
    paths(d, len, cur, used, out);
    cur.pop_back();
    used[v] = false;
  }
}

std::vector<std::vector<int>> all_paths(const Diagram& d, int len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(d.rank(), false);
  paths(d, len, cur, used, out);
  return out;
}

// Completes a prefix of vertices into a permutation, the rest increasing.
std::vector<int> complete(const std::vector<int>& prefix, int n) {
  std::vector<int> s = prefix;
  for (int v = 0; v < n; ++v)
    if (std::find(prefix.begin(), prefix.end(), v) == prefix.end()) s.push_back(v);
  return s;
}

}  // namespace

DegreeBasis DegreeBasis::make(int theta, std::vector<DegreeVector> B) {
  if (theta < 2 || theta > kMaxRank) throw std::invalid_argument("degree basis: bad rank");
  if (static_cast<int>(B.size()) != theta - 1)
    throw std::invalid_argument("degree basis: need theta-1 vectors");
  DegreeBasis b;
  b.theta = theta;
  b.B = std::move(B);
  // omega_k = (-1)^k det(B with column k deleted)
  bool zero = true;
  int64_t g = 0;
  std::array<int64_t, kMaxRank> om{};
  for (int k = 0; k < theta; ++k) {
    std::vector<std::vector<int64_t>> m;
    for (const auto& v : b.B) {
      std::vector<int64_t> row;
      for (int c = 0; c < theta; ++c)
        if (c != k) row.push_back(v[c]);
      m.push_back(row);
    }
    om[k] = (k % 2 ? -1 : 1) * det(m);
    if (om[k] != 0) zero = false;
    g = std::gcd(g, om[k] < 0 ? -om[k] : om[k]);
  }
  if (zero) throw std::invalid_argument("degree basis: vectors are linearly dependent");
  for (int k = 0; k < theta; ++k) b.omega[k] = static_cast<int>(om[k] / g);
  return b;
}

std::string DegreeBasis::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t k = 0; k < B.size(); ++k) {
    if (k) os << ", ";
    bool first = true;
    for (int i = 0; i < theta; ++i) {
      if (B[k][i] == 0) continue;
      if (!first) os << "+";
      if (B[k][i] != 1) os << B[k][i];
      os << "a" << i + 1;
      first = false;
    }
  }
  os << "}";
  return os.str();
}

Diagram degree_vector_diagram(const BraidingMatrix& q, const DegreeBasis& basis) {
  const int n = q.rank;
  auto qab = [&](const DegreeVector& a, const DegreeVector& b) {
    RootOfUnity x = RootOfUnity::one();
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < n; ++j)
        if (b[j] != 0) x *= q.q[i][j].pow(static_cast<int64_t>(a[i]) * b[j]);
    }
    return x;
  };
  const int r = static_cast<int>(basis.B.size());
  Diagram out(r);
  for (int k = 0; k < r; ++k) {
    out.set_vertex(k, qab(basis.B[k], basis.B[k]));
    for (int l = k + 1; l < r; ++l)
      out.set_edge(k, l, qab(basis.B[k], basis.B[l]) * qab(basis.B[l], basis.B[k]));
  }
  return out;
}

Diagram degree_vector_diagram(const Diagram& d, const DegreeBasis& B) {
  return degree_vector_diagram(BraidingMatrix::canonical(d), B);
}

DegreeBasis basis_A(const Diagram& d, int i, int j, int n) {
  check_index(d, i, "criterium A");
  check_index(d, j, "criterium A");
  if (i == j) throw CriteriumError("criterium A: i and j must differ");
  int64_t m = m_entry(d, i, j);
  if (m == 0) throw CriteriumError("criterium A: m_ij = 0");
  if (n < 1 || n > m)
    throw CriteriumError("criterium A: need 1 <= n <= m_ij = " + std::to_string(m));
  std::vector<DegreeVector> B;
  for (int k = 0; k < d.rank(); ++k) {
    if (k == i) continue;
    DegreeVector v = unit(k);
    if (k == j) v[i] = n;
    B.push_back(v);
  }
  return DegreeBasis::make(d.rank(), B);
}

Diagram criterium_A(const Diagram& d, int i, int j, int n) {
  return degree_vector_diagram(d, basis_A(d, i, j, n));
}

Diagram collapse(const Diagram& d, int i, int j) {
  if (i == j || !d.adjacent(i, j)) throw CriteriumError("collapse: vertices must be adjacent");
  // Direct label formula for the root alpha_i + alpha_j.
  const int n = d.rank();
  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (k != i) keep.push_back(k);
  Diagram out(n - 1);
  for (int a = 0; a < n - 1; ++a) {
    int k = keep[a];
    if (k == j)
      out.set_vertex(a, d.vertex(i) * d.vertex(j) * d.edge(i, j));
    else
      out.set_vertex(a, d.vertex(k));
    for (int b = a + 1; b < n - 1; ++b) {
      int l = keep[b];
      RootOfUnity x = d.edge(k, l);
      if (k == j) x *= d.edge(i, l);
      if (l == j) x *= d.edge(i, k);
      out.set_edge(a, b, x);
    }
  }
  return out;
}

Diagram criterium_B(const Diagram& d, int i, int j, int k) {
  for (int x : {i, j, k}) check_index(d, x, "criterium B");
  if (i == j || j == k || i == k) throw CriteriumError("criterium B: indices must be pairwise different");
  if (m_entry(d, i, k) == 0 || m_entry(d, j, k) == 0)
    throw CriteriumError("criterium B: need m_ik and m_jk nonzero");
  std::vector<DegreeVector> B;
  DegreeVector a = unit(i), b = unit(j);
  a[k] = 1;
  b[k] = 1;
  B.push_back(a);
  B.push_back(b);
  for (int p = 0; p < d.rank(); ++p)
    if (p != i && p != j && p != k) B.push_back(unit(p));
  return degree_vector_diagram(d, DegreeBasis::make(d.rank(), B));
}

Diagram criterium_C(const Diagram& d) {
  const int t = d.rank();
  if (t < 6) throw CriteriumError("criterium C: needs rank >= 6");
  for (int i = 1; i <= t - 2; ++i)
    if (m_entry(d, i, i + 1) == 0)
      throw CriteriumError("criterium C: m_" + std::to_string(i + 1) + "," + std::to_string(i + 2) + " = 0");
  std::vector<DegreeVector> B;
  B.push_back(unit(0));
  for (int i = 1; i <= t - 3; ++i) {
    DegreeVector v = unit(i);
    v[i + 1] = 1;
    B.push_back(v);
  }
  B.push_back(unit(t - 1));
  return degree_vector_diagram(d, DegreeBasis::make(t, B));
}

Diagram criterium_D(const Diagram& d, const std::vector<int>& sigma, int m, int n) {
  if (d.rank() != 4) throw CriteriumError("criterium D: needs rank 4");
  check_perm(d, sigma, "criterium D");
  Diagram e = permute(d, sigma);
  int64_t m21 = m_entry(e, 1, 0), m23 = m_entry(e, 1, 2);
  if (m21 == 0 || m23 == 0) throw CriteriumError("criterium D: need m_21 and m_23 nonzero");
  if (m < 1 || m > m21 || n < 1 || n > m23) throw CriteriumError("criterium D: need 1 <= m <= m_21, 1 <= n <= m_23");
  DegreeVector a = unit(0), b = unit(2);
  a[1] = m;
  b[1] = n;
  return degree_vector_diagram(e, DegreeBasis::make(4, {a, b, unit(3)}));
}

Diagram criterium_E(const Diagram& d, const std::vector<int>& sigma, int m, int n, int p) {
  if (d.rank() != 4) throw CriteriumError("criterium E: needs rank 4");
  check_perm(d, sigma, "criterium E");
  Diagram e = permute(d, sigma);
  int64_t m12 = m_entry(e, 0, 1), m23 = m_entry(e, 1, 2), m34 = m_entry(e, 2, 3);
  if (m12 == 0 || m23 == 0 || m34 == 0) throw CriteriumError("criterium E: need m_12, m_23, m_34 nonzero");
  if (m < 1 || m > m12 || n < 1 || n > m23 || p < 1 || p > m34)
    throw CriteriumError("criterium E: need 1 <= m <= m_12, 1 <= n <= m_23, 1 <= p <= m_34");
  DegreeVector a = unit(1), b = unit(2), c = unit(3);
  a[0] = m;
  b[1] = n;
  c[2] = p;
  return degree_vector_diagram(e, DegreeBasis::make(4, {a, b, c}));
}

Diagram criterium_F(const Diagram& d, const std::vector<int>& sigma) {
  if (d.rank() < 5) throw CriteriumError("criterium F: needs rank >= 5");
  check_perm(d, sigma, "criterium F");
  Diagram e = permute(d, sigma);
  if (m_entry(e, 0, 1) == 0 || m_entry(e, 1, 2) == 0 || m_entry(e, 2, 3) == 0)
    throw CriteriumError("criterium F: need m_12, m_23, m_34 nonzero");
  std::vector<DegreeVector> B;
  for (int i = 0; i < 3; ++i) {
    DegreeVector v = unit(i);
    v[i + 1] = 1;
    B.push_back(v);
  }
  for (int p = 4; p < e.rank(); ++p) B.push_back(unit(p));
  return degree_vector_diagram(e, DegreeBasis::make(e.rank(), B));
}

bool in_hlist(const HlistDb& db, const Diagram& d, MembershipMode mode) {
  auto comps = components(d);
  for (const auto& c : comps) {
    if (c.size() == 1) continue;
    Diagram s = comps.size() == 1 ? d : restrict(d, c);
    if (db.in_evaluated(s)) continue;
    if (mode == MembershipMode::Full && s.rank() <= 7 && membership(db, s).kind != Membership::NotInHlist) continue;
    return false;
  }
  return true;
}

std::vector<CriteriumImage> criterium_images(const Diagram& d, char crit) {
  std::vector<CriteriumImage> out;
  const int t = d.rank();
  // m_ij for reflectable rows; -1 when undefined.
  std::vector<std::vector<int64_t>> M(t, std::vector<int64_t>(t, -1));
  for (int i = 0; i < t; ++i)
    if (auto row = cartan_row(d, i))
      for (int j = 0; j < t; ++j) M[i][j] = -(*row)[j];
  auto nz = [&](int i, int j) { return M[i][j] > 0; };
  switch (crit) {
    case 'A':
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j)
          if (i != j && nz(i, j))
            for (int n = 1; n <= M[i][j]; ++n) out.push_back({'A', {i, j, n}, criterium_A(d, i, j, n)});
      break;
    case 'B':
      for (int k = 0; k < t; ++k)
        for (int i = 0; i < t; ++i)
          for (int j = i + 1; j < t; ++j)
            if (i != k && j != k && nz(i, k) && nz(j, k)) out.push_back({'B', {i, j, k}, criterium_B(d, i, j, k)});
      break;
    case 'C':
      if (t >= 6)
        for (const auto& p : all_paths(d, t - 1)) {
          std::vector<int> sigma;
          for (int v = 0; v < t; ++v)
            if (std::find(p.begin(), p.end(), v) == p.end()) sigma.push_back(v);
          sigma.insert(sigma.end(), p.begin(), p.end());
          Diagram e = permute(d, sigma);
          bool ok = true;
          for (int i = 1; i <= t - 2; ++i) ok = ok && cartan_row(e, i).has_value();
          if (ok) out.push_back({'C', sigma, criterium_C(e)});
        }
      break;
    case 'D':
      if (t == 4)
        for (int b = 0; b < 4; ++b)
          for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) {
              if (a == b || c == b || a == c || !nz(b, a) || !nz(b, c)) continue;
              std::vector<int> sigma = complete({a, b, c}, 4);
              for (int m = 1; m <= M[b][a]; ++m)
                for (int n = 1; n <= M[b][c]; ++n) {
                  std::vector<int> idx = sigma;
                  idx.push_back(m);
                  idx.push_back(n);
                  out.push_back({'D', idx, criterium_D(d, sigma, m, n)});
                }
            }
      break;
    case 'E':
      if (t == 4)
        for (const auto& p : all_paths(d, 4)) {
          if (!nz(p[0], p[1]) || !nz(p[1], p[2]) || !nz(p[2], p[3])) continue;
          for (int m = 1; m <= M[p[0]][p[1]]; ++m)
            for (int n = 1; n <= M[p[1]][p[2]]; ++n)
              for (int q = 1; q <= M[p[2]][p[3]]; ++q) {
                std::vector<int> idx = p;
                idx.insert(idx.end(), {m, n, q});
                out.push_back({'E', idx, criterium_E(d, p, m, n, q)});
              }
        }
      break;
    case 'F':
      if (t >= 5)
        for (const auto& p : all_paths(d, 4)) {
          if (!nz(p[0], p[1]) || !nz(p[1], p[2]) || !nz(p[2], p[3])) continue;
          std::vector<int> sigma = complete(p, t);
          out.push_back({'F', sigma, criterium_F(d, sigma)});
        }
      break;
    default:
      throw CriteriumError(std::string("unknown criterium ") + crit);
  }
  return out;
}

bool has_triangle(const Diagram& d) { return has_cycle(d, 3); }

bool forbidden_shape(const Diagram& d) {
  for (const auto& c : components(d)) {
    if (c.size() < 4) continue;
    Diagram s = c.size() == static_cast<size_t>(d.rank()) ? d : restrict(d, c);
    const int n = s.rank();
    for (int m = 4; m <= n; ++m)
      if (has_cycle(s, m)) return true;
    for (int i = 0; i < n; ++i)
      if (degree(s, i) >= 4) return true;
    Shape sh = classify_shape(s);
    switch (sh.kind) {
      case ShapeKind::Star:
      case ShapeKind::ExtendedE6:
      case ShapeKind::Bowtie:
      case ShapeKind::Semidirect:
      case ShapeKind::Cross:
      case ShapeKind::Other:
        return true;
      case ShapeKind::TriangleInMiddle:
        if (sh.a >= 2) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

std::vector<std::vector<int>> reflection_words(const Diagram& d, const Policy& policy) {
  std::vector<std::vector<int>> out;
  if (!policy.skip_base) out.push_back({});
  if (!policy.words.empty()) {
    for (const auto& w : policy.words)
      if (!w.empty()) out.push_back(w);
    return out;
  }
  // Words whose letters hit -1 vertices are filtered while walking, since the
  // label at a letter depends on the prefix.
  std::vector<std::pair<std::vector<int>, Diagram>> frontier{{{}, d}};
  for (int len = 1; len <= policy.depth; ++len) {
    std::vector<std::pair<std::vector<int>, Diagram>> next;
    for (const auto& [w, e] : frontier)
      for (int i = 0; i < d.rank(); ++i) {
        if (!w.empty() && w.back() == i) continue;
        if (policy.minus_one_only && e.vertex(i) != RootOfUnity::minus_one()) continue;
        std::vector<int> w2 = w;
        w2.push_back(i);
        out.push_back(w2);
        Diagram r;
        try {
          r = reflect(e, i);
        } catch (const NotReflectable&) {
          continue;  // reported when the word is replayed
        }
        next.emplace_back(w2, r);
      }
    frontier = std::move(next);
  }
  return out;
}

namespace {

bool cartan_fails(const Diagram& d) {
  auto cm = cartan_matrix(d);
  if (!cm.ok()) return false;
  auto ct = is_cartan_type(d);
  return ct && *ct && !gcm_finite_type(*cm.matrix).finite;
}

}  // namespace

Verdict passes_criteria(const Diagram& d, const Policy& policy, const HlistDb& db) {
  Verdict v;
  for (const auto& w : reflection_words(d, policy)) {
    Diagram e = d;
    int pos = 0;
    try {
      for (; pos < static_cast<int>(w.size()); ++pos) e = reflect(e, w[pos]);
    } catch (const NotReflectable& nr) {
      v.survives = false;
      v.reason = "NotReflectable";
      v.word.assign(w.begin(), w.begin() + pos + 1);
      v.image = e;
      return v;
    }
    auto fail = [&](std::string reason, std::vector<int> idx, Diagram img) {
      v.survives = false;
      v.reason = std::move(reason);
      v.indices = std::move(idx);
      v.word = w;
      v.image = std::move(img);
    };
    if (!w.empty() && policy.guard.any() && !in_hlist(db, e, policy.mode)) {
      if ((policy.guard.triangles && has_triangle(e)) || (policy.guard.forbidden && forbidden_shape(e))) {
        fail("Shape", {}, e);
        return v;
      }
    }
    if (policy.cartan && cartan_fails(e)) {
      fail("Cartan", {}, e);
      return v;
    }
    for (char c : policy.criteria) {
      for (auto& im : criterium_images(e, c)) {
        if (!policy.only.empty() &&
            std::find(policy.only.begin(), policy.only.end(), im.indices) == policy.only.end())
          continue;
        if (!in_hlist(db, im.image, policy.mode)) {
          fail(std::string(1, c), im.indices, im.image);
          return v;
        }
      }
    }
  }
  return v;
}

SoundnessReport hlist_soundness(const HlistDb& db, int rank, int depth, const std::string& criteria) {
  SoundnessReport rep;
  const HlistRank* hr = db.rank(rank);
  if (!hr) return rep;
  Policy p;
  p.criteria = criteria;
  p.cartan = true;
  p.mode = MembershipMode::Full;
  std::unordered_map<std::string, Verdict> cache;
  for (const auto& [key, member] : hr->members) {
    ++rep.members;
    Policy walk;
    walk.depth = depth;
    for (const auto& w : reflection_words(member, walk)) {
      ++rep.words;
      Diagram e = member;
      try {
        for (int i : w) e = reflect(e, i);
      } catch (const NotReflectable&) {
        Verdict v;
        v.survives = false;
        v.reason = "NotReflectable";
        v.word = w;
        v.image = e;
        rep.failures.push_back({member, w, v});
        continue;
      }
      auto k = canonical_key(e);
      auto it = cache.find(k);
      if (it == cache.end()) it = cache.emplace(k, passes_criteria(e, p, db)).first;
      if (!it->second.survives) rep.failures.push_back({member, w, it->second});
    }
  }
  rep.distinct = cache.size();
  return rep;
}

bool criterium_index_is_vertex(char criterium, size_t k) {
  switch (criterium) {
    case 'A': return k < 2;
    case 'D':
    case 'E': return k < 4;
    default: return true;
  }
}

std::string Verdict::str() const {
  if (survives) return "Survives";
  std::ostringstream os;
  os << "Fails(" << reason;
  if (!indices.empty()) {
    os << ", (";
    // Sigma-type entries are vertex numbers; trailing multiplicities are not.
    for (size_t k = 0; k < indices.size(); ++k) {
      if (k) os << ",";
      os << (reason.size() == 1 && criterium_index_is_vertex(reason[0], k) ? indices[k] + 1 : indices[k]);
    }
    os << ")";
  }
  if (!word.empty()) {
    os << ", word=";
    for (size_t k = 0; k < word.size(); ++k) os << (k ? "," : "") << word[k] + 1;
  }
  os << ", image=" << image.str() << ")";
  return os.str();
}

}  // namespace nichols
