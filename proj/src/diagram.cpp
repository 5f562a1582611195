#include "nichols/diagram.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nichols {

Diagram::Diagram(int rank) : rank_(rank) {
  if (rank < 1 || rank > kMaxRank)
    throw std::invalid_argument("diagram rank must be between 1 and 9");
}

std::string Diagram::str() const {
  std::string out = "rank=" + std::to_string(rank_) + "; v=[";
  for (int i = 0; i < rank_; ++i) {
    if (i) out += ",";
    out += v_[i].str();
  }
  out += "]; e=[";
  bool first = true;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) {
      if (edge(i, j).is_one()) continue;
      if (!first) out += ", ";
      first = false;
      out += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")=" + edge(i, j).str();
    }
  out += "]";
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(const std::string& why) {
  throw std::invalid_argument("malformed diagram: " + why);
}

int to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("expected integer, got '" + std::string(s) + "'");
  return v;
}

// Splits "a, b, c" on commas that are not nested in parentheses.
std::vector<std::string_view> split_top(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  auto last = trim(s.substr(start));
  if (!last.empty() || !parts.empty()) parts.push_back(last);
  return parts;
}

std::string_view bracket_body(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') bad("expected [...]");
  return s.substr(1, s.size() - 2);
}

}  // namespace

Diagram parse_diagram(std::string_view text) {
  int rank = -1;
  std::string_view vpart, epart;
  bool have_v = false, have_e = false;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t semi = text.find(';', pos);
    std::string_view field = trim(text.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
    pos = semi == std::string_view::npos ? text.size() + 1 : semi + 1;
    if (field.empty()) continue;
    auto eq = field.find('=');
    if (eq == std::string_view::npos) bad("field without '=': '" + std::string(field) + "'");
    auto name = trim(field.substr(0, eq));
    auto value = trim(field.substr(eq + 1));
    if (name == "rank") {
      rank = to_int(value);
    } else if (name == "v") {
      vpart = value;
      have_v = true;
    } else if (name == "e") {
      epart = value;
      have_e = true;
    } else {
      bad("unknown field '" + std::string(name) + "'");
    }
  }
  if (!have_v) bad("missing v=[...]");
  auto vtok = split_top(bracket_body(vpart));
  if (rank < 0) rank = static_cast<int>(vtok.size());
  if (rank < 1 || rank > kMaxRank) bad("rank out of range");
  if (static_cast<int>(vtok.size()) != rank) bad("vertex count does not match rank");
  Diagram d(rank);
  for (int i = 0; i < rank; ++i) d.set_vertex(i, parse_root(vtok[i]));
  if (have_e) {
    std::vector<bool> seen(rank * rank, false);
    for (auto item : split_top(bracket_body(epart))) {
      if (item.empty()) continue;
      auto close = item.find(')');
      if (item.front() != '(' || close == std::string_view::npos) bad("bad edge '" + std::string(item) + "'");
      auto pair = item.substr(1, close - 1);
      auto comma = pair.find(',');
      if (comma == std::string_view::npos) bad("bad edge '" + std::string(item) + "'");
      int i = to_int(pair.substr(0, comma)) - 1;
      int j = to_int(pair.substr(comma + 1)) - 1;
      auto rest = trim(item.substr(close + 1));
      if (rest.empty() || rest.front() != '=') bad("bad edge '" + std::string(item) + "'");
      if (i < 0 || j < 0 || i >= rank || j >= rank || i == j) bad("edge index out of range in '" + std::string(item) + "'");
      if (seen[std::min(i, j) * rank + std::max(i, j)]) bad("duplicate edge in '" + std::string(item) + "'");
      seen[std::min(i, j) * rank + std::max(i, j)] = true;
      d.set_edge(i, j, parse_root(rest.substr(1)));
    }
  }
  return d;
}

Diagram restrict(const Diagram& d, std::vector<int> S) {
  if (S.empty()) throw std::invalid_argument("restrict: empty vertex subset");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  Diagram r(static_cast<int>(S.size()));
  for (size_t a = 0; a < S.size(); ++a) {
    if (S[a] < 0 || S[a] >= d.rank()) throw std::invalid_argument("restrict: vertex out of range");
    r.set_vertex(a, d.vertex(S[a]));
    for (size_t b = 0; b < a; ++b) r.set_edge(a, b, d.edge(S[a], S[b]));
  }
  return r;
}

Diagram permute(const Diagram& d, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != d.rank()) throw std::invalid_argument("permute: wrong length");
  Diagram r(d.rank());
  for (int i = 0; i < d.rank(); ++i) {
    r.set_vertex(i, d.vertex(perm[i]));
    for (int j = 0; j < i; ++j) r.set_edge(i, j, d.edge(perm[i], perm[j]));
  }
  return r;
}

namespace {

void put_label(std::string& out, const RootOfUnity& x) {
  uint32_t den = static_cast<uint32_t>(x.den());
  uint32_t num = static_cast<uint32_t>(x.num());
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((den >> s) & 0xff));
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((num >> s) & 0xff));
}

// Isomorphism-invariant vertex colouring, refined until stable.
std::vector<int> refined_colors(const Diagram& d) {
  const int n = d.rank();
  std::vector<RootOfUnity> labels;
  for (int i = 0; i < n; ++i) labels.push_back(d.vertex(i));
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<int> color(n);
  for (int i = 0; i < n; ++i)
    color[i] = static_cast<int>(std::lower_bound(labels.begin(), labels.end(), d.vertex(i)) - labels.begin());
  int classes = static_cast<int>(labels.size());
  using Sig = std::pair<int, std::vector<std::pair<RootOfUnity, int>>>;
  while (true) {
    std::vector<Sig> sig(n);
    for (int i = 0; i < n; ++i) {
      sig[i].first = color[i];
      for (int j = 0; j < n; ++j)
        if (d.adjacent(i, j)) sig[i].second.emplace_back(d.edge(i, j), color[j]);
      std::sort(sig[i].second.begin(), sig[i].second.end());
    }
    std::vector<Sig> uniq = sig;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (int i = 0; i < n; ++i)
      color[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
    if (static_cast<int>(uniq.size()) == classes) break;
    classes = static_cast<int>(uniq.size());
  }
  return color;
}

struct KeySearch {
  const Diagram& d;
  std::vector<int> color;
  int n;
  std::vector<RootOfUnity> best;  // flattened encoding
  std::vector<int> best_order;
  bool have_best = false;
  std::vector<int> order;
  std::vector<RootOfUnity> cur;
  std::vector<bool> used;

  explicit KeySearch(const Diagram& dd) : d(dd), color(refined_colors(dd)), n(dd.rank()), used(dd.rank(), false) {}

  // Token of vertex v placed at position k = order.size().
  void token(int v, std::vector<RootOfUnity>& t) const {
    t.clear();
    t.push_back(d.vertex(v));
    for (int p : order) t.push_back(d.edge(v, p));
  }

  // cmp: -1 if cur prefix already smaller than best, 0 if equal so far.
  void dfs(int cmp) {
    const int k = static_cast<int>(order.size());
    if (k == n) {
      if (!have_best || cmp < 0) {
        best = cur;
        best_order = order;
        have_best = true;
      }
      return;
    }
    int mincolor = n + 1;
    for (int v = 0; v < n; ++v)
      if (!used[v]) mincolor = std::min(mincolor, color[v]);
    std::vector<RootOfUnity> t, tmin;
    std::vector<int> cands;
    for (int v = 0; v < n; ++v) {
      if (used[v] || color[v] != mincolor) continue;
      token(v, t);
      if (cands.empty() || t < tmin) {
        tmin = t;
        cands.assign(1, v);
      } else if (t == tmin) {
        cands.push_back(v);
      }
    }
    int next_cmp = cmp;
    const size_t off = cur.size();
    if (have_best && cmp == 0) {
      auto first = best.begin() + static_cast<long>(off);
      auto last = first + static_cast<long>(tmin.size());
      if (std::lexicographical_compare(first, last, tmin.begin(), tmin.end())) return;
      next_cmp = std::equal(first, last, tmin.begin()) ? 0 : -1;
    }
    for (int v : cands) {
      used[v] = true;
      order.push_back(v);
      cur.insert(cur.end(), tmin.begin(), tmin.end());
      dfs(next_cmp);
      cur.resize(off);
      order.pop_back();
      used[v] = false;
      // Once a strictly better branch has been recorded, later siblings are
      // compared against it.
      if (next_cmp < 0) next_cmp = 0;
      if (have_best && next_cmp == 0) {
        auto first = best.begin() + static_cast<long>(off);
        auto last = first + static_cast<long>(tmin.size());
        if (std::lexicographical_compare(first, last, tmin.begin(), tmin.end())) return;
        next_cmp = std::equal(first, last, tmin.begin()) ? 0 : -1;
      }
    }
  }
};

}  // namespace

std::string canonical_key(const Diagram& d, std::vector<int>* order) {
  KeySearch ks(d);
  ks.dfs(0);
  std::string out;
  out.reserve(1 + ks.best.size() * 8);
  out.push_back(static_cast<char>(d.rank()));
  for (const auto& x : ks.best) put_label(out, x);
  if (order) *order = ks.best_order;
  return out;
}

std::string canonical_key(const Diagram& d) { return canonical_key(d, nullptr); }

Diagram canonical_form(const Diagram& d) {
  std::vector<int> order;
  canonical_key(d, &order);
  return permute(d, order);
}

std::string exact_key(const Diagram& d) {
  std::string out;
  out.push_back(static_cast<char>(d.rank()));
  for (int i = 0; i < d.rank(); ++i) {
    put_label(out, d.vertex(i));
    for (int j = 0; j < i; ++j) put_label(out, d.edge(i, j));
  }
  return out;
}

int degree(const Diagram& d, int i) {
  int k = 0;
  for (int j = 0; j < d.rank(); ++j) k += d.adjacent(i, j);
  return k;
}

std::vector<std::vector<int>> components(const Diagram& d) {
  const int n = d.rank();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = static_cast<int>(out.size());
    for (size_t h = 0; h < members.size(); ++h)
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && d.adjacent(members[h], j)) {
          comp[j] = comp[s];
          members.push_back(j);
        }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

bool is_connected(const Diagram& d) { return components(d).size() == 1; }

std::vector<int> non_cut_vertices(const Diagram& d) {
  std::vector<int> out;
  if (d.rank() == 1) return {0};
  for (int v = 0; v < d.rank(); ++v) {
    std::vector<int> rest;
    for (int j = 0; j < d.rank(); ++j)
      if (j != v) rest.push_back(j);
    if (is_connected(restrict(d, rest))) out.push_back(v);
  }
  return out;
}

bool has_cycle(const Diagram& d, int len) {
  const int n = d.rank();
  if (len < 3 || len > n) return false;
  // Simple cycles through `len` vertices whose smallest vertex is the start.
  std::vector<int> path;
  std::vector<bool> on(n, false);
  std::function<bool(int)> extend = [&](int v) -> bool {
    if (static_cast<int>(path.size()) == len) return d.adjacent(v, path.front());
    for (int w = path.front() + 1; w < n; ++w) {
      if (on[w] || !d.adjacent(v, w)) continue;
      on[w] = true;
      path.push_back(w);
      bool ok = extend(w);
      path.pop_back();
      on[w] = false;
      if (ok) return true;
    }
    return false;
  };
  for (int s = 0; s < n; ++s) {
    path.assign(1, s);
    std::fill(on.begin(), on.end(), false);
    on[s] = true;
    if (extend(s)) return true;
  }
  return false;
}

std::string Shape::name() const {
  switch (kind) {
    case ShapeKind::Line: return "line";
    case ShapeKind::Triangle: return "triangle";
    case ShapeKind::Square: return "square(" + std::to_string(a) + ")";
    case ShapeKind::Tadpole: return "tadpole";
    case ShapeKind::Tripod: return "tripod";
    case ShapeKind::TriangleInMiddle: return "triangle-in-middle(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case ShapeKind::Etype: return "E" + std::to_string(a);
    case ShapeKind::Star: return "star";
    case ShapeKind::Bowtie: return "bowtie";
    case ShapeKind::Semidirect: return "semidirect";
    case ShapeKind::Cross: return "cross";
    case ShapeKind::ExtendedE6: return "extended-E6";
    case ShapeKind::Other: return "other";
  }
  return "other";
}

namespace {

// Length of the path hanging from `from` through `next`, assuming a tree
// branch made only of degree <= 2 vertices. Returns -1 otherwise.
int arm_length(const Diagram& d, int from, int next) {
  int len = 1, prev = from, cur = next;
  while (true) {
    int deg = degree(d, cur);
    if (deg == 1) return len;
    if (deg != 2) return -1;
    int nxt = -1;
    for (int j = 0; j < d.rank(); ++j)
      if (j != prev && d.adjacent(cur, j)) nxt = j;
    prev = cur;
    cur = nxt;
    ++len;
  }
}

}  // namespace

Shape classify_shape(const Diagram& d) {
  const int n = d.rank();
  Shape s;
  if (!is_connected(d)) return s;
  int edges = 0, maxdeg = 0;
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) {
    deg[i] = degree(d, i);
    edges += deg[i];
    maxdeg = std::max(maxdeg, deg[i]);
  }
  edges /= 2;
  const int cyclomatic = edges - n + 1;

  if (cyclomatic == 0) {
    if (maxdeg <= 2) {
      s.kind = ShapeKind::Line;
      return s;
    }
    std::vector<int> hubs;
    for (int i = 0; i < n; ++i)
      if (deg[i] >= 3) hubs.push_back(i);
    if (hubs.size() != 1) return s;
    int h = hubs[0];
    std::vector<int> arms;
    for (int j = 0; j < n; ++j)
      if (d.adjacent(h, j)) arms.push_back(arm_length(d, h, j));
    std::sort(arms.begin(), arms.end());
    if (arms.front() < 0) return s;
    if (arms.size() == 4 && arms.back() == 1) {
      s.kind = ShapeKind::Cross;
    } else if (arms.size() == 3) {
      if (arms[0] == 1 && arms[1] == 1) {
        s.kind = ShapeKind::Tripod;
        s.a = n;
      } else if (arms[0] == 1 && arms[1] == 2 && arms[2] <= 4) {
        s.kind = ShapeKind::Etype;
        s.a = n;
      } else if (arms[0] == 2 && arms[1] == 2 && arms[2] == 2) {
        s.kind = ShapeKind::ExtendedE6;
      }
    }
    return s;
  }

  if (n == 4 && has_cycle(d, 4)) {
    s.kind = ShapeKind::Square;
    s.a = edges - 4;
    return s;
  }

  // Triangles (as vertex triples).
  std::vector<std::array<int, 3>> tri;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (d.adjacent(i, j) && d.adjacent(j, k) && d.adjacent(i, k)) tri.push_back({i, j, k});

  if (n == 5 && maxdeg == 4 && cyclomatic == 2 && tri.size() == 2) {
    s.kind = ShapeKind::Bowtie;
    return s;
  }
  if (n == 5 && maxdeg == 4 && cyclomatic == 1 && tri.size() == 1) {
    s.kind = ShapeKind::Semidirect;
    return s;
  }

  if (cyclomatic == 1 && tri.size() == 1) {
    if (n == 3) {
      s.kind = ShapeKind::Triangle;
      return s;
    }
    auto t = tri[0];
    std::vector<int> tails;  // per triangle vertex: length of its tail (0 if none)
    for (int v : t) {
      int len = 0;
      for (int j = 0; j < n; ++j) {
        if (j == t[0] || j == t[1] || j == t[2] || !d.adjacent(v, j)) continue;
        if (len != 0) return s;  // two tails at one vertex
        len = arm_length(d, v, j);
        if (len < 0) return s;
      }
      tails.push_back(len);
    }
    std::sort(tails.begin(), tails.end());
    if (tails[0] == 0 && tails[1] == 0) {
      s.kind = ShapeKind::Tadpole;
    } else if (tails[0] == 0) {
      s.kind = ShapeKind::TriangleInMiddle;
      s.a = tails[1];
      s.b = tails[2];
    } else {
      s.kind = ShapeKind::Star;
    }
    return s;
  }

  return s;
}

}  // namespace nichols
