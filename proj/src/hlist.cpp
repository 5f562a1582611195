#include "nichols/hlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "nichols/cartan.hpp"

namespace nichols {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool read_int(std::string_view& s, int& out) {
  size_t k = 0;
  if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
  while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
  std::string tmp(s.substr(0, k));
  if (!tmp.empty() && tmp[0] == '+') tmp.erase(0, 1);
  auto [p, ec] = std::from_chars(tmp.data(), tmp.data() + tmp.size(), out);
  if (ec != std::errc() || p != tmp.data() + tmp.size()) return false;
  s.remove_prefix(k);
  return true;
}

std::vector<std::string_view> split_list(std::string_view body) {
  std::vector<std::string_view> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ',' && depth == 0) {
      out.push_back(trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }
  auto last = trim(body.substr(start));
  if (!last.empty()) out.push_back(last);
  return out;
}

}  // namespace

RootOfUnity Monomial::eval(const RootOfUnity& q, const RootOfUnity& r) const {
  RootOfUnity x = q.pow(a) * r.pow(b);
  return neg ? x * RootOfUnity::minus_one() : x;
}

std::string Monomial::str() const {
  std::string s = neg ? "-" : "+";
  if (a == 0 && b == 0) return s + "1";
  if (a != 0) s += a == 1 ? "q" : "q^" + std::to_string(a);
  if (b != 0) s += b == 1 ? "r" : "r^" + std::to_string(b);
  return s;
}

Monomial parse_monomial(std::string_view s) {
  s = trim(s);
  Monomial m;
  std::string orig(s);
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    m.neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s == "1") return m;
  if (s.empty()) throw std::invalid_argument("empty monomial");
  while (!s.empty()) {
    char v = s[0];
    if (v != 'q' && v != 'r') throw std::invalid_argument("bad monomial '" + orig + "'");
    s.remove_prefix(1);
    int e = 1;
    if (!s.empty() && s[0] == '^') {
      s.remove_prefix(1);
      if (!read_int(s, e)) throw std::invalid_argument("bad exponent in monomial '" + orig + "'");
    }
    (v == 'q' ? m.a : m.b) += e;
  }
  return m;
}

bool Constraint::holds(const RootOfUnity& q, const RootOfUnity& r) const {
  if (kind == OrderNot) return q.order() != order;
  return !m.eval(q, r).is_one();
}

std::string Constraint::str() const {
  if (kind == OrderNot) return "ord(q)!=" + std::to_string(order);
  return m.str() + "!=1";
}

Constraint parse_constraint(std::string_view s) {
  s = trim(s);
  Constraint c;
  if (s.substr(0, 8) == "ord(q)!=") {
    c.kind = Constraint::OrderNot;
    auto rest = s.substr(8);
    if (!read_int(rest, c.order) || !rest.empty() || c.order < 1)
      throw std::invalid_argument("bad constraint '" + std::string(s) + "'");
    return c;
  }
  auto ne = s.find("!=");
  if (ne == std::string_view::npos || trim(s.substr(ne + 2)) != "1")
    throw std::invalid_argument("bad constraint '" + std::string(s) + "'");
  c.m = parse_monomial(s.substr(0, ne));
  return c;
}

Diagram ParametricFamily::instantiate(const RootOfUnity& q, const RootOfUnity& r) const {
  Diagram d(rank);
  for (int i = 0; i < rank; ++i) d.set_vertex(i, pattern[i].eval(q, r));
  for (size_t k = 0; k < edges.size(); ++k) d.set_edge(edges[k].first, edges[k].second, pattern[rank + k].eval(q, r));
  return d;
}

bool ParametricFamily::is_valid(const RootOfUnity& q, const RootOfUnity& r) const {
  for (const auto& c : valid)
    if (!c.holds(q, r)) return false;
  return true;
}

Diagram ParametricFamily::skeleton() const {
  Diagram d(rank);
  for (int i = 0; i < rank; ++i) d.set_vertex(i, RootOfUnity::minus_one());
  for (auto [i, j] : edges) d.set_edge(i, j, RootOfUnity::minus_one());
  return d;
}

std::string ParametricFamily::str() const {
  std::ostringstream os;
  os << "family rank=" << rank << " arity=" << arity << " edges=[";
  for (size_t k = 0; k < edges.size(); ++k)
    os << (k ? "," : "") << "(" << edges[k].first + 1 << "," << edges[k].second + 1 << ")";
  os << "] pattern=[";
  for (size_t k = 0; k < pattern.size(); ++k) os << (k ? "," : "") << pattern[k].str();
  os << "] valid=[";
  for (size_t k = 0; k < valid.size(); ++k) os << (k ? "," : "") << valid[k].str();
  os << "] row=" << row;
  return os.str();
}

namespace {

// Extracts "name=value" fields separated by spaces; bracketed values may
// contain spaces.
std::map<std::string, std::string> fields_of(std::string_view s) {
  std::map<std::string, std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    size_t eq = s.find('=', i);
    if (eq == std::string_view::npos) throw std::invalid_argument("expected name=value near '" + std::string(s.substr(i)) + "'");
    std::string name(s.substr(i, eq - i));
    size_t j = eq + 1;
    if (j < s.size() && s[j] == '[') {
      size_t close = s.find(']', j);
      if (close == std::string_view::npos) throw std::invalid_argument("unterminated [ in field " + name);
      out[name] = std::string(s.substr(j, close - j + 1));
      i = close + 1;
    } else {
      size_t sp = s.find(' ', j);
      if (sp == std::string_view::npos) sp = s.size();
      out[name] = std::string(s.substr(j, sp - j));
      i = sp;
    }
  }
  return out;
}

std::string_view unbracket(const std::string& v) {
  std::string_view s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("expected [...]");
  return s.substr(1, s.size() - 2);
}

}  // namespace

ParametricFamily parse_family(std::string_view line) {
  line = trim(line);
  if (line.substr(0, 7) != "family ") throw std::invalid_argument("family line must start with 'family'");
  auto f = fields_of(line.substr(7));
  ParametricFamily fam;
  for (const char* need : {"rank", "arity", "edges", "pattern", "valid", "row"})
    if (!f.count(need)) throw std::invalid_argument(std::string("family without ") + need);
  fam.row = f["row"];
  fam.rank = std::stoi(f["rank"]);
  fam.arity = std::stoi(f["arity"]);
  if (fam.rank < 1 || fam.rank > kMaxRank) throw std::invalid_argument("family rank out of range");
  if (fam.arity != 1 && fam.arity != 2) throw std::invalid_argument("family arity must be 1 or 2");
  for (auto item : split_list(unbracket(f["edges"]))) {
    if (item.size() < 5 || item.front() != '(' || item.back() != ')') throw std::invalid_argument("bad edge in family");
    auto inner = item.substr(1, item.size() - 2);
    auto comma = inner.find(',');
    std::string_view a = trim(inner.substr(0, comma)), b = trim(inner.substr(comma + 1));
    int i = 0, j = 0;
    if (!read_int(a, i) || !read_int(b, j) || !a.empty() || !b.empty()) throw std::invalid_argument("bad edge in family");
    if (i < 1 || j < 1 || i > fam.rank || j > fam.rank || i == j) throw std::invalid_argument("family edge out of range");
    fam.edges.emplace_back(std::min(i, j) - 1, std::max(i, j) - 1);
  }
  for (auto item : split_list(unbracket(f["pattern"]))) fam.pattern.push_back(parse_monomial(item));
  if (fam.pattern.size() != fam.rank + fam.edges.size())
    throw std::invalid_argument("pattern length must equal rank plus number of edges");
  for (auto item : split_list(unbracket(f["valid"]))) fam.valid.push_back(parse_constraint(item));
  for (const auto& m : fam.pattern)
    if (fam.arity == 1 && m.b != 0) throw std::invalid_argument("one-parameter family uses r");
  return fam;
}

std::vector<Diagram> evaluate_family(const ParametricFamily& f) {
  std::vector<Diagram> out;
  std::unordered_set<std::string> seen;
  const auto& G = gf_elements();
  auto add = [&](const RootOfUnity& q, const RootOfUnity& r) {
    if (!f.is_valid(q, r)) return;
    Diagram d = f.instantiate(q, r);
    if (seen.insert(exact_key(d)).second) out.push_back(d);
  };
  for (const auto& q : G) {
    if (f.arity == 1) {
      add(q, RootOfUnity::one());
    } else {
      for (const auto& r : G) add(q, r);
    }
  }
  return out;
}

std::vector<Diagram> evaluate_families(const HlistDb& db, int rank) {
  std::vector<Diagram> out;
  const HlistRank* hr = db.rank(rank);
  if (!hr) return out;
  std::unordered_set<std::string> seen;
  for (const auto& f : hr->families)
    for (auto& d : evaluate_family(f))
      if (seen.insert(exact_key(d)).second) out.push_back(std::move(d));
  return out;
}

void index_hlist_rank(HlistRank& r) {
  r.finite_keys.clear();
  r.evaluated_keys.clear();
  r.members.clear();
  std::unordered_set<std::string> seen;
  auto add = [&](const Diagram& d, const std::string& tag) {
    std::vector<int> order;
    std::string key = canonical_key(d, &order);
    if (seen.insert(key).second) r.members.emplace_back(tag, permute(d, order));
    return key;
  };
  for (const auto& [tag, d] : r.finite) r.finite_keys.emplace(add(d, tag), tag);
  for (const auto& f : r.families)
    for (const auto& d : evaluate_family(f)) r.evaluated_keys.emplace(add(d, f.row), f.row);
}

HlistRank parse_hlist_rank(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  HlistRank r;
  r.rank = -1;
  auto fail = [&](const std::string& what, const std::string& row = "") {
    std::string msg = source + ":" + std::to_string(lineno) + ": " + what;
    if (!row.empty()) msg += " (row " + row + ")";
    throw HlistLoadError(msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (!header) {
      if (s != "nichols-hlist 1") fail("missing 'nichols-hlist 1' header");
      header = true;
      continue;
    }
    if (s.substr(0, 5) == "rank ") {
      std::string_view rest = s.substr(5);
      int n = 0;
      if (!read_int(rest, n) || n < 1 || n > kMaxRank) fail("bad rank line");
      r.rank = n;
      continue;
    }
    if (r.rank < 0) fail("entry before 'rank' line");
    if (s.substr(0, 7) == "family ") {
      ParametricFamily f;
      std::string row;
      try {
        auto fields = fields_of(s.substr(7));
        row = fields.count("row") ? fields["row"] : "";
        f = parse_family(s);
      } catch (const std::exception& e) {
        fail(e.what(), row);
      }
      if (f.rank != r.rank) fail("family rank differs from file rank", f.row);
      r.families.push_back(std::move(f));
    } else if (s.substr(0, 11) == "finite row=") {
      std::string_view rest = s.substr(11);
      auto sp = rest.find(' ');
      if (sp == std::string_view::npos) fail("finite entry without diagram");
      std::string tag(rest.substr(0, sp));
      try {
        Diagram d = parse_diagram(rest.substr(sp + 1));
        if (d.rank() != r.rank) fail("finite entry rank differs from file rank", tag);
        r.finite.emplace_back(tag, d);
      } catch (const HlistLoadError&) {
        throw;
      } catch (const std::exception& e) {
        fail(e.what(), tag);
      }
    } else {
      fail("unrecognized line");
    }
  }
  if (!header) fail("empty hlist file");
  if (r.rank < 0) fail("no rank line");
  index_hlist_rank(r);
  return r;
}

std::string serialize_hlist_rank(const HlistRank& r) {
  std::ostringstream os;
  os << "nichols-hlist 1\n";
  os << "rank " << r.rank << "\n";
  for (const auto& f : r.families) os << f.str() << "\n";
  for (const auto& [tag, d] : r.finite) os << "finite row=" << tag << " " << d.str() << "\n";
  return os.str();
}

HlistDb load_hlist(const std::string& path) {
  namespace fs = std::filesystem;
  HlistDb db;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& ent : fs::directory_iterator(path)) {
      auto name = ent.path().filename().string();
      if (name.rfind("rank", 0) == 0 && ent.path().extension() == ".txt") files.push_back(ent.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw HlistLoadError("no rank*.txt files in " + path);
  } else if (fs::exists(path)) {
    files.emplace_back(path);
  } else {
    throw HlistLoadError("hlist data not found: " + path);
  }
  for (const auto& p : files) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    HlistRank r = parse_hlist_rank(buf.str(), p.string());
    if (db.ranks.count(r.rank)) throw HlistLoadError("duplicate data for rank " + std::to_string(r.rank));
    db.ranks.emplace(r.rank, std::move(r));
  }
  return db;
}

bool HlistDb::in_evaluated_key(int n, const std::string& key) const {
  if (n == 1) return true;
  const HlistRank* hr = rank(n);
  if (!hr) return false;
  return hr->finite_keys.count(key) || hr->evaluated_keys.count(key);
}

bool HlistDb::in_evaluated(const Diagram& d) const {
  if (d.rank() == 1) return true;
  return in_evaluated_key(d.rank(), canonical_key(d));
}

std::string Membership::str() const {
  switch (kind) {
    case InFinite: return "InFinite(" + tag + ")";
    case InFamily: return "InFamily(" + tag + ", q=" + q.str() + (r.is_one() ? "" : ", r=" + r.str()) + ")";
    case NotInHlist: return "NotInHlist";
  }
  return "?";
}

namespace {

// All bijections phi (family vertex -> diagram vertex) carrying the family
// edge graph onto the diagram edge graph.
void isomorphisms(const ParametricFamily& f, const Diagram& d, const std::function<bool(const std::vector<int>&)>& visit) {
  const int n = f.rank;
  std::vector<std::vector<bool>> fadj(n, std::vector<bool>(n, false));
  for (auto [i, j] : f.edges) fadj[i][j] = fadj[j][i] = true;
  std::vector<int> fdeg(n, 0), ddeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      fdeg[i] += fadj[i][j];
      ddeg[i] += d.adjacent(i, j);
    }
  std::vector<int> phi(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> go = [&](int i) -> bool {
    if (i == n) return visit(phi);
    for (int t = 0; t < n; ++t) {
      if (used[t] || fdeg[i] != ddeg[t]) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) ok = fadj[i][k] == d.adjacent(t, phi[k]);
      if (!ok) continue;
      used[t] = true;
      phi[i] = t;
      if (go(i + 1)) return true;
      used[t] = false;
    }
    phi[i] = -1;
    return false;
  };
  go(0);
}

// q with q^a = x, all |a| of them.
std::vector<RootOfUnity> roots_of(const RootOfUnity& x, int a) {
  std::vector<RootOfUnity> out;
  RootOfUnity t = a > 0 ? x : x.inv();
  int k = std::abs(a);
  for (int j = 0; j < k; ++j) out.push_back(RootOfUnity::from(t.num() + j * t.den(), t.den() * k));
  return out;
}

}  // namespace

std::optional<Membership> match_family(const ParametricFamily& f, const Diagram& d) {
  if (f.rank != d.rank()) return std::nullopt;
  int edges = 0;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = i + 1; j < d.rank(); ++j) edges += d.adjacent(i, j);
  if (edges != static_cast<int>(f.edges.size())) return std::nullopt;

  // Anchor slots: one with only q (a != 0, b == 0) and, for two parameters,
  // one with only r.
  int qa = -1, rb = -1;
  for (size_t s = 0; s < f.pattern.size(); ++s) {
    const auto& m = f.pattern[s];
    if (qa < 0 && m.a != 0 && m.b == 0) qa = static_cast<int>(s);
    if (rb < 0 && m.b != 0 && m.a == 0) rb = static_cast<int>(s);
  }
  if (qa < 0 || (f.arity == 2 && rb < 0)) return std::nullopt;

  auto slot_value = [&](const std::vector<int>& phi, int s) -> RootOfUnity {
    if (s < f.rank) return d.vertex(phi[s]);
    auto [i, j] = f.edges[s - f.rank];
    return d.edge(phi[i], phi[j]);
  };

  std::optional<Membership> found;
  isomorphisms(f, d, [&](const std::vector<int>& phi) {
    const Monomial& ma = f.pattern[qa];
    RootOfUnity xa = slot_value(phi, qa);
    if (ma.neg) xa = xa * RootOfUnity::minus_one();
    for (const auto& q : roots_of(xa, ma.a)) {
      std::vector<RootOfUnity> rs{RootOfUnity::one()};
      if (f.arity == 2) {
        const Monomial& mb = f.pattern[rb];
        RootOfUnity xb = slot_value(phi, rb);
        if (mb.neg) xb = xb * RootOfUnity::minus_one();
        rs = roots_of(xb, mb.b);
      }
      for (const auto& r : rs) {
        bool ok = true;
        for (size_t s = 0; s < f.pattern.size() && ok; ++s) ok = f.pattern[s].eval(q, r) == slot_value(phi, static_cast<int>(s));
        if (!ok || !f.is_valid(q, r)) continue;
        Membership m;
        m.kind = Membership::InFamily;
        m.tag = f.row;
        m.q = q;
        m.r = r;
        found = m;
        return true;
      }
    }
    return false;
  });
  return found;
}

Membership membership(const HlistDb& db, const Diagram& d) {
  if (d.rank() > 7) throw std::invalid_argument("membership: rank above 7 is not tabulated");
  Membership m;
  if (d.rank() == 1) {
    m.kind = Membership::InFamily;
    m.tag = "r1-point";
    m.q = d.vertex(0);
    return m;
  }
  const HlistRank* hr = db.rank(d.rank());
  if (!hr) return m;
  std::string key = canonical_key(d);
  if (auto it = hr->finite_keys.find(key); it != hr->finite_keys.end()) {
    m.kind = Membership::InFinite;
    m.tag = it->second;
    return m;
  }
  for (const auto& f : hr->families)
    if (auto fm = match_family(f, d)) return *fm;
  return m;
}

std::string resolve_hlist_path(const std::string& flag_value) {
  namespace fs = std::filesystem;
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NICHOLS_HLIST"); env && *env) return env;
  if (fs::exists("data/hlist")) return "data/hlist";
#ifdef NICHOLS_SOURCE_DIR
  return std::string(NICHOLS_SOURCE_DIR) + "/data/hlist";
#else
  return "data/hlist";
#endif
}

}  // namespace nichols

namespace nichols {

namespace {

bool in_g(const RootOfUnity& x, int m) { return m % x.order() == 0; }

// A generic parameter value: order 10007 is prime and large enough that no
// relation among the small exponents in a pattern holds by accident.
RootOfUnity generic_q() { return RootOfUnity::from(2, 20014); }
RootOfUnity generic_r() { return RootOfUnity::from(6, 20014); }

bool is_member(const HlistDb& db, const Diagram& d) {
  if (db.in_evaluated(d)) return true;
  return membership(db, d).kind != Membership::NotInHlist;
}

}  // namespace

ValidationReport hlist_validate(const HlistDb& db, const Caps& caps) {
  ValidationReport rep;
  auto issue = [&](const char* check, const std::string& row, const Diagram& d, std::string detail) {
    rep.issues.push_back({check, row, d.str(), std::move(detail)});
  };

  if (const HlistRank* r3 = db.rank(3)) {
    for (const auto& [tag, d] : r3->finite) {
      ++rep.checked["orders"];
      int edges = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) edges += d.adjacent(i, j);
      std::vector<RootOfUnity> labels;
      for (int i = 0; i < 3; ++i) {
        labels.push_back(d.vertex(i));
        for (int j = i + 1; j < 3; ++j)
          if (d.adjacent(i, j)) labels.push_back(d.edge(i, j));
      }
      for (const auto& x : labels) {
        bool ok = edges == 3 ? in_g(x, 6) : (in_g(x, 6) || in_g(x, 9));
        if (!ok) {
          issue("orders", tag, d, "label " + x.str() + (edges == 3 ? " not in G_6" : " not in G_6 or G_9"));
          break;
        }
      }
    }
  }

  if (const HlistRank* r4 = db.rank(4)) {
    for (const auto& f : r4->families) {
      Diagram g = f.instantiate(generic_q(), generic_r());
      auto kind = classify_shape(g).kind;
      if (kind != ShapeKind::Tadpole && kind != ShapeKind::Tripod) continue;
      ++rep.checked["m01"];
      auto cm = cartan_matrix(g);
      if (!cm.ok()) {
        issue("m01", f.row, g, "generic instance not reflectable");
        continue;
      }
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (i != j && -(*cm.matrix)(i, j) > 1)
            issue("m01", f.row, g, "m_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + std::to_string(-(*cm.matrix)(i, j)));
    }
  }

  for (const auto& [n, hr] : db.ranks) {
    std::vector<std::pair<std::string, Diagram>> entries = hr.finite;
    for (const auto& f : hr.families) {
      entries.emplace_back(f.row + " (generic)", f.instantiate(generic_q(), generic_r()));
      for (auto& d : evaluate_family(f)) entries.emplace_back(f.row, std::move(d));
    }
    for (const auto& [tag, d] : entries) {
      bool generic = tag.size() > 10 && tag.ends_with("(generic)");
      ++rep.checked["roots"];
      auto res = positive_roots(d, caps);
      if (!res.finite()) issue("roots", tag, d, std::string(status_name(res.status)) + (res.note.empty() ? "" : ": " + res.note));
      if (generic) continue;
      ++rep.checked["closure"];
      for (int i = 0; i < n; ++i) {
        Diagram r;
        try {
          r = reflect(d, i);
        } catch (const NotReflectable&) {
          issue("closure", tag, d, "not reflectable at vertex " + std::to_string(i + 1));
          break;
        }
        if (!is_member(db, r)) {
          issue("closure", tag, d, "reflection at vertex " + std::to_string(i + 1) + " gives " + r.str() + ", not a member");
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace nichols
