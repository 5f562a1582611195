#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nichols/diagram.hpp"
#include "nichols/weyl.hpp"

namespace nichols {

// sign * q^a * r^b
struct Monomial {
  bool neg = false;
  int a = 0;
  int b = 0;
  RootOfUnity eval(const RootOfUnity& q, const RootOfUnity& r = RootOfUnity::one()) const;
  std::string str() const;  // "+q^2", "-q^-1r", "-1", "+1"
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

Monomial parse_monomial(std::string_view s);

// Either "m != 1" or "ord(q) != n".
struct Constraint {
  enum Kind { NotOne, OrderNot } kind = NotOne;
  Monomial m;
  int order = 0;
  bool holds(const RootOfUnity& q, const RootOfUnity& r) const;
  std::string str() const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

Constraint parse_constraint(std::string_view s);

struct ParametricFamily {
  int rank = 0;
  int arity = 1;
  std::vector<std::pair<int, int>> edges;  // 0-based, i < j
  std::vector<Monomial> pattern;           // rank vertex slots, then one slot per edge
  std::vector<Constraint> valid;
  std::string row;

  const Monomial& vertex_slot(int i) const { return pattern[i]; }
  const Monomial& edge_slot(int k) const { return pattern[rank + k]; }
  Diagram instantiate(const RootOfUnity& q, const RootOfUnity& r = RootOfUnity::one()) const;
  bool is_valid(const RootOfUnity& q, const RootOfUnity& r = RootOfUnity::one()) const;
  // Unlabeled edge graph of the family.
  Diagram skeleton() const;
  std::string str() const;
};

ParametricFamily parse_family(std::string_view line);

struct HlistRank {
  int rank = 0;
  std::vector<std::pair<std::string, Diagram>> finite;  // (row tag, diagram)
  std::vector<ParametricFamily> families;
  // Derived at load time.
  std::unordered_map<std::string, std::string> finite_keys;     // canonical key -> row tag
  std::unordered_map<std::string, std::string> evaluated_keys;  // canonical key -> row tag
  // One canonical representative per key of finite_keys or evaluated_keys.
  std::vector<std::pair<std::string, Diagram>> members;
};

struct HlistDb {
  std::map<int, HlistRank> ranks;
  const HlistRank* rank(int n) const {
    auto it = ranks.find(n);
    return it == ranks.end() ? nullptr : &it->second;
  }
  // Membership in the finite set union the G_f evaluations (the enumeration
  // universe used by the pipelines).
  bool in_evaluated(const Diagram& d) const;
  bool in_evaluated_key(int rank, const std::string& key) const;
};

struct HlistLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// `path` is either a directory holding rank<N>.txt files or a single file.
HlistDb load_hlist(const std::string& path);
HlistRank parse_hlist_rank(const std::string& text, const std::string& source = "<text>");
std::string serialize_hlist_rank(const HlistRank& r);
// Fills finite_keys and evaluated_keys.
void index_hlist_rank(HlistRank& r);

// Instances of every family of the given rank at all valid parameters in
// G_f (both parameters range over G_f for two-parameter families), with exact
// duplicates removed on first occurrence.
std::vector<Diagram> evaluate_families(const HlistDb& db, int rank);
std::vector<Diagram> evaluate_family(const ParametricFamily& f);

struct Membership {
  enum Kind { InFinite, InFamily, NotInHlist } kind = NotInHlist;
  std::string tag;
  RootOfUnity q, r;
  std::string str() const;
};

// Throws std::invalid_argument for rank > 7.
Membership membership(const HlistDb& db, const Diagram& d);
// Family matching only.
std::optional<Membership> match_family(const ParametricFamily& f, const Diagram& d);

struct ValidationIssue {
  std::string check;  // "orders", "m01", "closure", "roots"
  std::string row;
  std::string diagram;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::map<std::string, size_t> checked;  // per check: number of diagrams examined
  bool ok() const { return issues.empty(); }
};

ValidationReport hlist_validate(const HlistDb& db, const Caps& caps = {});

// Resolution order: explicit flag value, NICHOLS_HLIST, then data/hlist
// relative to the working directory or the source tree.
std::string resolve_hlist_path(const std::string& flag_value);

}  // namespace nichols
