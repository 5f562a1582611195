#include "nichols/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "nichols/cartan.hpp"
#include "nichols/weyl.hpp"

namespace nichols {

namespace {

using json = nlohmann::json;

// Runs f(k) for k in [0, n) on up to `threads` workers.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& f) {
  if (threads <= 1 || n < 64) {
    for (size_t k = 0; k < n; ++k) f(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t k; (k = next.fetch_add(1)) < n;) f(k);
    });
  for (auto& th : pool) th.join();
}

std::vector<Diagram> keep_if(const std::vector<Diagram>& in, int threads,
                             const std::function<bool(const Diagram&)>& keep) {
  std::vector<char> flag(in.size(), 0);
  parallel_for(in.size(), threads, [&](size_t k) { flag[k] = keep(in[k]) ? 1 : 0; });
  std::vector<Diagram> out;
  for (size_t k = 0; k < in.size(); ++k)
    if (flag[k]) out.push_back(in[k]);
  return out;
}

bool is_connected_graph(int n, const EdgeList& edges, const std::vector<int>& verts) {
  if (verts.empty()) return false;
  std::set<int> seen{verts[0]};
  std::vector<int> stack{verts[0]};
  std::set<int> in(verts.begin(), verts.end());
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [a, b] : edges) {
      int w = a == v ? b : b == v ? a : -1;
      if (w >= 0 && in.count(w) && seen.insert(w).second) stack.push_back(w);
    }
  }
  (void)n;
  return seen.size() == verts.size();
}

// Piece edges expressed in the piece's local numbering.
EdgeList local_edges(const Piece& p) {
  EdgeList out;
  for (auto [a, b] : p.edges) {
    int i = static_cast<int>(std::find(p.vertices.begin(), p.vertices.end(), a) - p.vertices.begin());
    int j = static_cast<int>(std::find(p.vertices.begin(), p.vertices.end(), b) - p.vertices.begin());
    out.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Diagram extract(const Diagram& d, const Piece& p) {
  const int k = static_cast<int>(p.vertices.size());
  Diagram s(k);
  for (int i = 0; i < k; ++i) s.set_vertex(i, d.vertex(p.vertices[i]));
  for (auto [a, b] : local_edges(p)) s.set_edge(a, b, d.edge(p.vertices[a], p.vertices[b]));
  return s;
}

std::vector<Piece> auto_checks(const BuilderSpec& spec) {
  std::vector<Piece> out;
  for (int v = 0; v < spec.rank; ++v) {
    Piece p;
    for (int u = 0; u < spec.rank; ++u)
      if (u != v) p.vertices.push_back(u);
    for (auto e : spec.edges)
      if (e.first != v && e.second != v) p.edges.push_back(e);
    if (is_connected_graph(spec.rank, p.edges, p.vertices)) out.push_back(p);
  }
  return out;
}

void visit_embeddings(const Diagram& m, int k, const std::vector<std::vector<bool>>& adj, std::vector<int>& phi,
                      std::vector<bool>& used, const std::function<void()>& emit) {
  const int t = static_cast<int>(phi.size());
  if (t == k) {
    emit();
    return;
  }
  for (int v = 0; v < k; ++v) {
    if (used[v]) continue;
    bool ok = true;
    for (int s = 0; s < t && ok; ++s) ok = adj[s][t] == m.adjacent(phi[s], v);
    if (!ok) continue;
    used[v] = true;
    phi.push_back(v);
    visit_embeddings(m, k, adj, phi, used, emit);
    phi.pop_back();
    used[v] = false;
  }
}

std::string label_key(const RootOfUnity& x) {
  return std::to_string(x.num()) + "/" + std::to_string(x.den()) + ";";
}

}  // namespace

std::vector<Diagram> positional_list(int k, const EdgeList& edges, const HlistDb& db) {
  static std::mutex mu;
  static std::map<std::pair<const HlistDb*, std::string>, std::vector<Diagram>> cache;
  std::string sig = std::to_string(k) + ":";
  for (auto [a, b] : edges) sig += std::to_string(a) + "-" + std::to_string(b) + ",";
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({&db, sig});
    if (it != cache.end()) return it->second;
  }
  std::vector<Diagram> out;
  const HlistRank* hr = db.rank(k);
  if (hr) {
    std::vector<std::vector<bool>> adj(k, std::vector<bool>(k, false));
    for (auto [a, b] : edges) adj[a][b] = adj[b][a] = true;
    std::unordered_set<std::string> seen;
    for (const auto& [tag, m] : hr->members) {
      int me = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) me += m.adjacent(i, j);
      if (me != static_cast<int>(edges.size())) continue;
      std::vector<int> phi;
      std::vector<bool> used(k, false);
      visit_embeddings(m, k, adj, phi, used, [&] {
        Diagram L(k);
        for (int i = 0; i < k; ++i) L.set_vertex(i, m.vertex(phi[i]));
        for (auto [a, b] : edges) L.set_edge(a, b, m.edge(phi[a], phi[b]));
        if (seen.insert(exact_key(L)).second) out.push_back(L);
      });
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{&db, sig}] = out;
  return out;
}

std::vector<Diagram> build_candidates(const BuilderSpec& spec, const HlistDb& db) {
  const int n = spec.rank;
  std::vector<Piece> checks = spec.checks.empty() ? auto_checks(spec) : spec.checks;
  if (checks.size() < 2) throw std::invalid_argument("builder " + spec.name + ": needs at least two pieces");

  // Lift piece labelings into template numbering.
  auto lift = [&](const Piece& p) {
    std::vector<Diagram> out;
    for (const auto& L : positional_list(static_cast<int>(p.vertices.size()), local_edges(p), db)) {
      Diagram t(n);
      for (size_t i = 0; i < p.vertices.size(); ++i) t.set_vertex(p.vertices[i], L.vertex(static_cast<int>(i)));
      for (size_t i = 0; i < p.vertices.size(); ++i)
        for (size_t j = i + 1; j < p.vertices.size(); ++j)
          t.set_edge(p.vertices[i], p.vertices[j], L.edge(static_cast<int>(i), static_cast<int>(j)));
      out.push_back(t);
    }
    return out;
  };

  // Glue pieces one at a time, always taking the piece that shares the most
  // with what is covered so far, until every vertex and edge is labelled.
  std::set<int> cov_v;
  std::set<std::pair<int, int>> cov_e;
  std::vector<bool> used(checks.size(), false);
  auto covered = [&] {
    if (static_cast<int>(cov_v.size()) != n) return false;
    for (auto e : spec.edges)
      if (!cov_e.count(e)) return false;
    return true;
  };
  std::vector<Diagram> partial;
  bool first = true;
  while (!covered()) {
    int best = -1, best_shared = -1, best_new = 0;
    for (size_t x = 0; x < checks.size(); ++x) {
      if (used[x]) continue;
      int shared = 0, fresh = 0;
      for (int v : checks[x].vertices) (cov_v.count(v) ? shared : fresh)++;
      for (auto e : checks[x].edges) (cov_e.count(e) ? shared : fresh)++;
      if (fresh == 0) continue;
      if (first ? fresh > best_new : shared > best_shared) best = static_cast<int>(x), best_shared = shared, best_new = fresh;
    }
    if (best < 0) throw std::invalid_argument("builder " + spec.name + ": pieces do not cover the template");
    const Piece& Q = checks[best];
    used[best] = true;
    std::vector<Diagram> lq = lift(Q);
    if (first) {
      partial = std::move(lq);
      first = false;
    } else {
      std::vector<int> shared_v;
      for (int v : Q.vertices)
        if (cov_v.count(v)) shared_v.push_back(v);
      EdgeList shared_e;
      for (auto e : Q.edges)
        if (cov_e.count(e)) shared_e.push_back(e);
      auto signature = [&](const Diagram& t) {
        std::string sg;
        for (int v : shared_v) sg += label_key(t.vertex(v));
        for (auto [a, b] : shared_e) sg += label_key(t.edge(a, b));
        return sg;
      };
      std::unordered_map<std::string, std::vector<size_t>> index;
      for (size_t k = 0; k < lq.size(); ++k) index[signature(lq[k])].push_back(k);
      std::vector<Diagram> next;
      for (const auto& p : partial) {
        auto it = index.find(signature(p));
        if (it == index.end()) continue;
        for (size_t k : it->second) {
          Diagram c = p;
          for (int v : Q.vertices) c.set_vertex(v, lq[k].vertex(v));
          for (auto [a, b] : Q.edges) c.set_edge(a, b, lq[k].edge(a, b));
          next.push_back(c);
        }
      }
      partial = std::move(next);
    }
    cov_v.insert(Q.vertices.begin(), Q.vertices.end());
    cov_e.insert(Q.edges.begin(), Q.edges.end());
  }

  std::vector<Diagram> out;
  std::unordered_set<std::string> seen;
  for (const auto& c : partial) {
    bool ok = true;
    for (size_t x = 0; x < checks.size() && ok; ++x)
      if (!used[x]) ok = db.in_evaluated(extract(c, checks[x]));
    if (ok && spec.drop_all_cartan_pieces) {
      bool all = true;
      for (const auto& pc : checks) {
        auto ct = is_cartan_type(extract(c, pc));
        all = all && ct && *ct;
      }
      ok = !all;
    }
    if (ok && seen.insert(exact_key(c)).second) out.push_back(c);
  }
  return out;
}

std::string StepSpec::name() const {
  if (!label.empty()) return label;
  switch (kind) {
    case RemoveHlist: return "remove-hlist";
    case DedupPermutations: return "dedup-permutations";
    case CartanFilter: return "cartan-filter";
    case Criteria: {
      std::string s = "criteria " + policy.criteria;
      if (policy.depth > 0 || !policy.words.empty()) s += " on reflections";
      return s;
    }
    case ReflectsToShape: return "reflects-to-shape";
    case ReflectsToDiscarded: return "reflects-to-discarded";
  }
  return "?";
}

namespace {

// Replays a reflection word; nullopt when some letter is not reflectable or,
// with minus_one_only, not labelled -1 at that point.
std::optional<Diagram> replay(const Diagram& d, const std::vector<int>& w, bool minus_one_only, bool* broken) {
  Diagram e = d;
  *broken = false;
  for (int i : w) {
    if (minus_one_only && e.vertex(i) != RootOfUnity::minus_one()) return std::nullopt;
    try {
      e = reflect(e, i);
    } catch (const NotReflectable&) {
      *broken = true;
      return std::nullopt;
    }
  }
  return e;
}

}  // namespace

PipelineReport run_filter_chain(const std::string& name, std::vector<Diagram> cur,
                                const std::vector<StepSpec>& chain, const HlistDb& db,
                                const PipelineOptions& opts) {
  PipelineReport rep;
  rep.scenario = name;
  for (const auto& st : chain) {
    StepCount sc;
    sc.name = st.name();
    sc.in = cur.size();
    switch (st.kind) {
      case StepSpec::RemoveHlist:
        cur = keep_if(cur, opts.threads, [&](const Diagram& d) { return !db.in_evaluated(d); });
        break;
      case StepSpec::DedupPermutations: {
        std::vector<Diagram> out;
        std::unordered_set<std::string> seen;
        for (const auto& d : cur)
          if (seen.insert(canonical_key(d)).second) out.push_back(d);
        cur = std::move(out);
        break;
      }
      case StepSpec::CartanFilter:
        cur = keep_if(cur, opts.threads, [&](const Diagram& d) {
          auto ct = is_cartan_type(d);
          return !(ct && *ct);
        });
        break;
      case StepSpec::Criteria:
        cur = keep_if(cur, opts.threads,
                      [&](const Diagram& d) { return passes_criteria(d, st.policy, db).survives; });
        break;
      case StepSpec::ReflectsToShape:
        cur = keep_if(cur, opts.threads, [&](const Diagram& d) {
          for (const auto& w : st.words) {
            bool broken = false;
            auto r = replay(d, w, st.minus_one_only, &broken);
            if (broken) return false;
            if (!r) continue;
            bool hit = (st.shape.triangles && has_triangle(*r)) || (st.shape.forbidden && forbidden_shape(*r));
            if (hit && (!st.unless_hlist || !db.in_evaluated(*r))) return false;
          }
          return true;
        });
        break;
      case StepSpec::ReflectsToDiscarded: {
        // A reflection of the same shape outside the list that is no longer
        // among the survivors was discarded earlier; iterate to a fixpoint.
        bool changed = true;
        while (changed) {
          changed = false;
          std::unordered_set<std::string> alive;
          for (const auto& d : cur) alive.insert(canonical_key(d));
          auto out = keep_if(cur, opts.threads, [&](const Diagram& d) {
            Shape sh = classify_shape(d);
            for (const auto& w : st.words) {
              bool broken = false;
              auto r = replay(d, w, st.minus_one_only, &broken);
              if (broken) return false;
              if (!r || !(classify_shape(*r) == sh) || db.in_evaluated(*r)) continue;
              if (!alive.count(canonical_key(*r))) return false;
            }
            return true;
          });
          changed = out.size() != cur.size();
          cur = std::move(out);
        }
        break;
      }
    }
    sc.out = cur.size();
    rep.steps.push_back(sc);
  }
  std::vector<std::pair<std::string, Diagram>> keyed;
  for (const auto& d : cur) keyed.emplace_back(canonical_key(d), d);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return exact_key(a.second) < exact_key(b.second);
  });
  for (auto& [k, d] : keyed) rep.survivors.push_back(d);
  return rep;
}

PipelineReport run_part(const ScenarioPart& part, const HlistDb& db, const PipelineOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Diagram> cand;
  std::unordered_set<std::string> seen;
  std::vector<std::string> caveats;
  for (const auto& b : part.builders) {
    for (auto& d : build_candidates(b, db))
      if (seen.insert(exact_key(d)).second) cand.push_back(std::move(d));
    if (opts.check_completeness) {
      // Every list member with the template's edge graph must be a candidate.
      size_t missing = 0, members = 0;
      std::unordered_set<std::string> keys;
      for (const auto& d : cand) keys.insert(canonical_key(d));
      for (const auto& L : positional_list(b.rank, b.edges, db)) {
        ++members;
        if (!keys.count(canonical_key(L))) ++missing;
      }
      if (missing)
        caveats.push_back(b.name + ": " + std::to_string(missing) + " of " + std::to_string(members) +
                          " list labelings of this shape are not candidates");
    }
  }
  PipelineReport rep = run_filter_chain(part.name, cand, part.chain, db, opts);
  StepCount build;
  build.name = "build";
  build.in = cand.size();
  build.out = cand.size();
  rep.steps.insert(rep.steps.begin(), build);
  for (size_t k = 0; k < rep.steps.size() && k < part.expected.size(); ++k) {
    rep.steps[k].expected = part.expected[k];
    if (part.expected[k] && static_cast<long>(rep.steps[k].out) != *part.expected[k])
      rep.mismatches.push_back(part.name + ": step '" + rep.steps[k].name + "' expected " +
                               std::to_string(*part.expected[k]) + ", got " + std::to_string(rep.steps[k].out));
  }
  rep.caveats.insert(rep.caveats.begin(), caveats.begin(), caveats.end());
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

PipelineReport run_scenario(const Scenario& s, const HlistDb& db, const PipelineOptions& opts) {
  PipelineReport rep;
  rep.scenario = s.name;
  for (const auto& part : s.parts) {
    PipelineReport r = run_part(part, db, opts);
    const bool prefix = s.parts.size() > 1;
    for (auto st : r.steps) {
      if (prefix) st.name = part.name + "/" + st.name;
      rep.steps.push_back(st);
    }
    rep.survivors.insert(rep.survivors.end(), r.survivors.begin(), r.survivors.end());
    for (auto& c : r.caveats) rep.caveats.push_back(prefix ? part.name + ": " + c : c);
    rep.mismatches.insert(rep.mismatches.end(), r.mismatches.begin(), r.mismatches.end());
    rep.seconds += r.seconds;
  }
  return rep;
}

std::string PipelineReport::json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json o;
    o["name"] = s.name;
    o["in"] = s.in;
    o["out"] = s.out;
    if (s.expected) o["expected"] = *s.expected;
    j["steps"].push_back(o);
  }
  j["survivors"] = nlohmann::ordered_json::array();
  for (const auto& d : survivors) j["survivors"].push_back(d.str());
  j["caveats"] = caveats;
  j["mismatches"] = mismatches;
  return j.dump(2);
}

std::string PipelineReport::text() const {
  std::ostringstream os;
  os << "scenario " << scenario << "\n";
  size_t w = 4;
  for (const auto& s : steps) w = std::max(w, s.name.size());
  for (const auto& s : steps) {
    os << "  " << s.name << std::string(w - s.name.size() + 2, ' ') << s.in << " -> " << s.out;
    if (s.expected) os << (static_cast<long>(s.out) == *s.expected ? "  (ok)" : "  (expected " + std::to_string(*s.expected) + ")");
    os << "\n";
  }
  os << "  survivors: " << survivors.size() << "\n";
  for (const auto& d : survivors) os << "    " << d.str() << "\n";
  for (const auto& c : caveats) os << "  caveat: " << c << "\n";
  return os.str();
}

namespace {

EdgeList parse_edges(const json& j, int n, const std::string& where) {
  EdgeList out;
  for (const auto& e : j) {
    int a = e.at(0).get<int>() - 1, b = e.at(1).get<int>() - 1;
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument(where + ": bad edge");
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  return out;
}

StepSpec parse_step(const json& j, const std::string& where) {
  StepSpec s;
  std::string kind = j.at("step").get<std::string>();
  static const std::map<std::string, StepSpec::Kind> kinds = {
      {"remove-hlist", StepSpec::RemoveHlist},         {"dedup-permutations", StepSpec::DedupPermutations},
      {"cartan-filter", StepSpec::CartanFilter},       {"criteria", StepSpec::Criteria},
      {"reflects-to-shape", StepSpec::ReflectsToShape}, {"reflects-to-discarded", StepSpec::ReflectsToDiscarded}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw std::invalid_argument(where + ": unknown step '" + kind + "'");
  s.kind = it->second;
  s.label = j.value("label", "");
  std::vector<std::vector<int>> words;
  for (const auto& w : j.value("words", json::array())) {
    std::vector<int> v;
    for (const auto& x : w) v.push_back(x.get<int>() - 1);
    words.push_back(v);
  }
  auto guard = [&](const std::string& key) {
    ShapeGuard g;
    for (const auto& x : j.value(key, json::array())) {
      std::string t = x.get<std::string>();
      if (t == "triangle") g.triangles = true;
      else if (t == "forbidden") g.forbidden = true;
      else throw std::invalid_argument(where + ": unknown shape class '" + t + "'");
    }
    return g;
  };
  if (s.kind == StepSpec::Criteria) {
    Policy& p = s.policy;
    p.criteria = j.value("criteria", "A");
    for (char c : p.criteria)
      if (c < 'A' || c > 'F') throw std::invalid_argument(where + ": unknown criterium");
    p.cartan = j.value("cartan", false);
    p.depth = j.value("depth", 0);
    p.words = words;
    p.minus_one_only = j.value("minus_one_only", false);
    p.skip_base = j.value("skip_base", false);
    p.guard = guard("guard");
    for (const auto& t : j.value("indices", json::array())) {
      if (p.criteria.size() != 1) throw std::invalid_argument(where + ": indices need a single criterium");
      std::vector<int> v;
      for (const auto& x : t) {
        int a = x.get<int>();
        v.push_back(criterium_index_is_vertex(p.criteria[0], v.size()) ? a - 1 : a);
      }
      p.only.push_back(v);
    }
    p.mode = j.value("mode", "evaluated") == "full" ? MembershipMode::Full : MembershipMode::Evaluated;
  } else {
    s.words = words;
    s.minus_one_only = j.value("minus_one_only", false);
    s.shape = guard("shape");
    s.unless_hlist = j.value("unless_hlist", true);
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
  try {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    for (const auto& pj : j.at("parts")) {
      ScenarioPart part;
      part.name = pj.value("name", s.name);
      const std::string where = source + " (" + part.name + ")";
      for (const auto& bj : pj.at("builders")) {
        BuilderSpec b;
        b.name = bj.value("name", part.name);
        b.rank = bj.at("rank").get<int>();
        if (b.rank < 3 || b.rank > 8) throw std::invalid_argument(where + ": unsupported rank");
        b.edges = parse_edges(bj.at("edges"), b.rank, where);
        for (const auto& cj : bj.value("checks", json::array())) {
          Piece p;
          for (const auto& v : cj.at("vertices")) p.vertices.push_back(v.get<int>() - 1);
          p.edges = parse_edges(cj.at("edges"), b.rank, where);
          b.checks.push_back(p);
        }
        b.drop_all_cartan_pieces = bj.value("drop_all_cartan_pieces", false);
        part.builders.push_back(b);
      }
      for (const auto& sj : pj.value("chain", json::array())) part.chain.push_back(parse_step(sj, where));
      for (const auto& e : pj.value("expected", json::array()))
        part.expected.push_back(e.is_null() ? std::nullopt : std::optional<long>(e.get<long>()));
      s.parts.push_back(part);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::vector<Scenario> load_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.path().extension() == ".json") files.push_back(ent.path());
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario(f.string()));
  return out;
}

std::string resolve_scenario_dir(const std::string& flag_value) {
  namespace fs = std::filesystem;
  if (!flag_value.empty()) return flag_value;
  if (fs::is_directory("data/scenarios")) return "data/scenarios";
#ifdef NICHOLS_SOURCE_DIR
  return std::string(NICHOLS_SOURCE_DIR) + "/data/scenarios";
#else
  return "data/scenarios";
#endif
}

}  // namespace nichols
