// Acceptance report: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "nichols/cartan.hpp"
#include "nichols/criteria.hpp"
#include "nichols/pipeline.hpp"
#include "nichols/weyl.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace nichols;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& s) {
    pass = false;
    notes.push_back(s);
  }
};

std::string join_counts(const PipelineReport& r) {
  std::ostringstream os;
  for (size_t k = 0; k < r.steps.size(); ++k) os << (k ? " -> " : "") << r.steps[k].out;
  return os.str();
}

// Runs each named scenario, part by part, and compares every golden count.
Outcome scenarios(const std::vector<Scenario>& catalog, const std::string& prefix,
                  const std::vector<std::string>& exact) {
  Outcome o;
  size_t seen = 0;
  for (const auto& s : catalog) {
    bool wanted = prefix.empty() ? false : s.name.rfind(prefix, 0) == 0;
    for (const auto& e : exact) wanted |= s.name == e;
    if (!wanted) continue;
    ++seen;
    for (const auto& part : s.parts) {
      auto rep = run_part(part, testing::db());
      std::string tag = s.name + "/" + part.name;
      if (!rep.sound()) o.fail(tag + ": " + std::to_string(rep.survivors.size()) + " survivors");
      for (const auto& m : rep.mismatches) o.fail(tag + ": " + m);
      for (const auto& c : rep.caveats) o.fail(tag + ": " + c);
      std::cout << "    " << tag << ": " << join_counts(rep) << "\n";
    }
  }
  if (seen == 0) o.fail("no scenarios found");
  return o;
}

Outcome hlist_checks() {
  Outcome o;
  auto rep = hlist_validate(testing::db());
  for (const auto& i : rep.issues) o.fail(i.check + " " + i.row + " " + i.detail);
  for (int rank = 2; rank <= 7; ++rank) {
    auto s = hlist_soundness(testing::db(), rank, 2);
    std::cout << "    rank " << rank << ": " << s.members << " members, " << s.words << " words, "
              << s.failures.size() << " failures\n";
    for (const auto& f : s.failures) o.fail(f.member.str() + " " + f.verdict.str());
  }
  return o;
}

Outcome properties() {
  Outcome o;
  std::mt19937_64 rng(testing::test_seed());
  const int cases = 10000;
  size_t split = 0, invol = 0, orbit = 0, coll = 0, perm = 0;
  for (int t = 0; t < cases; ++t) {
    int rank = 2 + static_cast<int>(rng() % 4);
    auto d = testing::random_diagram(rng, rank, 0.6);

    // Splitting: two random braiding matrices with the same diagram give the
    // same degree-vector diagram for a random generalized basis.
    BraidingMatrix q;
    q.rank = rank;
    for (int i = 0; i < rank; ++i) {
      q.q[i][i] = d.vertex(i);
      for (int j = i + 1; j < rank; ++j) {
        auto x = testing::random_root(rng, true);
        q.q[i][j] = x;
        q.q[j][i] = d.edge(i, j) * x.inv();
      }
    }
    std::vector<DegreeVector> B;
    for (int k = 0; k + 1 < rank; ++k) {
      DegreeVector v{};
      v[k] = 1;
      v[k + 1] = static_cast<int>(rng() % 3);
      B.push_back(v);
    }
    auto basis = DegreeBasis::make(rank, B);
    if (q.diagram() != d || degree_vector_diagram(q, basis) != degree_vector_diagram(d, basis))
      o.fail("splitting: " + d.str());
    ++split;

    int i = static_cast<int>(rng() % rank);
    if (cartan_row(d, i)) {
      if (reflect(reflect(d, i), i) != d) o.fail("involution: " + d.str());
      ++invol;
    }

    int j = static_cast<int>(rng() % rank);
    if (i != j && d.adjacent(i, j) && cartan_row(d, i)) {
      if (criterium_A(d, i, j, 1) != collapse(d, i, j)) o.fail("collapse: " + d.str());
      ++coll;
    }

    auto p = testing::random_permutation(rng, rank);
    auto e = permute(d, p);
    auto cd = cartan_matrix(d), ce = cartan_matrix(e);
    if (cd.ok() != ce.ok()) o.fail("permutation: " + d.str());
    if (cd.ok() && ce.ok()) {
      for (int a = 0; a < rank; ++a)
        for (int b = 0; b < rank; ++b)
          if ((*ce.matrix)(a, b) != (*cd.matrix)(p[a], p[b])) o.fail("permutation: " + d.str());
      if (gcm_finite_type(*cd.matrix).name != gcm_finite_type(*ce.matrix).name) o.fail("gcm: " + d.str());
    }
    ++perm;

    int r = 2 + static_cast<int>(rng() % 3);
    const auto& members = testing::db().rank(r)->members;
    const auto& m = members[rng() % members.size()].second;
    auto roots = positive_roots(m, Caps{2000, 400});
    if (roots.finite()) {
      for (size_t c : roots.root_counts)
        if (c != roots.positive_roots.size()) o.fail("orbit count: " + m.str());
      ++orbit;
    }
  }
  std::cout << "    cases: splitting " << split << ", involution " << invol << ", orbit " << orbit
            << ", collapse " << coll << ", permutation " << perm << "\n";
  return o;
}

Outcome oracles() {
  Outcome o;
  struct Seed {
    const char* text;
    size_t roots;
  } seeds[] = {
      {"rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^11]", 3},
      {"rank=3; v=[e12^1,e12^1,e12^1]; e=[(1,2)=e12^11, (2,3)=e12^11]", 6},
      {"rank=2; v=[e12^2,e12^1]; e=[(1,2)=e12^10]", 4},
      {"rank=2; v=[e18^3,e18^1]; e=[(1,2)=e18^15]", 6},
  };
  for (const auto& s : seeds) {
    auto d = parse_diagram(s.text);
    auto ref = oracle::positive_roots(d);
    auto r = positive_roots(d);
    if (!ref.finite || ref.positive.size() != s.roots) o.fail(std::string("oracle count: ") + s.text);
    if (!r.finite() || r.positive_roots.size() != s.roots) o.fail(std::string("root count: ") + s.text);
  }
  const char* affine[] = {
      "rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^10]",
      "rank=3; v=[e12^1,e12^1,e12^1]; e=[(1,2)=e12^11, (2,3)=e12^11, (1,3)=e12^11]",
  };
  for (const char* s : affine) {
    auto r = positive_roots(parse_diagram(s), Caps{2000, 500});
    if (r.status != RootStatus::CapExceeded) o.fail(std::string("affine: ") + s);
  }
  return o;
}

}  // namespace

int main() {
  auto catalog = load_catalog(resolve_scenario_dir(""));
  struct Item {
    int n;
    const char* title;
    std::function<Outcome()> run;
  } items[] = {
      {1, "rank 4 filter chains", [&] { return scenarios(catalog, "rank4-", {}); }},
      {2, "rank 5, 6 and 7 filter chains", [&] {
         Outcome o;
         for (const char* p : {"rank5-", "rank6-", "rank7-"}) {
           auto x = scenarios(catalog, p, {});
           o.pass &= x.pass;
           o.notes.insert(o.notes.end(), x.notes.begin(), x.notes.end());
         }
         return o;
       }},
      {3, "forbidden shapes", [&] { return scenarios(catalog, "", {"valence4", "star5", "forbidden7"}); }},
      {4, "list validation and soundness", hlist_checks},
      {5, "randomized properties", properties},
      {6, "root system oracles", oracles},
  };
  bool all = true;
  for (auto& it : items) {
    std::cout << "criterion " << it.n << " (" << it.title << ")\n";
    auto o = it.run();
    for (const auto& n : o.notes) std::cout << "    FAIL " << n << "\n";
    std::cout << "criterion " << it.n << ": " << (o.pass ? "PASS" : "FAIL") << "\n" << std::flush;
    all &= o.pass;
  }
  return all ? 0 : 1;
}
