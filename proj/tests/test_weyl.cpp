#include <doctest.h>

#include <random>

#include "nichols/weyl.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace nichols;

namespace {

std::set<oracle::Vec> library_roots(const RootSystemResult& r, int rank) {
  std::set<oracle::Vec> s;
  for (const auto& x : r.positive_roots) s.insert(oracle::Vec(x.begin(), x.begin() + rank));
  return s;
}

}  // namespace

TEST_SUITE("weyl") {
  // Seeds of Cartan type A2, A3, B2, G2 at parameters of large enough order,
  // with root counts from the oracle.
  TEST_CASE("oracle on finite Cartan seeds") {
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
      auto o = oracle::positive_roots(d);
      REQUIRE(o.finite);
      CHECK(o.positive.size() == s.roots);
      auto r = positive_roots(d);
      REQUIRE(r.finite());
      CHECK(library_roots(r, d.rank()) == o.positive);
    }
  }

  TEST_CASE("affine seeds exceed the caps") {
    const char* seeds[] = {
        "rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^10]",
        "rank=3; v=[e12^1,e12^1,e12^1]; e=[(1,2)=e12^11, (2,3)=e12^11, (1,3)=e12^11]",
        "rank=2; v=[e12^1,e12^4]; e=[(1,2)=e12^8]",
    };
    for (const char* s : seeds) {
      auto d = parse_diagram(s);
      auto r = positive_roots(d, Caps{2000, 500});
      CHECK(r.status == RootStatus::CapExceeded);
      CHECK(oracle::positive_roots(d, 5000).capped);
    }
  }

  TEST_CASE("oracle agrees on list members of rank 2 and 3") {
    std::mt19937_64 rng(testing::test_seed());
    for (int rank : {2, 3}) {
      const auto& members = testing::db().rank(rank)->members;
      for (int t = 0; t < 150; ++t) {
        const auto& d = members[rng() % members.size()].second;
        auto o = oracle::positive_roots(d);
        auto r = positive_roots(d);
        REQUIRE(o.finite);
        REQUIRE(r.finite());
        CHECK(library_roots(r, rank) == o.positive);
      }
    }
  }

  TEST_CASE("not reflectable") {
    auto d = parse_diagram("rank=2; v=[1,e5^1]; e=[(1,2)=e5^1]");
    CHECK_THROWS_AS(reflect(d, 0), NotReflectable);
    CHECK(positive_roots(d).status == RootStatus::NotAllReflections);
    auto o = orbit(d);
    CHECK(o.status == OrbitStatus::NotAllReflections);
  }

  TEST_CASE("reflection example and orbit") {
    // Super type A(1|1)-like: -1 vertex joined to q and q^-1.
    auto d = parse_diagram("rank=3; v=[e3^1,-1,e3^1]; e=[(1,2)=e3^2, (2,3)=e3^2]");
    auto r = reflect(d, 1);
    CHECK(r == parse_diagram("rank=3; v=[-1,-1,-1]; e=[(1,2)=e3^1, (1,3)=e3^1, (2,3)=e3^1]"));
    CHECK(reflect(r, 1) == d);
    auto o = orbit(d);
    CHECK(o.status == OrbitStatus::Complete);
    CHECK(o.members.front() == d);
    for (size_t m = 0; m < o.members.size(); ++m)
      for (int i = 0; i < 3; ++i) {
        int k = o.edges[m][i];
        REQUIRE(k >= 0);
        CHECK(reflect(o.members[m], i) == o.members[k]);
      }
  }

  TEST_CASE("rank 1 and disconnected diagrams") {
    auto a1 = positive_roots(parse_diagram("rank=1; v=[e5^1]; e=[]"));
    CHECK(a1.finite());
    CHECK(a1.positive_roots.size() == 1);
    auto two = positive_roots(parse_diagram("rank=3; v=[e12^1,e12^1,-1]; e=[(1,2)=e12^11]"));
    CHECK(two.finite());
    CHECK(two.positive_roots.size() == 4);
  }
}
