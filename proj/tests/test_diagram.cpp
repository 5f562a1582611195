#include <doctest.h>

#include <random>

#include "nichols/diagram.hpp"
#include "support.hpp"

using namespace nichols;

TEST_SUITE("diagram") {
  TEST_CASE("parse and print") {
    auto d = parse_diagram("rank=3; v=[e5^1,-1,e5^1]; e=[(1,2)=e5^4, (2,3)=e5^1]");
    CHECK(d.rank() == 3);
    CHECK(d.vertex(1) == RootOfUnity::minus_one());
    CHECK(d.edge(0, 1) == e(5, 4));
    CHECK(d.edge(1, 0) == e(5, 4));
    CHECK_FALSE(d.adjacent(0, 2));
    CHECK(parse_diagram(d.str()) == d);
    CHECK(parse_diagram("rank=1; v=[e3^2]; e=[]").vertex(0) == e(3, 2));
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_diagram("rank=2; v=[-1]; e=[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram("rank=2; v=[-1,-1]; e=[(1,3)=-1]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram("rank=2; v=[-1,-1]; e=[(1,1)=-1]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram("rank=2; v=[-1,x]; e=[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram("rank=1; e=[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram("rank=2; v=[-1,-1]; w=[]"), std::invalid_argument);
    // rank and e may be omitted.
    CHECK(parse_diagram("v=[-1,e3^1]") == parse_diagram("rank=2; v=[-1,e3^1]; e=[]"));
    CHECK_THROWS_AS(parse_diagram("rank=0; v=[]; e=[]"), std::invalid_argument);
  }

  TEST_CASE("canonical key ignores numbering, exact key does not") {
    std::mt19937_64 rng(testing::test_seed());
    for (int t = 0; t < 500; ++t) {
      int n = 2 + static_cast<int>(rng() % 5);
      auto d = testing::random_diagram(rng, n);
      auto p = testing::random_permutation(rng, n);
      auto q = permute(d, p);
      CHECK(canonical_key(q) == canonical_key(d));
      std::vector<int> order;
      auto k = canonical_key(d, &order);
      CHECK(canonical_key(permute(d, order)) == k);
      CHECK(exact_key(canonical_form(d)) == exact_key(permute(d, order)));
    }
    auto a = parse_diagram("rank=2; v=[-1,e3^1]; e=[(1,2)=e3^2]");
    auto b = parse_diagram("rank=2; v=[e3^1,-1]; e=[(1,2)=e3^2]");
    CHECK(canonical_key(a) == canonical_key(b));
    CHECK(exact_key(a) != exact_key(b));
  }

  TEST_CASE("restrict, components and cycles") {
    auto sq = parse_diagram("rank=4; v=[-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1,(1,4)=-1]");
    CHECK(has_cycle(sq, 4));
    CHECK_FALSE(has_cycle(sq, 3));
    auto r = restrict(sq, {0, 1, 3});
    CHECK(r.rank() == 3);
    CHECK(r.adjacent(0, 1));
    CHECK(r.adjacent(0, 2));
    CHECK_FALSE(r.adjacent(1, 2));
    auto two = restrict(sq, {0, 2});
    CHECK(components(two).size() == 2);
    CHECK_FALSE(is_connected(two));
    CHECK(degree(sq, 0) == 2);
  }

  TEST_CASE("shapes") {
    auto shape = [](const char* s) { return classify_shape(parse_diagram(s)).kind; };
    CHECK(shape("rank=4; v=[-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1]") == ShapeKind::Line);
    CHECK(shape("rank=4; v=[-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(1,3)=-1,(3,4)=-1]") == ShapeKind::Tadpole);
    CHECK(shape("rank=4; v=[-1,-1,-1,-1]; e=[(1,3)=-1,(2,3)=-1,(3,4)=-1]") == ShapeKind::Tripod);
    CHECK(shape("rank=5; v=[-1,-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1,(2,5)=-1,(3,5)=-1]") ==
          ShapeKind::TriangleInMiddle);
    CHECK(shape("rank=5; v=[-1,-1,-1,-1,-1]; e=[(1,3)=-1,(2,3)=-1,(3,4)=-1,(3,5)=-1]") == ShapeKind::Cross);
    CHECK(shape("rank=5; v=[-1,-1,-1,-1,-1]; e=[(1,2)=-1,(1,3)=-1,(2,3)=-1,(3,4)=-1,(3,5)=-1,(4,5)=-1]") ==
          ShapeKind::Bowtie);
    CHECK(shape("rank=6; v=[-1,-1,-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1,(2,5)=-1,(3,5)=-1,(5,6)=-1]") ==
          ShapeKind::Star);
    CHECK(shape("rank=7; v=[-1,-1,-1,-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1,(4,5)=-1,(3,6)=-1,(6,7)=-1]") ==
          ShapeKind::ExtendedE6);
    auto e6 = classify_shape(
        parse_diagram("rank=6; v=[-1,-1,-1,-1,-1,-1]; e=[(1,2)=-1,(2,3)=-1,(3,4)=-1,(4,5)=-1,(3,6)=-1]"));
    CHECK(e6.kind == ShapeKind::Etype);
    CHECK(e6.a == 6);
  }
}
