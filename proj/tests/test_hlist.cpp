#include <doctest.h>

#include <fstream>
#include <sstream>

#include "nichols/hlist.hpp"
#include "support.hpp"

using namespace nichols;

namespace {

std::string rank_file(int n) {
  std::ifstream in(resolve_hlist_path("") + "/rank" + std::to_string(n) + ".txt");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HlistDb single_rank(const std::string& text) {
  HlistDb db;
  auto r = parse_hlist_rank(text);
  index_hlist_rank(r);
  db.ranks[r.rank] = std::move(r);
  return db;
}

}  // namespace

TEST_SUITE("hlist") {
  TEST_CASE("monomials and constraints") {
    auto m = parse_monomial("-q^-1r");
    CHECK(m.neg);
    CHECK(m.a == -1);
    CHECK(m.b == 1);
    CHECK(m.eval(e(6), e(3)) == e(6, 3) * e(6, 5) * e(3));
    CHECK(parse_monomial(m.str()) == m);
    auto c = parse_constraint("+q^2!=1");
    CHECK(c.holds(e(3), RootOfUnity::one()));
    CHECK_FALSE(c.holds(RootOfUnity::minus_one(), RootOfUnity::one()));
    CHECK_THROWS(parse_monomial("x"));
  }

  TEST_CASE("serialization round trip") {
    for (int n = 2; n <= 7; ++n) {
      auto r = parse_hlist_rank(rank_file(n));
      auto again = parse_hlist_rank(serialize_hlist_rank(r));
      CHECK(again.rank == n);
      CHECK(again.finite == r.finite);
      REQUIRE(again.families.size() == r.families.size());
      for (size_t k = 0; k < r.families.size(); ++k) CHECK(again.families[k].str() == r.families[k].str());
    }
  }

  TEST_CASE("load errors") {
    CHECK_THROWS_AS(parse_hlist_rank(""), HlistLoadError);
    CHECK_THROWS_AS(parse_hlist_rank("garbage\n"), HlistLoadError);
    CHECK_THROWS_AS(load_hlist("/nonexistent/hlist"), HlistLoadError);
  }

  TEST_CASE("membership") {
    const auto& db = testing::db();
    auto m = membership(db, parse_diagram("rank=4; v=[e3^1,e3^2,-1,-1]; e=[(1,3)=e3^2,(2,3)=e3^1,(3,4)=e3^1]"));
    CHECK(m.kind == Membership::InFinite);
    auto f = membership(db, parse_diagram("rank=2; v=[e5^1,e5^1]; e=[(1,2)=e5^4]"));
    CHECK(f.kind == Membership::InFamily);
    CHECK(f.q == e(5));
    // A family member at a parameter order outside G_f.
    auto big = membership(db, parse_diagram("rank=3; v=[e97^1,e97^1,e97^1]; e=[(1,2)=e97^96,(2,3)=e97^96]"));
    CHECK(big.kind == Membership::InFamily);
    CHECK_FALSE(db.in_evaluated(parse_diagram("rank=3; v=[e97^1,e97^1,e97^1]; e=[(1,2)=e97^96,(2,3)=e97^96]")));
    auto no = membership(db, parse_diagram("rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^10]"));
    CHECK(no.kind == Membership::NotInHlist);
    CHECK_THROWS_AS(membership(db, Diagram(8)), std::invalid_argument);
  }

  TEST_CASE("every evaluated member has a finite root system") {
    const auto& db = testing::db();
    for (int n = 2; n <= 4; ++n)
      for (const auto& [tag, d] : db.rank(n)->members) CHECK_MESSAGE(has_finite_root_system(d), tag);
  }

  TEST_CASE("validation detects a bad row") {
    auto good = single_rank(rank_file(2));
    CHECK(hlist_validate(good).ok());
    auto bad = single_rank(rank_file(2) + "finite row=bogus rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^10]\n");
    auto rep = hlist_validate(bad);
    CHECK_FALSE(rep.ok());
    bool found = false;
    for (const auto& i : rep.issues) found |= i.row == "bogus";
    CHECK(found);
  }

  TEST_CASE("full validation") {
    auto rep = hlist_validate(testing::db());
    for (const auto& i : rep.issues) INFO(i.check, " ", i.row, " ", i.detail);
    CHECK(rep.ok());
  }
}
