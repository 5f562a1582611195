#include <doctest.h>

#include "nichols/criteria.hpp"
#include "support.hpp"

using namespace nichols;

namespace {

const char* kA3 = "rank=3; v=[e12^1,e12^1,e12^1]; e=[(1,2)=e12^11, (2,3)=e12^11]";

}  // namespace

TEST_SUITE("criteria") {
  TEST_CASE("images on A3") {
    auto d = parse_diagram(kA3);
    CHECK(criterium_A(d, 0, 1, 1) == parse_diagram("rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^11]"));
    CHECK(collapse(d, 0, 1) == criterium_A(d, 0, 1, 1));
    // alpha_1 + alpha_2 and alpha_2 + alpha_3 are orthogonal.
    CHECK(criterium_B(d, 0, 2, 1) == parse_diagram("rank=2; v=[e12^1,e12^1]; e=[]"));
    for (char c : std::string("AB")) {
      auto imgs = criterium_images(d, c);
      CHECK_FALSE(imgs.empty());
      for (const auto& im : imgs) CHECK(in_hlist(testing::db(), im.image, MembershipMode::Full));
    }
  }

  TEST_CASE("degree bases") {
    CHECK_THROWS_AS(DegreeBasis::make(3, {{1, 0, 0}, {2, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeBasis::make(3, {{1, 0, 0}}), std::invalid_argument);
    auto B = DegreeBasis::make(3, {{1, 0, 0}, {0, 1, 1}});
    auto d = parse_diagram(kA3);
    // q(alpha_2 + alpha_3) = q, and its pairing with alpha_1 is q^-1.
    CHECK(degree_vector_diagram(d, B) == parse_diagram("rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^11]"));
  }

  TEST_CASE("preconditions") {
    auto d = parse_diagram(kA3);
    CHECK_THROWS_AS(criterium_A(d, 0, 0, 1), CriteriumError);
    CHECK_THROWS_AS(criterium_A(d, 0, 1, 2), CriteriumError);
    CHECK_THROWS_AS(criterium_A(d, 0, 2, 1), CriteriumError);
    CHECK_THROWS_AS(collapse(d, 0, 2), CriteriumError);
    CHECK_THROWS_AS(criterium_C(d), CriteriumError);
    CHECK_THROWS_AS(criterium_D(d, {0, 1, 2}, 1, 1), CriteriumError);
    CHECK_THROWS_AS(criterium_F(d, {0, 1, 2}), CriteriumError);
    CHECK_THROWS_AS(criterium_A(parse_diagram("rank=2; v=[1,e5^1]; e=[(1,2)=e5^1]"), 0, 1, 1), CriteriumError);
  }

  TEST_CASE("verdicts") {
    const auto& db = testing::db();
    Policy p;
    p.criteria = "AB";
    p.cartan = true;
    p.mode = MembershipMode::Full;
    CHECK(passes_criteria(parse_diagram(kA3), p, db).survives);
    // Affine A1 is of Cartan type but not finite.
    auto v = passes_criteria(parse_diagram("rank=2; v=[e12^1,e12^1]; e=[(1,2)=e12^10]"), p, db);
    CHECK_FALSE(v.survives);
    CHECK(v.reason == "Cartan");
    // Two A2 pieces at coprime orders; some A image leaves the list.
    auto bad = parse_diagram("rank=3; v=[e5^1,e5^1,e7^1]; e=[(1,2)=e5^4, (2,3)=e7^6]");
    auto w = passes_criteria(bad, p, db);
    CHECK_FALSE(w.survives);
    CHECK_FALSE(in_hlist(db, bad, MembershipMode::Full));
  }

  TEST_CASE("restricting the examined images") {
    const auto& db = testing::db();
    auto bad = parse_diagram("rank=3; v=[e5^1,e5^1,e7^1]; e=[(1,2)=e5^4, (2,3)=e7^6]");
    Policy p;
    auto v = passes_criteria(bad, p, db);
    REQUIRE_FALSE(v.survives);
    p.only = {{0, 2, 1}};  // not adjacent: no such image
    CHECK(passes_criteria(bad, p, db).survives);
    p.only = {v.indices};
    CHECK_FALSE(passes_criteria(bad, p, db).survives);
  }

  TEST_CASE("reflection words") {
    auto d = parse_diagram(kA3);
    Policy p;
    p.depth = 2;
    auto w = reflection_words(d, p);
    CHECK(w.front().empty());
    CHECK(w.size() == 1 + 3 + 6);
    p.minus_one_only = true;
    CHECK(reflection_words(d, p).size() == 1);
    p.skip_base = true;
    CHECK(reflection_words(d, p).empty());
  }

  TEST_CASE("list members survive all criteria up to depth 2") {
    for (int rank = 2; rank <= 5; ++rank) {
      auto rep = hlist_soundness(testing::db(), rank, 2);
      CHECK(rep.members > 0);
      for (const auto& f : rep.failures) INFO(f.member.str(), " ", f.verdict.str());
      CHECK(rep.failures.empty());
    }
  }

  TEST_CASE("shape guards") {
    CHECK(has_triangle(parse_diagram("rank=3; v=[-1,-1,-1]; e=[(1,2)=e3^1, (1,3)=e3^1, (2,3)=e3^1]")));
    CHECK(forbidden_shape(parse_diagram(
        "rank=4; v=[-1,-1,-1,-1]; e=[(1,2)=e3^1, (2,3)=e3^1, (3,4)=e3^1, (1,4)=e3^1]")));
    CHECK_FALSE(forbidden_shape(parse_diagram(kA3)));
  }
}
