#include <doctest.h>

#include <random>

#include "nichols/cartan.hpp"
#include "nichols/criteria.hpp"
#include "nichols/weyl.hpp"
#include "support.hpp"

using namespace nichols;

namespace {

constexpr int kCases = 10000;

// Random split of the edge labels into a braiding matrix.
BraidingMatrix random_split(std::mt19937_64& rng, const Diagram& d) {
  BraidingMatrix q;
  q.rank = d.rank();
  for (int i = 0; i < d.rank(); ++i) {
    q.q[i][i] = d.vertex(i);
    for (int j = i + 1; j < d.rank(); ++j) {
      auto x = testing::random_root(rng, true);
      q.q[i][j] = x;
      q.q[j][i] = d.edge(i, j) * x.inv();
    }
  }
  return q;
}

RootOfUnity bichar(const BraidingMatrix& q, const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  RootOfUnity r;
  for (int i = 0; i < q.rank; ++i)
    for (int j = 0; j < q.rank; ++j) r *= q.q[i][j].pow(a[i] * b[j]);
  return r;
}

// s_i applied to the simple roots, evaluated with the bicharacter of q.
Diagram reflect_by_bicharacter(const BraidingMatrix& q, const std::array<int64_t, kMaxRank>& row, int i) {
  int n = q.rank;
  std::vector<std::vector<int64_t>> img(n, std::vector<int64_t>(n, 0));
  for (int j = 0; j < n; ++j) {
    img[j][j] = 1;
    img[j][i] -= row[j];
  }
  Diagram out(n);
  for (int j = 0; j < n; ++j) {
    out.set_vertex(j, bichar(q, img[j], img[j]));
    for (int k = j + 1; k < n; ++k) out.set_edge(j, k, bichar(q, img[j], img[k]) * bichar(q, img[k], img[j]));
  }
  return out;
}

// A reflection of a random list member of rank 2..4, so that most samples
// have finite root systems.
Diagram list_sample(std::mt19937_64& rng) {
  int rank = 2 + static_cast<int>(rng() % 3);
  const auto& m = testing::db().rank(rank)->members;
  return m[rng() % m.size()].second;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("reflections do not depend on the braiding matrix splitting") {
    std::mt19937_64 rng(testing::test_seed());
    int reflected = 0;
    for (int t = 0; t < kCases; ++t) {
      int rank = 2 + static_cast<int>(rng() % 4);
      auto d = testing::random_diagram(rng, rank);
      auto q = random_split(rng, d);
      REQUIRE(q.diagram() == d);
      int i = static_cast<int>(rng() % rank);
      auto row = cartan_row(d, i);
      if (row) {
        ++reflected;
        CHECK(reflect_by_bicharacter(q, *row, i) == reflect(d, i));
        CHECK(reflect_by_bicharacter(random_split(rng, d), *row, i) == reflect(d, i));
      } else {
        CHECK_THROWS_AS(reflect(d, i), NotReflectable);
      }
      // Generalized degree bases as well.
      std::vector<DegreeVector> B;
      for (int k = 0; k + 1 < rank; ++k) {
        DegreeVector v{};
        v[k] = 1;
        v[k + 1] = static_cast<int>(rng() % 3);
        B.push_back(v);
      }
      auto basis = DegreeBasis::make(rank, B);
      CHECK(degree_vector_diagram(q, basis) == degree_vector_diagram(d, basis));
    }
    CHECK(reflected > kCases / 10);
  }

  TEST_CASE("reflection is an involution") {
    std::mt19937_64 rng(testing::test_seed() + 1);
    int done = 0;
    for (int t = 0; t < kCases; ++t) {
      auto d = (t % 2) ? list_sample(rng) : testing::random_diagram(rng, 2 + static_cast<int>(rng() % 5));
      int i = static_cast<int>(rng() % d.rank());
      if (!cartan_row(d, i)) continue;
      auto r = reflect(d, i);
      REQUIRE(cartan_row(r, i).has_value());
      CHECK(*cartan_row(r, i) == *cartan_row(d, i));
      CHECK(reflect(r, i) == d);
      ++done;
    }
    CHECK(done > kCases / 2);
  }

  TEST_CASE("positive root count is constant on the orbit") {
    std::mt19937_64 rng(testing::test_seed() + 2);
    int finite = 0;
    for (int t = 0; t < kCases; ++t) {
      auto d = (t % 4) ? list_sample(rng) : testing::random_diagram(rng, 2 + static_cast<int>(rng() % 2));
      auto r = positive_roots(d, Caps{400, 400});
      if (!r.finite()) continue;
      ++finite;
      CHECK(r.root_counts.size() == r.orbit_size);
      for (size_t c : r.root_counts) CHECK(c == r.positive_roots.size());
      // The same count from a reflected base point.
      int i = static_cast<int>(rng() % d.rank());
      auto s = positive_roots(reflect(d, i), Caps{400, 400});
      REQUIRE(s.finite());
      CHECK(s.positive_roots.size() == r.positive_roots.size());
    }
    CHECK(finite > kCases / 2);
  }

  TEST_CASE("criterium A with n = 1 is the collapse") {
    std::mt19937_64 rng(testing::test_seed() + 3);
    int compared = 0;
    for (int t = 0; t < kCases; ++t) {
      int rank = 2 + static_cast<int>(rng() % 5);
      auto d = testing::random_diagram(rng, rank, 0.6);
      int i = static_cast<int>(rng() % rank), j = static_cast<int>(rng() % rank);
      if (i == j || !d.adjacent(i, j) || !cartan_row(d, i)) continue;
      CHECK(criterium_A(d, i, j, 1) == collapse(d, i, j));
      ++compared;
    }
    CHECK(compared > kCases / 10);
  }

  TEST_CASE("Cartan data is invariant under renumbering") {
    std::mt19937_64 rng(testing::test_seed() + 4);
    int typed = 0;
    for (int t = 0; t < kCases; ++t) {
      auto d = (t % 2) ? list_sample(rng) : testing::random_diagram(rng, 2 + static_cast<int>(rng() % 6));
      auto p = testing::random_permutation(rng, d.rank());
      auto e = permute(d, p);
      CHECK(canonical_key(e) == canonical_key(d));
      auto cd = cartan_matrix(d), ce = cartan_matrix(e);
      REQUIRE(cd.ok() == ce.ok());
      CHECK(is_cartan_type(d) == is_cartan_type(e));
      if (!cd.ok()) continue;
      ++typed;
      for (int a = 0; a < d.rank(); ++a)
        for (int b = 0; b < d.rank(); ++b) CHECK((*ce.matrix)(a, b) == (*cd.matrix)(p[a], p[b]));
      auto fd = gcm_finite_type(*cd.matrix), fe = gcm_finite_type(*ce.matrix);
      CHECK(fd.finite == fe.finite);
      CHECK(fd.name == fe.name);
    }
    CHECK(typed > kCases / 4);
  }
}
