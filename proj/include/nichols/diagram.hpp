#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nichols/cyclo.hpp"

namespace nichols {

constexpr int kMaxRank = 9;

// Generalized Dynkin diagram. Vertex i carries q_ii; the pair {i,j} carries
// qt_ij = q_ij * q_ji, with 1 meaning "no edge". Indices are 0-based in code
// and 1-based in the text format.
class Diagram {
 public:
  Diagram() = default;
  explicit Diagram(int rank);

  int rank() const { return rank_; }
  const RootOfUnity& vertex(int i) const { return v_[i]; }
  const RootOfUnity& edge(int i, int j) const { return e_[slot(i, j)]; }
  void set_vertex(int i, RootOfUnity x) { v_[i] = x; }
  void set_edge(int i, int j, RootOfUnity x) { e_[slot(i, j)] = x; }
  bool adjacent(int i, int j) const { return i != j && !edge(i, j).is_one(); }

  // Text form: rank=3; v=[e5^1,-1,e5^1]; e=[(1,2)=e5^4, (2,3)=e5^1]
  std::string str() const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j - 1) / 2 + i;
  }
  int rank_ = 0;
  std::array<RootOfUnity, kMaxRank> v_{};
  std::array<RootOfUnity, kMaxRank*(kMaxRank - 1) / 2> e_{};
};

// Throws std::invalid_argument with a message naming the problem.
Diagram parse_diagram(std::string_view text);

// Induced subdiagram on S (0-based indices), renumbered increasingly.
Diagram restrict(const Diagram& d, std::vector<int> S);
// New vertex i is old vertex perm[i].
Diagram permute(const Diagram& d, const std::vector<int>& perm);

// Lexicographically least encoding over all vertex orders. The encoding
// lists, for each position k, the vertex label followed by the edges to
// positions 0..k-1.
std::string canonical_key(const Diagram& d);
// Same, and reports an ordering attaining the minimum (new i = old order[i]).
std::string canonical_key(const Diagram& d, std::vector<int>* order);
Diagram canonical_form(const Diagram& d);

// Exact (numbering-sensitive) encoding, usable as a hash key.
std::string exact_key(const Diagram& d);

int degree(const Diagram& d, int i);
bool is_connected(const Diagram& d);
// True iff the edge graph has a cycle through exactly n distinct vertices.
bool has_cycle(const Diagram& d, int n);
std::vector<std::vector<int>> components(const Diagram& d);
// Vertices whose removal leaves the remaining diagram connected.
std::vector<int> non_cut_vertices(const Diagram& d);

enum class ShapeKind {
  Line,
  Triangle,
  Square,
  Tadpole,
  Tripod,
  TriangleInMiddle,
  Etype,
  Star,
  Bowtie,
  Semidirect,
  Cross,
  ExtendedE6,
  Other
};

struct Shape {
  ShapeKind kind = ShapeKind::Other;
  // Square: number of diagonals. Etype: rank. Tripod: rank.
  // TriangleInMiddle: lengths of the two tails, smaller first.
  int a = 0;
  int b = 0;
  std::string name() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

Shape classify_shape(const Diagram& d);

}  // namespace nichols
