#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nichols/diagram.hpp"

namespace nichols {

// Braiding matrix q = (q_ij). The diagram of q has vertex labels q_ii and
// edge labels q_ij * q_ji.
struct BraidingMatrix {
  int rank = 0;
  std::array<std::array<RootOfUnity, kMaxRank>, kMaxRank> q{};

  // Representative with q_ij = qt_ij for i < j and q_ji = 1.
  static BraidingMatrix canonical(const Diagram& d);
  Diagram diagram() const;
};

struct CartanMatrix {
  int rank = 0;
  std::array<std::array<int64_t, kMaxRank>, kMaxRank> c{};

  int64_t operator()(int i, int j) const { return c[i][j]; }
  int64_t m(int i, int j) const { return -c[i][j]; }
  std::vector<std::vector<int64_t>> rows() const;
  friend bool operator==(const CartanMatrix&, const CartanMatrix&) = default;
};

struct NotReflectable : std::runtime_error {
  int vertex;
  explicit NotReflectable(int v)
      : std::runtime_error("not reflectable at vertex " + std::to_string(v + 1)), vertex(v) {}
};

// c_ij from the vertex label q_ii and the edge label qt_ij; nullopt when
// q_ii = 1 and qt_ij != 1.
std::optional<int64_t> cartan_entry(const RootOfUnity& qii, const RootOfUnity& qtij);
// Same, read off a braiding matrix. Throws std::invalid_argument when i == j.
std::optional<int64_t> cartan_entry(const BraidingMatrix& q, int i, int j);

struct CartanResult {
  std::optional<CartanMatrix> matrix;
  int failing_vertex = -1;  // first vertex where some entry is undefined
  bool ok() const { return matrix.has_value(); }
};

CartanResult cartan_matrix(const Diagram& d);
// Row i only; nullopt when vertex i is not reflectable.
std::optional<std::array<int64_t, kMaxRank>> cartan_row(const Diagram& d, int i);

// nullopt when the diagram is not reflectable somewhere.
std::optional<bool> is_cartan_type(const Diagram& d);

struct FiniteTypeResult {
  bool finite = false;
  // Components joined with '+', e.g. "A3" or "A1+B2"; empty when not finite.
  std::string name;
};

FiniteTypeResult gcm_finite_type(const CartanMatrix& C);

// Pairs (i, j) with c_ij == 0 but c_ji != 0.
std::vector<std::pair<int, int>> zero_pattern_violations(const CartanMatrix& C);

}  // namespace nichols
