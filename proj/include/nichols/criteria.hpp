#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nichols/cartan.hpp"
#include "nichols/diagram.hpp"
#include "nichols/hlist.hpp"

namespace nichols {

using DegreeVector = std::array<int, kMaxRank>;

// A list of theta-1 degree vectors. omega spans the orthogonal complement of
// B; it is only kept for audit output.
struct DegreeBasis {
  int theta = 0;
  std::vector<DegreeVector> B;
  DegreeVector omega{};

  // Throws std::invalid_argument unless the vectors are theta-1 linearly
  // independent vectors of length theta. Fills omega.
  static DegreeBasis make(int theta, std::vector<DegreeVector> B);
  std::string str() const;
};

// q_{beta,gamma} = prod q_ij^{b_i c_j}; vertex k gets q_{beta_k,beta_k}, the
// pair (k,l) gets q_{beta_k,beta_l} * q_{beta_l,beta_k}.
Diagram degree_vector_diagram(const BraidingMatrix& q, const DegreeBasis& B);
Diagram degree_vector_diagram(const Diagram& d, const DegreeBasis& B);

struct CriteriumError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// All indices are 0-based. sigma follows the convention of permute(): the
// new vertex k is the old vertex sigma[k].
//
// A: {alpha_k | k != i,j} + {alpha_j + n alpha_i}; the new vertex takes the
// place of j.
DegreeBasis basis_A(const Diagram& d, int i, int j, int n);
Diagram criterium_A(const Diagram& d, int i, int j, int n);
// Identifies vertices i and j of an adjacent pair into the root alpha_i + alpha_j.
Diagram collapse(const Diagram& d, int i, int j);
// B: {alpha_i + alpha_k, alpha_j + alpha_k} followed by the untouched alpha_p.
Diagram criterium_B(const Diagram& d, int i, int j, int k);
// C: alpha_1, alpha_2 + alpha_3, ..., alpha_{theta-2} + alpha_{theta-1}, alpha_theta.
Diagram criterium_C(const Diagram& d);
Diagram criterium_D(const Diagram& d, const std::vector<int>& sigma, int m, int n);
Diagram criterium_E(const Diagram& d, const std::vector<int>& sigma, int m, int n, int p);
Diagram criterium_F(const Diagram& d, const std::vector<int>& sigma);

enum class MembershipMode {
  Evaluated,  // finite rows and families over G_f only
  Full        // also parametric family matching at any parameter
};

// Membership of a possibly disconnected diagram: every connected component
// of rank >= 2 must be in the list.
bool in_hlist(const HlistDb& db, const Diagram& d, MembershipMode mode);

struct CriteriumImage {
  char criterium = 'A';
  std::vector<int> indices;  // 0-based; criterium specific layout
  Diagram image;
};

// Every admissible index tuple of the criterium on d. Layouts of `indices`:
// A (i,j,n); B (i,j,k) with i<j; C sigma; D sigma+(m,n); E sigma+(m,n,p);
// F sigma. For C and F, sigma only ranges over orders that satisfy the
// adjacency preconditions; vertices outside the path keep increasing order.
std::vector<CriteriumImage> criterium_images(const Diagram& d, char criterium);

// Whether entry k of an index tuple of the criterium is a vertex (as opposed
// to a multiplicity).
bool criterium_index_is_vertex(char criterium, size_t k);

// Shapes whose analysis is finished at a given point of a filter chain;
// a proper reflection landing in one of them (and outside the list) fails.
struct ShapeGuard {
  bool triangles = false;   // any 3-cycle
  bool forbidden = false;   // cycles of length >= 4, degree >= 4, stars, extended E6, TM(2,2)
  bool any() const { return triangles || forbidden; }
};

struct Policy {
  std::string criteria = "A";  // letters from "ABCDEF", applied in order
  bool cartan = false;         // Cartan-type filter
  int depth = 0;               // all reduced reflection words up to this length
  // Explicit 0-based reflection words (the empty word is always examined
  // unless skip_base). When non-empty they replace `depth`.
  std::vector<std::vector<int>> words;
  bool minus_one_only = false;  // reflect only at vertices labelled -1
  bool skip_base = false;
  ShapeGuard guard;
  // When non-empty, only images with one of these 0-based index tuples are
  // examined (same layout as CriteriumImage::indices).
  std::vector<std::vector<int>> only;
  MembershipMode mode = MembershipMode::Evaluated;
};

struct Verdict {
  bool survives = true;
  std::string reason;          // "A".."F", "Cartan", "Shape", "NotReflectable"
  std::vector<int> indices;    // 0-based
  std::vector<int> word;       // 0-based reflection word, applied left to right
  Diagram image;               // offending diagram
  std::string str() const;     // 1-based human form
};

Verdict passes_criteria(const Diagram& d, const Policy& policy, const HlistDb& db);

// The reflection words examined by a policy on d (the empty word first).
std::vector<std::vector<int>> reflection_words(const Diagram& d, const Policy& policy);

// Every list member of the given rank, reflected along every word of length
// at most `depth`, checked against the criteria (Cartan filter included,
// full membership). Verdicts are cached by canonical key.
struct SoundnessFailure {
  Diagram member;
  std::vector<int> word;  // 0-based
  Verdict verdict;
};
struct SoundnessReport {
  size_t members = 0;
  size_t words = 0;
  size_t distinct = 0;  // distinct diagrams checked
  std::vector<SoundnessFailure> failures;
};
SoundnessReport hlist_soundness(const HlistDb& db, int rank, int depth, const std::string& criteria = "ABCDEF");

bool forbidden_shape(const Diagram& d);
bool has_triangle(const Diagram& d);

}  // namespace nichols
