#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nichols/cartan.hpp"
#include "nichols/diagram.hpp"

namespace nichols {

struct Caps {
  size_t max_members = 100000;
  size_t max_roots = 10000;
};

using Root = std::array<int16_t, kMaxRank>;

// Throws NotReflectable when some c_ij is undefined at vertex i.
Diagram reflect(const Diagram& d, int i);

enum class OrbitStatus { Complete, CapExceeded, NotAllReflections };

struct WeylOrbit {
  OrbitStatus status = OrbitStatus::Complete;
  std::vector<Diagram> members;           // BFS order, members[0] is the base
  std::vector<std::vector<int>> edges;    // edges[m][i] = index of reflect(members[m], i), -1 if unknown
  int failing_member = -1;
  int failing_vertex = -1;
};

WeylOrbit orbit(const Diagram& d, const Caps& caps = {});

enum class RootStatus { Finite, NotAllReflections, CapExceeded };

struct RootSystemResult {
  RootStatus status = RootStatus::CapExceeded;
  std::vector<Root> positive_roots;   // sorted, for the input diagram (when Finite)
  size_t orbit_size = 0;              // objects visited
  std::vector<size_t> root_counts;    // |Delta_+| for every visited object (when Finite)
  std::vector<Diagram> objects;       // visited objects, objects[0] is the input
  Diagram failing_object;             // for NotAllReflections
  int failing_vertex = -1;
  std::string note;                   // reason for CapExceeded
  bool finite() const { return status == RootStatus::Finite; }
};

RootSystemResult positive_roots(const Diagram& d, const Caps& caps = {});

// Cheaper yes/no finiteness test with the same semantics as positive_roots.
bool has_finite_root_system(const Diagram& d, const Caps& caps = {});

std::string root_str(const Root& r, int rank);
const char* status_name(RootStatus s);

}  // namespace nichols
