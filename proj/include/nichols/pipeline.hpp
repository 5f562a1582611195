#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nichols/criteria.hpp"
#include "nichols/diagram.hpp"
#include "nichols/hlist.hpp"

namespace nichols {

using EdgeList = std::vector<std::pair<int, int>>;  // 0-based

// A piece of a positional template: an ordered vertex list and the template
// edges kept on it. The sub-diagram read off a candidate has exactly these
// edges, so a piece can be a line even when its vertices span a triangle.
struct Piece {
  std::vector<int> vertices;
  EdgeList edges;
};

// Candidates are all labelings of the template edge graph whose pieces all
// lie in the list, with labels drawn from list members. Generation glues the
// positional lists of two covering pieces and checks the others.
struct BuilderSpec {
  std::string name;
  int rank = 0;
  EdgeList edges;
  std::vector<Piece> checks;  // empty: every connected induced piece on rank-1 vertices
  // Drop candidates all of whose pieces of this rank are of Cartan type.
  bool drop_all_cartan_pieces = false;
};

struct StepSpec {
  enum Kind {
    RemoveHlist,
    DedupPermutations,
    CartanFilter,
    Criteria,
    ReflectsToShape,
    ReflectsToDiscarded
  } kind = Criteria;
  std::string label;
  Policy policy;                          // Criteria
  std::vector<std::vector<int>> words;    // ReflectsToShape / ReflectsToDiscarded
  bool minus_one_only = false;            // ReflectsToShape
  ShapeGuard shape;                       // ReflectsToShape
  bool unless_hlist = true;               // ReflectsToShape: spare reflections inside the list
  std::string name() const;
};

struct ScenarioPart {
  std::string name;
  std::vector<BuilderSpec> builders;      // candidates are their exact union
  std::vector<StepSpec> chain;
  // Golden counts: the candidate count, then one entry per step. Entries
  // are optional.
  std::vector<std::optional<long>> expected;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<ScenarioPart> parts;
};

struct StepCount {
  std::string name;
  size_t in = 0;
  size_t out = 0;
  std::optional<long> expected;
};

struct PipelineReport {
  std::string scenario;
  std::vector<StepCount> steps;
  std::vector<Diagram> survivors;        // canonical-key order
  std::vector<std::string> caveats;
  std::vector<std::string> mismatches;   // golden count differences
  double seconds = 0;

  bool sound() const { return survivors.empty(); }
  std::string json() const;
  std::string text() const;
};

struct PipelineOptions {
  int threads = 1;
  bool check_completeness = true;  // every list member of the template shape is a candidate
};

// Exact union of the builders' outputs, in deterministic order.
std::vector<Diagram> build_candidates(const BuilderSpec& spec, const HlistDb& db);

// All positional labelings of a piece that lie in the list.
std::vector<Diagram> positional_list(int rank, const EdgeList& edges, const HlistDb& db);

PipelineReport run_filter_chain(const std::string& name, std::vector<Diagram> candidates,
                                const std::vector<StepSpec>& chain, const HlistDb& db,
                                const PipelineOptions& opts = {});

PipelineReport run_part(const ScenarioPart& part, const HlistDb& db, const PipelineOptions& opts = {});
PipelineReport run_scenario(const Scenario& s, const HlistDb& db, const PipelineOptions& opts = {});

// Scenario files are JSON; see data/scenarios.
Scenario parse_scenario(const std::string& json_text, const std::string& source = "<text>");
Scenario load_scenario(const std::string& path);
// Directory of *.json scenario files, sorted by file name.
std::vector<Scenario> load_catalog(const std::string& dir);
std::string resolve_scenario_dir(const std::string& flag_value);

}  // namespace nichols
