#pragma once

#include "bpcc/dag.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bpcc {

// Single-entry single-exit region of the flow DAG. The entry is the only
// member with incoming edges from non-members, the exit the only member with
// outgoing edges to non-members. A region holding the START vertex has no
// entry; a region whose members have no outgoing edges at all has no exit.
struct SeseSubgraph {
  std::optional<std::string> entry;
  std::optional<std::string> exit;
  std::set<std::string> members;
  EdgeSet internal_edges;

  bool contains(const SeseSubgraph& other) const;
  bool same_members(const SeseSubgraph& other) const;

  // Stable key for ordering: entry id, with the start subgraph first.
  const std::string& sort_key() const;

  nlohmann::json to_json() const;
};

struct LsiDecomposition {
  std::vector<SeseSubgraph> subgraphs; // discovery order of the traversal
  EdgeSet interconnect;

  nlohmann::json to_json() const;
};

// Breadth-first LSI discovery over a normalized DAG: merge vertices and
// vertices followed by a fork close a region, END vertices close the last
// one, and the post-processing step combines regions sharing entry and exit.
// Output regions appear in discovery order; use `sorted_by_entry` for the
// entry-id ordering.
LsiDecomposition find_lsi_subgraphs(const Dag& dag);

std::vector<SeseSubgraph> sorted_by_entry(std::vector<SeseSubgraph> subs);

// Exhaustive single-entry/single-exit enumeration by direct definition check
// over candidate (entry, exit) pairs plus the START/END exception regions.
// O(V^2 * E); fixture-scale inputs only.
std::vector<SeseSubgraph> enumerate_sese(const Dag& dag);

// Independent re-derivation of the LSI decomposition from the definitions:
// keep the enumerated regions whose interior degrees are all (1,1), drop the
// ones properly containing another such region, merge same-entry/exit pieces
// and verify the result partitions the vertex set. Test oracle; refuses
// inputs above 14 vertices.
LsiDecomposition brute_force_oracle(const Dag& dag);

struct SeseLattice {
  std::vector<SeseSubgraph> nodes;
  std::vector<int> parent;                 // index into nodes, -1 for roots
  std::set<std::pair<int, int>> chain;     // exit of first feeds entry of second

  int index_of_members(const std::set<std::string>& members) const;
  std::vector<int> children_of(int node) const;
};

// Containment forest over a family of SESE subgraphs of one DAG, with chain
// links where one region's exit feeds another's entry. Verifies the pairwise
// relationship guarantees (nested, disjoint-possibly-chained, or overlapping
// on a shared region/junction) and raises TheoremViolation otherwise.
SeseLattice build_lattice(const Dag& dag, const std::vector<SeseSubgraph>& subs);

// Analysis surface used by selection and the CLI: the LSI decomposition named
// S1..Sn in discovery order plus composite SESE regions (unions of >= 2
// complete consecutive LSI regions, the whole graph excluded) named Sn+1...
// ordered by span length then position.
struct AnalysisResult {
  LsiDecomposition lsi;
  std::vector<SeseSubgraph> composites;
  std::vector<std::string> names;          // parallel to subgraphs(): S1, S2, ...

  std::vector<SeseSubgraph> all() const;
  const SeseSubgraph* by_name(const std::string& name) const;
  nlohmann::json to_json(const Dag& dag) const;
  std::string dot(const Dag& dag) const;   // members colored per subgraph
};

AnalysisResult analyze_dag(const Dag& dag);

} // namespace bpcc
