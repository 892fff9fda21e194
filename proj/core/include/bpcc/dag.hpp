#pragma once

#include "bpcc/bpmn.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace bpcc {

using Edge = std::pair<std::string, std::string>;
using EdgeSet = std::set<Edge>;

struct DagVertex {
  std::string id;
  std::string name;
  ElementKind kind = ElementKind::Task;
  std::string pool;
  int in_degree = 0;
  int out_degree = 0;
  std::string root; // Algorithm state: entry candidate of the region this vertex sits in.
};

// Flow-control graph of a normalized model. One vertex per flow object, one
// edge per connecting object; the edge set is a mathematical set, so duplicate
// connections collapse.
struct Dag {
  std::vector<DagVertex> vertices; // model order
  EdgeSet edges;

  DagVertex& vertex(const std::string& id);
  const DagVertex& vertex(const std::string& id) const;
  bool has_vertex(const std::string& id) const;

  std::vector<std::string> successors(const std::string& id) const;
  std::vector<std::string> predecessors(const std::string& id) const;

  // The unique in-degree-0 vertex (the START event).
  const std::string& source() const;

  std::vector<std::string> topo_order() const;

  std::string dot() const;
};

// Builds the DAG for a normalized model. Rejects cyclic input with the
// offending cycle in the error message and requires exactly one source.
Dag to_dag(const BpmnModel& model);

// Assembles a Dag directly from vertex ids and edges (tests, generators).
Dag make_dag(const std::vector<std::string>& vertex_ids, const std::vector<Edge>& edges);

} // namespace bpcc
