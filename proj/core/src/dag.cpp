#include "bpcc/dag.hpp"

#include "bpcc/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bpcc {

DagVertex& Dag::vertex(const std::string& id) {
  for (auto& v : vertices)
    if (v.id == id) return v;
  fail(Errc::NotADag, "unknown vertex " + id);
}

const DagVertex& Dag::vertex(const std::string& id) const {
  for (const auto& v : vertices)
    if (v.id == id) return v;
  fail(Errc::NotADag, "unknown vertex " + id);
}

bool Dag::has_vertex(const std::string& id) const {
  return std::any_of(vertices.begin(), vertices.end(),
                     [&](const DagVertex& v) { return v.id == id; });
}

std::vector<std::string> Dag::successors(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [s, t] : edges)
    if (s == id) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Dag::predecessors(const std::string& id) const {
  std::vector<std::string> in;
  for (const auto& [s, t] : edges)
    if (t == id) in.push_back(s);
  std::sort(in.begin(), in.end());
  return in;
}

const std::string& Dag::source() const {
  for (const auto& v : vertices)
    if (v.in_degree == 0) return v.id;
  fail(Errc::NotADag, "graph has no source vertex");
}

std::vector<std::string> Dag::topo_order() const {
  std::map<std::string, int> indeg;
  for (const auto& v : vertices) indeg[v.id] = v.in_degree;
  // Kahn's algorithm with ascending-id tie-break for determinism.
  std::set<std::string> ready;
  for (const auto& v : vertices)
    if (v.in_degree == 0) ready.insert(v.id);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& s : successors(v))
      if (--indeg[s] == 0) ready.insert(s);
  }
  return order;
}

std::string Dag::dot() const {
  std::ostringstream os;
  os << "digraph dag {\n  rankdir=LR;\n";
  for (const auto& v : vertices) {
    std::string shape = "box";
    if (v.kind == ElementKind::StartEvent || v.kind == ElementKind::EndEvent ||
        v.kind == ElementKind::IntermediateEvent)
      shape = "ellipse";
    else if (v.kind == ElementKind::ExclusiveGateway || v.kind == ElementKind::InclusiveGateway ||
             v.kind == ElementKind::ParallelGateway)
      shape = "diamond";
    os << "  \"" << v.id << "\" [label=\"" << v.name << "\", shape=" << shape << "];\n";
  }
  for (const auto& [s, t] : edges) os << "  \"" << s << "\" -> \"" << t << "\";\n";
  os << "}\n";
  return os.str();
}

namespace {

void compute_degrees(Dag& dag) {
  std::map<std::string, int> indeg, outdeg;
  for (const auto& [s, t] : dag.edges) {
    ++outdeg[s];
    ++indeg[t];
  }
  for (auto& v : dag.vertices) {
    v.in_degree = indeg.count(v.id) ? indeg[v.id] : 0;
    v.out_degree = outdeg.count(v.id) ? outdeg[v.id] : 0;
    v.root = v.id;
  }
}

// DFS cycle search returning one offending cycle path.
std::vector<std::string> find_cycle(const Dag& dag) {
  std::map<std::string, int> state; // 0 unseen, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (const auto& s : dag.successors(v)) {
      if (state[s] == 1) {
        auto it = std::find(stack.begin(), stack.end(), s);
        cycle.assign(it, stack.end());
        cycle.push_back(s);
        return true;
      }
      if (state[s] == 0 && visit(s)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };

  for (const auto& v : dag.vertices)
    if (state[v.id] == 0 && visit(v.id)) return cycle;
  return {};
}

void check_acyclic_single_source(const Dag& dag) {
  auto cycle = find_cycle(dag);
  if (!cycle.empty()) {
    std::string path;
    for (size_t i = 0; i < cycle.size(); ++i) path += (i ? " -> " : "") + cycle[i];
    fail(Errc::CycleDetected, path);
  }
  int sources = 0, sinks = 0;
  for (const auto& v : dag.vertices) {
    if (v.in_degree == 0) ++sources;
    if (v.out_degree == 0) ++sinks;
  }
  if (sources != 1)
    fail(Errc::NotADag, "expected exactly one source vertex, found " + std::to_string(sources));
  if (sinks < 1) fail(Errc::NotADag, "expected at least one sink vertex");
}

} // namespace

Dag to_dag(const BpmnModel& model) {
  Dag dag;
  for (const auto& e : model.elements)
    dag.vertices.push_back(DagVertex{e.id, e.name, e.kind, e.pool, 0, 0, e.id});
  for (const auto& f : model.flows) dag.edges.insert({f.source, f.target});
  for (const auto& [s, t] : dag.edges) {
    if (!dag.has_vertex(s)) fail(Errc::DanglingFlow, "edge source " + s);
    if (!dag.has_vertex(t)) fail(Errc::DanglingFlow, "edge target " + t);
  }
  compute_degrees(dag);
  check_acyclic_single_source(dag);
  return dag;
}

Dag make_dag(const std::vector<std::string>& vertex_ids, const std::vector<Edge>& edges) {
  Dag dag;
  for (const auto& id : vertex_ids)
    dag.vertices.push_back(DagVertex{id, id, ElementKind::Task, "", 0, 0, id});
  for (const auto& e : edges) dag.edges.insert(e);
  compute_degrees(dag);
  check_acyclic_single_source(dag);
  return dag;
}

} // namespace bpcc
