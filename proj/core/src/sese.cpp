#include "bpcc/sese.hpp"

#include "bpcc/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace bpcc {

namespace {

struct Adjacency {
  std::map<std::string, std::vector<std::string>> succ;
  std::map<std::string, std::vector<std::string>> pred;
  std::map<std::string, int> indeg, outdeg;

  explicit Adjacency(const Dag& dag) {
    for (const auto& v : dag.vertices) {
      succ[v.id];
      pred[v.id];
      indeg[v.id] = v.in_degree;
      outdeg[v.id] = v.out_degree;
    }
    for (const auto& [s, t] : dag.edges) {
      succ[s].push_back(t);
      pred[t].push_back(s);
    }
    for (auto& [k, v] : succ) std::sort(v.begin(), v.end());
    for (auto& [k, v] : pred) std::sort(v.begin(), v.end());
  }
};

// Exit classification is structural: a merge closes its region, a vertex in
// front of a fork closes its region, an END vertex closes the last one.
bool is_exit_vertex(const Adjacency& adj, const std::string& v) {
  int in = adj.indeg.at(v);
  int out = adj.outdeg.at(v);
  if (in > 1) return true;
  if (out == 0) return true;
  if (out == 1) {
    const std::string& y = adj.succ.at(v).front();
    if (adj.outdeg.at(y) > 1) return true;
  }
  return false;
}

// Entry/exit anchors of a member set, by external-edge analysis. Returns
// false when the set cannot be a single-entry single-exit region.
struct Anchors {
  std::optional<std::string> entry;       // unique member with external in-edges
  std::optional<std::string> exit;        // unique member with external out-edges
  std::string entry_anchor, exit_anchor;  // START/END stand-ins when absent
};

bool compute_anchors(const Dag& dag, const std::set<std::string>& members, Anchors& out) {
  std::set<std::string> ext_in, ext_out;
  for (const auto& [s, t] : dag.edges) {
    bool sm = members.count(s), tm = members.count(t);
    if (!sm && tm) ext_in.insert(t);
    if (sm && !tm) ext_out.insert(s);
  }
  if (ext_in.size() > 1 || ext_out.size() > 1) return false;
  out.entry = ext_in.empty() ? std::nullopt : std::make_optional(*ext_in.begin());
  out.exit = ext_out.empty() ? std::nullopt : std::make_optional(*ext_out.begin());

  if (out.entry) {
    out.entry_anchor = *out.entry;
  } else {
    // No external in-edges: the region must hold the START vertex.
    const std::string& src = dag.source();
    if (!members.count(src)) return false;
    out.entry_anchor = src;
  }
  if (out.exit) {
    out.exit_anchor = *out.exit;
  } else {
    // No external out-edges: exactly one internal sink plays the exit.
    std::vector<std::string> sinks;
    for (const auto& m : members)
      if (dag.vertex(m).out_degree == 0) sinks.push_back(m);
    if (sinks.size() != 1) return false;
    out.exit_anchor = sinks.front();
  }
  return true;
}

bool is_independent_subgraph(const Dag& dag, const std::set<std::string>& members, Anchors& anchors) {
  if (members.empty()) return false;
  if (!compute_anchors(dag, members, anchors)) return false;
  // Localization: only the exit sends edges out, only the entry receives
  // edges in. compute_anchors already guarantees uniqueness; nothing else to
  // check beyond connectivity.
  std::set<std::string> seen;
  std::deque<std::string> work{anchors.entry_anchor};
  seen.insert(anchors.entry_anchor);
  while (!work.empty()) {
    std::string v = work.front();
    work.pop_front();
    for (const auto& [s, t] : dag.edges) {
      if (s == v && members.count(t) && !seen.count(t)) {
        seen.insert(t);
        work.push_back(t);
      }
    }
  }
  return seen.size() == members.size();
}

bool interior_degrees_ok(const Dag& dag, const std::set<std::string>& members,
                         const Anchors& anchors) {
  for (const auto& m : members) {
    if (m == anchors.entry_anchor || m == anchors.exit_anchor) continue;
    const DagVertex& v = dag.vertex(m);
    if (v.in_degree != 1 || v.out_degree != 1) return false;
  }
  return true;
}

SeseSubgraph make_subgraph(const Dag& dag, const std::set<std::string>& members) {
  Anchors anchors;
  compute_anchors(dag, members, anchors);
  SeseSubgraph sg;
  sg.members = members;
  sg.entry = anchors.entry;
  sg.exit = anchors.exit;
  for (const auto& e : dag.edges)
    if (members.count(e.first) && members.count(e.second)) sg.internal_edges.insert(e);
  return sg;
}

void validate_decomposition(const Dag& dag, const std::vector<SeseSubgraph>& subs) {
  std::map<std::string, int> region_of;
  for (size_t i = 0; i < subs.size(); ++i) {
    for (const auto& m : subs[i].members) {
      if (region_of.count(m))
        fail(Errc::NotNormalized, "vertex " + m + " assigned to two subgraphs");
      region_of[m] = static_cast<int>(i);
    }
  }
  if (region_of.size() != dag.vertices.size())
    fail(Errc::NotNormalized, "subgraphs do not cover the vertex set");
  for (const auto& sg : subs) {
    Anchors anchors;
    if (!is_independent_subgraph(dag, sg.members, anchors))
      fail(Errc::NotNormalized, "region is not single-entry single-exit (unsupported structure)");
    if (!interior_degrees_ok(dag, sg.members, anchors))
      fail(Errc::NotNormalized, "region has an interior fork or merge (unsupported structure)");
  }
  for (const auto& [s, t] : dag.edges) {
    if (region_of[s] == region_of[t]) continue;
    const SeseSubgraph& a = subs[region_of[s]];
    const SeseSubgraph& b = subs[region_of[t]];
    Anchors aa, ab;
    compute_anchors(dag, a.members, aa);
    compute_anchors(dag, b.members, ab);
    if (s != aa.exit_anchor || t != ab.entry_anchor)
      fail(Errc::NotNormalized, "interconnect edge " + s + "->" + t +
                                    " does not join an exit to an entry");
  }
}

EdgeSet interconnect_of(const Dag& dag, const std::vector<SeseSubgraph>& subs) {
  std::map<std::string, int> region_of;
  for (size_t i = 0; i < subs.size(); ++i)
    for (const auto& m : subs[i].members) region_of[m] = static_cast<int>(i);
  EdgeSet inter;
  for (const auto& e : dag.edges)
    if (region_of[e.first] != region_of[e.second]) inter.insert(e);
  return inter;
}

} // namespace

bool SeseSubgraph::contains(const SeseSubgraph& other) const {
  return std::includes(members.begin(), members.end(), other.members.begin(), other.members.end());
}

bool SeseSubgraph::same_members(const SeseSubgraph& other) const { return members == other.members; }

const std::string& SeseSubgraph::sort_key() const {
  static const std::string empty;
  return entry ? *entry : empty;
}

nlohmann::json SeseSubgraph::to_json() const {
  nlohmann::json j;
  j["entry"] = entry ? nlohmann::json(*entry) : nlohmann::json();
  j["exit"] = exit ? nlohmann::json(*exit) : nlohmann::json();
  j["members"] = members;
  j["member_count"] = members.size();
  return j;
}

nlohmann::json LsiDecomposition::to_json() const {
  nlohmann::json j;
  j["subgraphs"] = nlohmann::json::array();
  for (const auto& s : subgraphs) j["subgraphs"].push_back(s.to_json());
  j["interconnect"] = nlohmann::json::array();
  for (const auto& [s, t] : interconnect) j["interconnect"].push_back({s, t});
  return j;
}

LsiDecomposition find_lsi_subgraphs(const Dag& dag) {
  if (dag.topo_order().size() != dag.vertices.size()) fail(Errc::NotADag, "input graph is cyclic");
  for (const auto& v : dag.vertices)
    if (v.in_degree > 1 && v.out_degree > 1)
      fail(Errc::NotNormalized, "vertex " + v.id + " has both in- and out-degree above one");

  Adjacency adj(dag);

  // Root assignment in topological order: forks anchor their own region,
  // vertices following an exit start a fresh one, everything else inherits
  // the predecessor's root.
  std::map<std::string, std::string> root;
  for (const auto& v : dag.topo_order()) {
    int in = adj.indeg.at(v);
    if (in == 0 || adj.outdeg.at(v) > 1) {
      root[v] = v;
    } else if (in == 1) {
      const std::string& p = adj.pred.at(v).front();
      root[v] = is_exit_vertex(adj, p) ? v : root[p];
    } else {
      root[v] = root[adj.pred.at(v).front()];
    }
  }

  // Breadth-first traversal from the START vertex; every exit vertex closes
  // the region anchored at its root.
  std::vector<std::set<std::string>> regions; // discovery order
  std::map<std::string, std::string> region_exit_anchor;
  std::deque<std::string> queue{dag.source()};
  std::set<std::string> visited{dag.source()};
  auto emit = [&](const std::string& r) {
    std::set<std::string> members;
    for (const auto& [v, rv] : root)
      if (rv == r) members.insert(v);
    for (const auto& existing : regions)
      if (existing == members) return;
    regions.push_back(std::move(members));
  };
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    if (is_exit_vertex(adj, v)) emit(root[v]);
    for (const auto& s : adj.succ.at(v)) {
      if (!visited.count(s)) {
        visited.insert(s);
        queue.push_back(s);
      }
    }
  }

  // Post processing: combine any regions that share entry and exit anchors.
  std::vector<std::set<std::string>> combined;
  std::vector<std::pair<std::string, std::string>> anchors_of;
  for (const auto& members : regions) {
    Anchors a;
    if (!compute_anchors(dag, members, a))
      fail(Errc::NotNormalized, "traversal produced a non-SESE region (unsupported structure)");
    bool merged = false;
    for (size_t i = 0; i < combined.size(); ++i) {
      if (anchors_of[i] == std::make_pair(a.entry_anchor, a.exit_anchor)) {
        combined[i].insert(members.begin(), members.end());
        merged = true;
        break;
      }
    }
    if (!merged) {
      combined.push_back(members);
      anchors_of.emplace_back(a.entry_anchor, a.exit_anchor);
    }
  }

  LsiDecomposition out;
  for (const auto& members : combined) out.subgraphs.push_back(make_subgraph(dag, members));
  validate_decomposition(dag, out.subgraphs);
  out.interconnect = interconnect_of(dag, out.subgraphs);
  return out;
}

std::vector<SeseSubgraph> sorted_by_entry(std::vector<SeseSubgraph> subs) {
  std::stable_sort(subs.begin(), subs.end(), [](const SeseSubgraph& a, const SeseSubgraph& b) {
    return a.sort_key() < b.sort_key();
  });
  return subs;
}

std::vector<SeseSubgraph> enumerate_sese(const Dag& dag) {
  if (dag.topo_order().size() != dag.vertices.size()) fail(Errc::NotADag, "input graph is cyclic");
  Adjacency adj(dag);

  // Reachability closure for path-membership tests.
  std::map<std::string, std::set<std::string>> reach; // v -> vertices reachable from v (incl. v)
  auto topo = dag.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    auto& r = reach[*it];
    r.insert(*it);
    for (const auto& s : adj.succ.at(*it)) r.insert(reach[s].begin(), reach[s].end());
  }

  std::vector<std::set<std::string>> found;
  auto consider = [&](const std::set<std::string>& members) {
    if (members.size() < 2) return;
    Anchors a;
    if (!is_independent_subgraph(dag, members, a)) return;
    for (const auto& f : found)
      if (f == members) return;
    found.push_back(members);
  };

  // Candidate (entry, exit) pairs: members are the vertices lying on paths
  // from entry to exit.
  for (const auto& e : dag.vertices) {
    for (const auto& x : dag.vertices) {
      if (e.id == x.id || !reach[e.id].count(x.id)) continue;
      std::set<std::string> members;
      for (const auto& v : dag.vertices)
        if (reach[e.id].count(v.id) && reach[v.id].count(x.id)) members.insert(v.id);
      consider(members);
    }
  }
  // START exception: ancestor closures.
  for (const auto& x : dag.vertices) {
    std::set<std::string> members;
    for (const auto& v : dag.vertices)
      if (reach[v.id].count(x.id)) members.insert(v.id);
    consider(members);
  }
  // END exception: descendant closures.
  for (const auto& e : dag.vertices) consider(reach[e.id]);

  std::vector<SeseSubgraph> out;
  for (const auto& members : found) out.push_back(make_subgraph(dag, members));
  std::sort(out.begin(), out.end(), [](const SeseSubgraph& a, const SeseSubgraph& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

LsiDecomposition brute_force_oracle(const Dag& dag) {
  if (dag.vertices.size() > 14)
    fail(Errc::TooLarge, "oracle accepts at most 14 vertices, got " +
                             std::to_string(dag.vertices.size()));
  Adjacency adj(dag);

  // Region boundaries from the definitions alone: an edge into a fork or out
  // of a merge cannot be internal to any region whose interior vertices have
  // exactly one incoming and one outgoing edge.
  auto is_cut = [&](const Edge& e) {
    return adj.indeg.at(e.first) > 1 || adj.outdeg.at(e.second) > 1;
  };

  // Components of the graph without cut edges.
  std::map<std::string, int> comp;
  int n = 0;
  for (const auto& v : dag.vertices)
    if (!comp.count(v.id)) {
      std::deque<std::string> work{v.id};
      comp[v.id] = n;
      while (!work.empty()) {
        std::string u = work.front();
        work.pop_front();
        for (const auto& e : dag.edges) {
          if (is_cut(e)) continue;
          std::string other;
          if (e.first == u) other = e.second;
          else if (e.second == u) other = e.first;
          else continue;
          if (!comp.count(other)) {
            comp[other] = n;
            work.push_back(other);
          }
        }
      }
      ++n;
    }

  std::vector<std::set<std::string>> members(n);
  for (const auto& [v, c] : comp) members[c].insert(v);

  // Merge any components sharing entry and exit anchors, then verify every
  // region against the independent-subgraph and LSI definitions.
  std::vector<std::set<std::string>> regions;
  std::vector<std::pair<std::string, std::string>> anchors_of;
  // Deterministic order: by smallest member.
  std::sort(members.begin(), members.end());
  for (const auto& m : members) {
    Anchors a;
    if (!compute_anchors(dag, m, a))
      fail(Errc::NotNormalized, "oracle: region is not single-entry single-exit");
    bool merged = false;
    for (size_t i = 0; i < regions.size(); ++i) {
      if (anchors_of[i] == std::make_pair(a.entry_anchor, a.exit_anchor)) {
        regions[i].insert(m.begin(), m.end());
        merged = true;
        break;
      }
    }
    if (!merged) {
      regions.push_back(m);
      anchors_of.emplace_back(a.entry_anchor, a.exit_anchor);
    }
  }

  LsiDecomposition out;
  for (const auto& m : regions) out.subgraphs.push_back(make_subgraph(dag, m));
  validate_decomposition(dag, out.subgraphs);
  out.subgraphs = sorted_by_entry(std::move(out.subgraphs));
  out.interconnect = interconnect_of(dag, out.subgraphs);
  return out;
}

int SeseLattice::index_of_members(const std::set<std::string>& members) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].members == members) return static_cast<int>(i);
  return -1;
}

std::vector<int> SeseLattice::children_of(int node) const {
  std::vector<int> out;
  for (size_t i = 0; i < parent.size(); ++i)
    if (parent[i] == node) out.push_back(static_cast<int>(i));
  return out;
}

SeseLattice build_lattice(const Dag& dag, const std::vector<SeseSubgraph>& subs) {
  SeseLattice lat;
  lat.nodes = subs;
  lat.parent.assign(subs.size(), -1);

  Adjacency adj(dag);
  auto anchors = [&](const SeseSubgraph& s) {
    Anchors a;
    if (!compute_anchors(dag, s.members, a))
      fail(Errc::TheoremViolation, "input subgraph is not single-entry single-exit");
    return a;
  };

  // Pairwise relationship check per the containment theorem: nested,
  // disjoint (possibly joined by one exit-to-entry edge), or overlapping on
  // a shared vertex set that itself forms an independent subgraph.
  for (size_t i = 0; i < subs.size(); ++i) {
    for (size_t j = i + 1; j < subs.size(); ++j) {
      const auto& A = subs[i];
      const auto& B = subs[j];
      std::set<std::string> shared;
      std::set_intersection(A.members.begin(), A.members.end(), B.members.begin(), B.members.end(),
                            std::inserter(shared, shared.begin()));
      if (shared.empty()) {
        // At most one connecting edge, and it must join an exit to an entry.
        std::vector<Edge> between;
        for (const auto& e : dag.edges) {
          bool am = A.members.count(e.first), bm = B.members.count(e.second);
          bool bm2 = B.members.count(e.first), am2 = A.members.count(e.second);
          if ((am && bm) || (bm2 && am2)) between.push_back(e);
        }
        if (between.size() > 1)
          fail(Errc::TheoremViolation, "disjoint subgraphs joined by more than one edge");
        if (between.size() == 1) {
          Anchors aa = anchors(A), ab = anchors(B);
          const Edge& e = between.front();
          bool fwd = e.first == aa.exit_anchor && e.second == ab.entry_anchor;
          bool rev = e.first == ab.exit_anchor && e.second == aa.entry_anchor;
          if (!fwd && !rev)
            fail(Errc::TheoremViolation, "connecting edge is not exit-to-entry");
        }
        continue;
      }
      if (A.contains(B) || B.contains(A)) continue;
      if (shared.size() == 1) continue; // junction vertex: exit of one, entry of the other
      Anchors sa;
      if (!is_independent_subgraph(dag, shared, sa))
        fail(Errc::TheoremViolation, "overlap does not form an independent subgraph");
    }
  }

  // Containment forest: parent is the smallest strict superset.
  for (size_t i = 0; i < subs.size(); ++i) {
    int best = -1;
    for (size_t j = 0; j < subs.size(); ++j) {
      if (i == j) continue;
      if (subs[j].contains(subs[i]) && subs[j].members.size() > subs[i].members.size()) {
        if (best < 0 || subs[j].members.size() < subs[best].members.size())
          best = static_cast<int>(j);
      }
    }
    lat.parent[i] = best;
  }

  // Chain links: exit anchor of one region feeds the entry anchor of another,
  // either through a shared junction vertex or a single interconnect edge.
  for (size_t i = 0; i < subs.size(); ++i) {
    for (size_t j = 0; j < subs.size(); ++j) {
      if (i == j) continue;
      Anchors ai = anchors(subs[i]), aj = anchors(subs[j]);
      if (ai.exit_anchor == aj.entry_anchor && !subs[i].contains(subs[j]) &&
          !subs[j].contains(subs[i])) {
        lat.chain.insert({static_cast<int>(i), static_cast<int>(j)});
        continue;
      }
      if (dag.edges.count({ai.exit_anchor, aj.entry_anchor}) && !subs[j].members.count(ai.exit_anchor) &&
          !subs[i].members.count(aj.entry_anchor))
        lat.chain.insert({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return lat;
}

std::vector<SeseSubgraph> AnalysisResult::all() const {
  std::vector<SeseSubgraph> out = lsi.subgraphs;
  out.insert(out.end(), composites.begin(), composites.end());
  return out;
}

const SeseSubgraph* AnalysisResult::by_name(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] != name) continue;
    if (i < lsi.subgraphs.size()) return &lsi.subgraphs[i];
    size_t k = i - lsi.subgraphs.size();
    if (k < composites.size()) return &composites[k];
  }
  return nullptr;
}

nlohmann::json AnalysisResult::to_json(const Dag& dag) const {
  nlohmann::json j;
  auto subs = all();
  j["subgraphs"] = nlohmann::json::array();
  for (size_t i = 0; i < subs.size(); ++i) {
    nlohmann::json js = subs[i].to_json();
    js["name"] = names[i];
    js["kind"] = i < lsi.subgraphs.size() ? "lsi" : "sese-composite";
    nlohmann::json member_names = nlohmann::json::array();
    for (const auto& m : subs[i].members) member_names.push_back(dag.vertex(m).name);
    js["member_names"] = member_names;
    j["subgraphs"].push_back(js);
  }
  j["interconnect"] = nlohmann::json::array();
  for (const auto& [s, t] : lsi.interconnect) j["interconnect"].push_back({s, t});
  return j;
}

std::string AnalysisResult::dot(const Dag& dag) const {
  static const char* palette[] = {"lightskyblue", "palegreen", "lightsalmon", "plum",
                                  "khaki",        "lightpink", "aquamarine",  "wheat"};
  std::ostringstream os;
  os << "digraph sese {\n  rankdir=LR;\n  node [style=filled];\n";
  for (size_t i = 0; i < lsi.subgraphs.size(); ++i) {
    os << "  subgraph cluster_" << i << " {\n    label=\"" << names[i] << "\";\n";
    for (const auto& m : lsi.subgraphs[i].members) {
      os << "    \"" << m << "\" [label=\"" << dag.vertex(m).name << "\", fillcolor="
         << palette[i % 8] << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& [s, t] : dag.edges) os << "  \"" << s << "\" -> \"" << t << "\";\n";
  os << "}\n";
  return os.str();
}

AnalysisResult analyze_dag(const Dag& dag) {
  AnalysisResult res;
  res.lsi = find_lsi_subgraphs(dag);
  const size_t n = res.lsi.subgraphs.size();
  for (size_t i = 0; i < n; ++i) res.names.push_back("S" + std::to_string(i + 1));

  // Composite candidates: unions of two or more complete LSI regions (not
  // all of them) that still satisfy the region definition. Ordered by the
  // earliest constituent region, then by span size.
  struct Composite {
    size_t first_region;
    size_t count;
    std::set<std::string> members;
  };
  std::vector<Composite> comps;
  if (n >= 3 && n <= 16) {
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
      size_t bits = static_cast<size_t>(__builtin_popcount(mask));
      if (bits < 2 || bits >= n) continue;
      std::set<std::string> members;
      size_t first = n;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          members.insert(res.lsi.subgraphs[i].members.begin(), res.lsi.subgraphs[i].members.end());
          first = std::min(first, i);
        }
      Anchors a;
      if (is_independent_subgraph(dag, members, a))
        comps.push_back(Composite{first, bits, std::move(members)});
    }
    std::sort(comps.begin(), comps.end(), [](const Composite& a, const Composite& b) {
      if (a.first_region != b.first_region) return a.first_region < b.first_region;
      if (a.count != b.count) return a.count < b.count;
      return a.members < b.members;
    });
  }
  for (auto& c : comps) {
    res.composites.push_back(make_subgraph(dag, c.members));
    res.names.push_back("S" + std::to_string(res.names.size() + 1));
  }
  return res;
}

} // namespace bpcc
