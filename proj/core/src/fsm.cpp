#include "bpcc/fsm.hpp"

#include "bpcc/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bpcc {

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::Plain: return "plain";
    case Topology::Exclusive: return "exclusive";
    case Topology::Inclusive: return "inclusive";
  }
  return "?";
}

std::string dispatch_flow(const std::string& submodel_id) { return "__dispatch__:" + submodel_id; }

const FsmState* Fsm::state(const std::string& sid) const {
  for (const auto& s : states)
    if (s.id == sid) return &s;
  return nullptr;
}

namespace {

const char* action_kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::InvokeTask: return "invoke-task";
    case ActionKind::EnqueueEvent: return "enqueue-event";
    case ActionKind::Respond: return "respond";
    case ActionKind::RaiseSignal: return "raise-signal";
    case ActionKind::InvokeMethod: return "invoke-method";
    case ActionKind::Arm: return "arm";
  }
  return "?";
}

ActionKind action_kind_from_name(const std::string& s) {
  if (s == "invoke-task") return ActionKind::InvokeTask;
  if (s == "enqueue-event") return ActionKind::EnqueueEvent;
  if (s == "respond") return ActionKind::Respond;
  if (s == "raise-signal") return ActionKind::RaiseSignal;
  if (s == "invoke-method") return ActionKind::InvokeMethod;
  if (s == "arm") return ActionKind::Arm;
  fail(Errc::PackageCorrupt, "unknown action kind " + s);
}

const char* state_kind_name(StateKind k) {
  switch (k) {
    case StateKind::Root: return "root";
    case StateKind::Dispatch: return "dispatch";
    case StateKind::Activity: return "activity";
    case StateKind::Terminal: return "terminal";
  }
  return "?";
}

StateKind state_kind_from_name(const std::string& s) {
  if (s == "root") return StateKind::Root;
  if (s == "dispatch") return StateKind::Dispatch;
  if (s == "activity") return StateKind::Activity;
  if (s == "terminal") return StateKind::Terminal;
  fail(Errc::PackageCorrupt, "unknown state kind " + s);
}

} // namespace

nlohmann::json Fsm::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["root"] = root_state;
  j["states"] = nlohmann::json::array();
  for (const auto& s : states) {
    nlohmann::json js{{"id", s.id}, {"kind", state_kind_name(s.kind)}};
    if (s.vertex) js["vertex"] = *s.vertex;
    if (s.task) js["task"] = *s.task;
    j["states"].push_back(js);
  }
  j["transitions"] = nlohmann::json::array();
  for (const auto& t : transitions) {
    nlohmann::json jt{{"from", t.from}, {"to", t.to}, {"on", t.on_flow}};
    if (t.vertex) jt["vertex"] = *t.vertex;
    if (t.guard) jt["guard"] = t.guard->text();
    jt["actions"] = nlohmann::json::array();
    for (const auto& a : t.actions) {
      nlohmann::json ja{{"kind", action_kind_name(a.kind)}, {"target", a.target}};
      if (a.guard) ja["guard"] = a.guard->text();
      jt["actions"].push_back(ja);
    }
    j["transitions"].push_back(jt);
  }
  return j;
}

Fsm Fsm::from_json(const nlohmann::json& j) {
  Fsm f;
  f.id = j.at("id").get<std::string>();
  f.root_state = j.at("root").get<std::string>();
  for (const auto& js : j.at("states")) {
    FsmState s;
    s.id = js.at("id").get<std::string>();
    s.kind = state_kind_from_name(js.at("kind").get<std::string>());
    if (js.contains("vertex")) s.vertex = js.at("vertex").get<std::string>();
    if (js.contains("task")) s.task = js.at("task").get<std::string>();
    f.states.push_back(std::move(s));
  }
  for (const auto& jt : j.at("transitions")) {
    FsmTransition t;
    t.from = jt.at("from").get<std::string>();
    t.to = jt.at("to").get<std::string>();
    t.on_flow = jt.at("on").get<std::string>();
    if (jt.contains("vertex")) t.vertex = jt.at("vertex").get<std::string>();
    if (jt.contains("guard")) t.guard = GuardExpr::parse(jt.at("guard").get<std::string>());
    for (const auto& ja : jt.at("actions")) {
      OutputAction a;
      a.kind = action_kind_from_name(ja.at("kind").get<std::string>());
      a.target = ja.at("target").get<std::string>();
      if (ja.contains("guard")) a.guard = GuardExpr::parse(ja.at("guard").get<std::string>());
      t.actions.push_back(std::move(a));
    }
    f.transitions.push_back(std::move(t));
  }
  return f;
}

nlohmann::json DeFsmSubmodel::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["subgraph_ref"] = subgraph_ref;
  j["topology"] = topology_name(topology);
  j["entry_vertex"] = entry_vertex;
  j["exit_vertex"] = exit_vertex;
  j["fsms"] = nlohmann::json::array();
  for (const auto& f : fsms) j["fsms"].push_back(f.to_json());
  j["stream_guards"] = nlohmann::json::array();
  for (const auto& g : stream_guards) j["stream_guards"].push_back({{"flow", g.flow}, {"guard", g.guard}});
  return j;
}

DeFsmSubmodel DeFsmSubmodel::from_json(const nlohmann::json& j) {
  DeFsmSubmodel m;
  m.id = j.at("id").get<std::string>();
  m.subgraph_ref = j.at("subgraph_ref").get<std::string>();
  std::string topo = j.at("topology").get<std::string>();
  m.topology = topo == "exclusive" ? Topology::Exclusive
               : topo == "inclusive" ? Topology::Inclusive
                                     : Topology::Plain;
  m.entry_vertex = j.at("entry_vertex").get<std::string>();
  m.exit_vertex = j.at("exit_vertex").get<std::string>();
  for (const auto& jf : j.at("fsms")) m.fsms.push_back(Fsm::from_json(jf));
  for (const auto& jg : j.at("stream_guards"))
    m.stream_guards.push_back({jg.at("flow").get<std::string>(), jg.at("guard").get<std::string>()});
  return m;
}

const DeFsmSubmodel* DeHsmModel::submodel(const std::string& sid) const {
  for (const auto& m : submodels)
    if (m.id == sid) return &m;
  return nullptr;
}

nlohmann::json DeHsmModel::to_json() const {
  nlohmann::json j;
  j["submodels"] = nlohmann::json::array();
  for (const auto& m : submodels) j["submodels"].push_back(m.to_json());
  j["interconnect"] = nlohmann::json::array();
  for (const auto& e : interconnect)
    j["interconnect"].push_back({{"from", e.from_submodel}, {"to", e.to_submodel}, {"flow", e.flow}});
  j["start_submodel"] = start_submodel;
  return j;
}

DeHsmModel DeHsmModel::from_json(const nlohmann::json& j) {
  DeHsmModel m;
  for (const auto& jm : j.at("submodels")) m.submodels.push_back(DeFsmSubmodel::from_json(jm));
  for (const auto& je : j.at("interconnect"))
    m.interconnect.push_back({je.at("from").get<std::string>(), je.at("to").get<std::string>(),
                              je.at("flow").get<std::string>()});
  m.start_submodel = j.at("start_submodel").get<std::string>();
  return m;
}

std::string DeHsmModel::dot() const {
  std::ostringstream os;
  os << "digraph dehsm {\n  rankdir=LR;\n  compound=true;\n";
  int c = 0;
  for (const auto& m : submodels) {
    os << "  subgraph cluster_" << c++ << " {\n    label=\"" << m.id << " ("
       << topology_name(m.topology) << ")\";\n";
    for (const auto& f : m.fsms) {
      for (const auto& s : f.states)
        os << "    \"" << f.id << "/" << s.id << "\" [label=\"" << s.id << "\"];\n";
      for (const auto& t : f.transitions)
        os << "    \"" << f.id << "/" << t.from << "\" -> \"" << f.id << "/" << t.to
           << "\" [label=\"" << t.on_flow << "\"];\n";
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

struct RegionView {
  std::string entry_anchor;
  std::string exit_anchor;
};

RegionView region_view(const SeseSubgraph& sub, const Dag& dag) {
  RegionView v;
  if (sub.entry) {
    v.entry_anchor = *sub.entry;
  } else {
    v.entry_anchor = dag.source();
    if (!sub.members.count(v.entry_anchor)) fail(Errc::NotLsi, "region without entry lacks START");
  }
  if (sub.exit) {
    v.exit_anchor = *sub.exit;
  } else {
    std::string sink;
    for (const auto& m : sub.members)
      if (dag.vertex(m).out_degree == 0) {
        if (!sink.empty()) fail(Errc::NotLsi, "region has several terminal vertices");
        sink = m;
      }
    if (sink.empty()) fail(Errc::NotLsi, "region has no exit and no terminal vertex");
    v.exit_anchor = sink;
  }
  return v;
}

const Flow* flow_between(const BpmnModel& model, const std::string& u, const std::string& v) {
  for (const auto& f : model.flows)
    if (f.source == u && f.target == v) return &f;
  return nullptr;
}

// Builder shared by the three topologies.
class SubmodelBuilder {
public:
  SubmodelBuilder(const SeseSubgraph& sub, const Dag& dag, const BpmnModel& model,
                  const std::string& id)
      : sub_(sub), dag_(dag), model_(model), id_(id), view_(region_view(sub, dag)) {}

  DeFsmSubmodel build() {
    DeFsmSubmodel out;
    out.id = id_;
    out.subgraph_ref = view_.entry_anchor;
    out.entry_vertex = view_.entry_anchor;
    out.exit_vertex = view_.exit_anchor;

    const DagVertex& entry = dag_.vertex(view_.entry_anchor);
    bool fork = entry.out_degree > 1;
    if (!fork) {
      out.topology = Topology::Plain;
      out.fsms.push_back(build_plain());
    } else if (entry.kind == ElementKind::ExclusiveGateway) {
      out.topology = Topology::Exclusive;
      out.fsms.push_back(build_exclusive(out.stream_guards));
    } else if (entry.kind == ElementKind::InclusiveGateway) {
      out.topology = Topology::Inclusive;
      build_inclusive(out);
    } else {
      fail(Errc::NotLsi, "region entry " + entry.id + " forks but is not a gateway");
    }
    return out;
  }

private:
  // Actions performed when the flow object `v` is consumed.
  std::vector<OutputAction> vertex_actions(const std::string& v) {
    std::vector<OutputAction> actions;
    const DagVertex& dv = dag_.vertex(v);
    const BpmnElement* el = model_.find(v);
    if (dv.kind == ElementKind::Task || dv.kind == ElementKind::Subprocess)
      actions.push_back({ActionKind::InvokeTask, v, std::nullopt});
    if (el && el->dimension == EventDimension::Signal)
      actions.push_back({ActionKind::RaiseSignal, v, std::nullopt});
    for (const auto& t : dag_.successors(v)) {
      const Flow* f = flow_between(model_, v, t);
      if (!f) fail(Errc::NotLsi, "no flow backing edge " + v + "->" + t);
      bool internal = sub_.members.count(t) > 0;
      std::optional<GuardExpr> guard = f->guard;
      if (!internal) actions.push_back({ActionKind::Arm, f->id, guard});
      const BpmnElement* te = model_.find(t);
      bool timer_gated = te && te->dimension == EventDimension::Timer;
      if (f->kind == FlowKind::Sequence && !timer_gated)
        actions.push_back({ActionKind::EnqueueEvent, f->id, guard});
      // Message flows and timer-gated flows wait for the API / injected event.
    }
    return actions;
  }

  FsmTransition make_transition(const std::string& from, const std::string& to, const Flow& on,
                                const std::string& vertex) {
    FsmTransition t;
    t.from = from;
    t.to = to;
    t.on_flow = on.id;
    t.vertex = vertex;
    t.actions = vertex_actions(vertex);
    if (on.kind == FlowKind::Message)
      t.actions.push_back({ActionKind::Respond, vertex, std::nullopt});
    return t;
  }

  // All flows that can deliver the region's entry token.
  std::vector<const Flow*> entry_flows() {
    std::vector<const Flow*> in;
    for (const auto& f : model_.flows)
      if (f.target == view_.entry_anchor && !sub_.members.count(f.source)) in.push_back(&f);
    return in;
  }

  std::vector<std::string> chain_from(const std::string& head) {
    std::vector<std::string> chain;
    std::string v = head;
    while (true) {
      chain.push_back(v);
      if (v == view_.exit_anchor) break;
      auto succ = dag_.successors(v);
      std::string next;
      for (const auto& s : succ)
        if (sub_.members.count(s)) next = s;
      if (next.empty()) break; // internal terminal (END inside the region)
      v = next;
    }
    return chain;
  }

  void append_chain_states(Fsm& fsm, const std::string& first_state,
                           const std::vector<std::string>& chain, bool include_head_transition,
                           const Flow* head_flow) {
    std::string prev = first_state;
    for (size_t i = 0; i < chain.size(); ++i) {
      const std::string& v = chain[i];
      std::string sid = "at:" + v;
      FsmState st;
      st.id = sid;
      st.vertex = v;
      bool last = (i + 1 == chain.size());
      bool terminal = last && (v == view_.exit_anchor || dag_.vertex(v).out_degree == 0);
      st.kind = terminal ? StateKind::Terminal : StateKind::Activity;
      auto bind = model_.task_bindings.find(v);
      if (bind != model_.task_bindings.end()) st.task = bind->second;
      fsm.states.push_back(st);

      if (i == 0 && !include_head_transition) {
        prev = sid;
        continue;
      }
      const Flow* on = nullptr;
      if (i == 0) {
        on = head_flow;
      } else {
        on = flow_between(model_, chain[i - 1], v);
      }
      if (!on) fail(Errc::NotLsi, "missing flow into " + v);
      fsm.transitions.push_back(make_transition(prev, sid, *on, v));
      prev = sid;
    }
  }

  Fsm build_plain() {
    Fsm fsm;
    fsm.id = id_;
    fsm.root_state = "idle";
    fsm.states.push_back({"idle", StateKind::Root, std::nullopt, std::nullopt});

    auto chain = chain_from(view_.entry_anchor);
    append_chain_states(fsm, "idle", chain, false, nullptr);
    // Root transitions: one per external entry flow (genesis for the start region).
    std::string first_state = "at:" + chain.front();
    auto ins = entry_flows();
    if (ins.empty()) {
      Flow genesis{kGenesisFlow, FlowKind::Sequence, "", view_.entry_anchor, std::nullopt,
                   std::nullopt};
      fsm.transitions.push_back(make_transition("idle", first_state, genesis, chain.front()));
    } else {
      for (const Flow* f : ins)
        fsm.transitions.push_back(make_transition("idle", first_state, *f, chain.front()));
    }
    return fsm;
  }

  struct Branch {
    std::string flow_id;
    const Flow* edge;
    std::vector<std::string> chain; // may be empty when the fork edge reaches the exit directly
    GuardExpr guard;
  };

  std::vector<Branch> branches() {
    std::vector<Branch> out;
    for (const auto& t : dag_.successors(view_.entry_anchor)) {
      const Flow* f = flow_between(model_, view_.entry_anchor, t);
      if (!f) fail(Errc::NotLsi, "no flow backing fork edge to " + t);
      if (!f->guard) fail(Errc::GuardMissing, "fork edge " + f->id + " has no guard");
      Branch b;
      b.flow_id = f->id;
      b.edge = f;
      b.guard = *f->guard;
      if (t != view_.exit_anchor && sub_.members.count(t)) {
        for (const auto& v : chain_from(t))
          if (v != view_.exit_anchor) b.chain.push_back(v);
      }
      out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(),
              [](const Branch& a, const Branch& b) { return a.flow_id < b.flow_id; });
    return out;
  }

  // Exit consumption transitions shared by all paths of the exclusive FSM and
  // by the control FSM of the inclusive topology.
  void add_exit_transition(Fsm& fsm, const std::string& from, const std::string& to,
                           const std::string& tail) {
    const Flow* on = flow_between(model_, tail, view_.exit_anchor);
    if (!on) fail(Errc::NotLsi, "missing flow " + tail + "->" + view_.exit_anchor);
    fsm.transitions.push_back(make_transition(from, to, *on, view_.exit_anchor));
  }

  Fsm build_exclusive(std::vector<StreamGuard>& stream_guards) {
    Fsm fsm;
    fsm.id = id_;
    fsm.root_state = "idle";
    fsm.states.push_back({"idle", StateKind::Root, std::nullopt, std::nullopt});

    auto brs = branches();
    for (const auto& b : brs) stream_guards.push_back({b.flow_id, b.guard.text()});

    // Balanced binary dispatch over the guards, built left-to-right in
    // outgoing-edge order.
    struct Node {
      size_t lo, hi;
      std::string state;
    };
    Flow dispatch{dispatch_flow(id_), FlowKind::Sequence, "", "", std::nullopt, std::nullopt};
    std::vector<Node> worklist;
    std::string top_state = "decide:0:" + std::to_string(brs.size());
    fsm.states.push_back({top_state, StateKind::Dispatch, std::nullopt, std::nullopt});
    worklist.push_back({0, brs.size(), top_state});

    auto range_guard = [&](size_t lo, size_t hi) {
      GuardExpr g = brs[lo].guard;
      for (size_t i = lo + 1; i < hi; ++i) {
        GuardExpr node;
        std::string text = "(" + g.text() + ") or (" + brs[i].guard.text() + ")";
        node = GuardExpr::parse(text);
        g = node;
      }
      return g;
    };

    auto sel_state = [&](size_t b) { return "sel:" + brs[b].flow_id; };

    while (!worklist.empty()) {
      Node n = worklist.back();
      worklist.pop_back();
      size_t size = n.hi - n.lo;
      size_t mid = n.lo + (size + 1) / 2;
      auto child = [&](size_t lo, size_t hi) -> std::string {
        if (hi - lo == 1) {
          std::string s = sel_state(lo);
          fsm.states.push_back({s, StateKind::Dispatch, std::nullopt, std::nullopt});
          return s;
        }
        std::string s = "decide:" + std::to_string(lo) + ":" + std::to_string(hi);
        fsm.states.push_back({s, StateKind::Dispatch, std::nullopt, std::nullopt});
        worklist.push_back({lo, hi, s});
        return s;
      };
      std::string left = child(n.lo, mid);
      std::string right = child(mid, n.hi);

      FsmTransition tl{n.state, left, dispatch.id, std::nullopt, range_guard(n.lo, mid), {}};
      FsmTransition tr{n.state, right, dispatch.id, std::nullopt, range_guard(mid, n.hi), {}};
      // Keep searching until a selection state is reached.
      if (left.rfind("decide:", 0) == 0)
        tl.actions.push_back({ActionKind::EnqueueEvent, dispatch.id, std::nullopt});
      if (right.rfind("decide:", 0) == 0)
        tr.actions.push_back({ActionKind::EnqueueEvent, dispatch.id, std::nullopt});
      fsm.transitions.push_back(std::move(tl));
      fsm.transitions.push_back(std::move(tr));
    }

    // Selection states trigger the chosen branch edge.
    for (size_t b = 0; b < brs.size(); ++b) {
      for (auto& t : fsm.transitions) {
        if (t.to != sel_state(b)) continue;
        if (brs[b].edge->kind == FlowKind::Sequence) {
          const BpmnElement* te = model_.find(brs[b].edge->target);
          if (!te || te->dimension != EventDimension::Timer)
            t.actions.push_back({ActionKind::EnqueueEvent, brs[b].flow_id, std::nullopt});
        }
      }
    }

    // Shared exit state.
    std::string exit_state = "at:" + view_.exit_anchor;
    FsmState ex;
    ex.id = exit_state;
    ex.vertex = view_.exit_anchor;
    ex.kind = StateKind::Terminal;
    fsm.states.push_back(ex);

    // Branch chains.
    for (size_t b = 0; b < brs.size(); ++b) {
      const Branch& br = brs[b];
      if (br.chain.empty()) {
        // Fork edge reaches the exit directly.
        fsm.transitions.push_back(
            make_transition(sel_state(b), exit_state, *br.edge, view_.exit_anchor));
        continue;
      }
      append_chain_states(fsm, sel_state(b), br.chain, true, br.edge);
      const std::string& tail = br.chain.back();
      bool tail_terminal = dag_.vertex(tail).out_degree == 0;
      if (!tail_terminal) add_exit_transition(fsm, "at:" + tail, exit_state, tail);
    }

    // Root transition: consume the entry token, then start the dispatch walk.
    auto ins = entry_flows();
    for (const Flow* f : ins) {
      FsmTransition t = make_transition("idle", top_state, *f, view_.entry_anchor);
      t.actions.push_back({ActionKind::EnqueueEvent, dispatch.id, std::nullopt});
      fsm.transitions.push_back(std::move(t));
    }
    if (ins.empty()) fail(Errc::NotLsi, "exclusive region entry has no incoming flow");
    return fsm;
  }

  void build_inclusive(DeFsmSubmodel& out) {
    auto brs = branches();
    for (const auto& b : brs) out.stream_guards.push_back({b.flow_id, b.guard.text()});

    Fsm ctl;
    ctl.id = id_ + "/ctl";
    ctl.root_state = "idle";
    ctl.states.push_back({"idle", StateKind::Root, std::nullopt, std::nullopt});
    ctl.states.push_back({"dispatched", StateKind::Dispatch, std::nullopt, std::nullopt});
    FsmState done;
    done.id = "at:" + view_.exit_anchor;
    done.vertex = view_.exit_anchor;
    done.kind = StateKind::Terminal;
    ctl.states.push_back(done);

    // Entry consumption: evaluate all guards, create a DE for each enabled
    // stream, arm its FSM.
    for (const Flow* f : entry_flows()) {
      FsmTransition t = make_transition("idle", "dispatched", *f, view_.entry_anchor);
      for (const auto& b : brs) {
        t.actions.push_back({ActionKind::Arm, b.flow_id, b.guard});
        if (b.edge->kind == FlowKind::Sequence) {
          const BpmnElement* te = model_.find(b.edge->target);
          if (!te || te->dimension != EventDimension::Timer)
            t.actions.push_back({ActionKind::EnqueueEvent, b.flow_id, b.guard});
        }
      }
      ctl.transitions.push_back(std::move(t));
    }

    // The first stream to reach the exit fires it; later arrivals are
    // absorbed by the monitor.
    for (const auto& p : dag_.predecessors(view_.exit_anchor))
      if (sub_.members.count(p) || p == view_.entry_anchor)
        add_exit_transition(ctl, "dispatched", "at:" + view_.exit_anchor, p);

    out.fsms.push_back(std::move(ctl));

    // One concurrent FSM per outgoing stream with at least one flow object.
    int k = 0;
    for (const auto& b : brs) {
      ++k;
      if (b.chain.empty()) continue;
      Fsm sf;
      sf.id = id_ + "/s" + std::to_string(k);
      sf.root_state = "idle";
      sf.states.push_back({"idle", StateKind::Root, std::nullopt, std::nullopt});
      append_chain_states(sf, "idle", b.chain, true, b.edge);
      // Tail state is terminal for the stream: its outgoing flow targets the
      // exit owned by the control FSM.
      sf.states.back().kind = StateKind::Terminal;
      out.fsms.push_back(std::move(sf));
    }
  }

  const SeseSubgraph& sub_;
  const Dag& dag_;
  const BpmnModel& model_;
  std::string id_;
  RegionView view_;
};

} // namespace

DeFsmSubmodel build_submodel(const SeseSubgraph& sub, const Dag& dag, const BpmnModel& model,
                             const std::string& id) {
  for (const auto& m : sub.members) {
    const DagVertex& v = dag.vertex(m);
    RegionView view = region_view(sub, dag);
    if (m != view.entry_anchor && m != view.exit_anchor &&
        (v.in_degree != 1 || v.out_degree != 1))
      fail(Errc::NotLsi, "interior vertex " + m + " violates the LSI degree requirement");
  }
  return SubmodelBuilder(sub, dag, model, id).build();
}

DeHsmModel assemble_dehsm(const LsiDecomposition& decomp, std::vector<DeFsmSubmodel> submodels,
                          const Dag& dag) {
  if (decomp.subgraphs.size() != submodels.size())
    fail(Errc::OrphanSubmodel, "expected " + std::to_string(decomp.subgraphs.size()) +
                                   " submodels, got " + std::to_string(submodels.size()));
  std::map<std::string, std::string> submodel_of; // vertex -> submodel id
  for (const auto& sg : decomp.subgraphs) {
    const DeFsmSubmodel* owner = nullptr;
    for (const auto& m : submodels)
      if (sg.members.count(m.entry_vertex)) owner = &m;
    if (!owner) fail(Errc::OrphanSubmodel, "no submodel for a decomposition region");
    for (const auto& v : sg.members) submodel_of[v] = owner->id;
  }

  DeHsmModel model;
  model.submodels = std::move(submodels);
  for (const auto& [s, t] : decomp.interconnect) {
    InterconnectEdge e;
    e.from_submodel = submodel_of.at(s);
    e.to_submodel = submodel_of.at(t);
    e.flow = s + "->" + t;
    model.interconnect.push_back(e);
  }
  model.start_submodel = submodel_of.at(dag.source());

  // Zero-delay semantics require a loop-free interconnect.
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& m : model.submodels) indeg[m.id] = 0;
  for (const auto& e : model.interconnect) {
    ++indeg[e.to_submodel];
    adj[e.from_submodel].push_back(e.to_submodel);
  }
  std::vector<std::string> ready;
  for (const auto& [k, v] : indeg)
    if (v == 0) ready.push_back(k);
  size_t seen = 0;
  while (!ready.empty()) {
    std::string v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& n : adj[v])
      if (--indeg[n] == 0) ready.push_back(n);
  }
  if (seen != model.submodels.size())
    fail(Errc::InterconnectLoop, "submodel interconnect contains a cycle");
  return model;
}

} // namespace bpcc
