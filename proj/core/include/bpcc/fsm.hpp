#pragma once

#include "bpcc/bpmn.hpp"
#include "bpcc/dag.hpp"
#include "bpcc/sese.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bpcc {

enum class StateKind { Root, Dispatch, Activity, Terminal };

struct FsmState {
  std::string id;
  StateKind kind = StateKind::Activity;
  std::optional<std::string> vertex; // consumed flow object, when the state represents one
  std::optional<std::string> task;   // task binding ref
};

enum class ActionKind {
  InvokeTask,   // target = task element id
  EnqueueEvent, // target = flow id (internal, zero-delay + 1)
  Respond,      // reply to the API caller with the transition payload
  RaiseSignal,  // target = signal name, delivered to the instance mailbox
  InvokeMethod, // target = method id (cross-chain via the bridge)
  Arm,          // target = flow id; readies the FSM that consumes the flow
};

struct OutputAction {
  ActionKind kind;
  std::string target;
  std::optional<GuardExpr> guard; // only honored when enabled at run time
};

struct FsmTransition {
  std::string from;
  std::string to;
  std::string on_flow;                 // trigger: arrival of this flow's token
  std::optional<std::string> vertex;   // flow object consumed by the transition
  std::optional<GuardExpr> guard;
  std::vector<OutputAction> actions;
};

struct Fsm {
  std::string id;
  std::string root_state;
  std::vector<FsmState> states;
  std::vector<FsmTransition> transitions;

  const FsmState* state(const std::string& id) const;
  nlohmann::json to_json() const;
  static Fsm from_json(const nlohmann::json& j);
};

enum class Topology { Plain, Exclusive, Inclusive };

const char* topology_name(Topology t);

struct StreamGuard {
  std::string flow;    // outgoing edge of the entry gateway
  std::string guard;   // guard text
};

struct DeFsmSubmodel {
  std::string id;           // region name (S1, S2, ...)
  std::string subgraph_ref; // entry anchor vertex of the region
  Topology topology = Topology::Plain;
  std::vector<Fsm> fsms;    // primary FSM first (control FSM for inclusive)
  std::vector<StreamGuard> stream_guards; // exclusive/inclusive entry guards
  std::string entry_vertex;
  std::string exit_vertex;

  const Fsm& primary() const { return fsms.front(); }
  nlohmann::json to_json() const;
  static DeFsmSubmodel from_json(const nlohmann::json& j);
};

struct InterconnectEdge {
  std::string from_submodel;
  std::string to_submodel;
  std::string flow;
};

struct DeHsmModel {
  std::vector<DeFsmSubmodel> submodels;
  std::vector<InterconnectEdge> interconnect;
  std::string start_submodel;

  const DeFsmSubmodel* submodel(const std::string& id) const;
  nlohmann::json to_json() const;
  static DeHsmModel from_json(const nlohmann::json& j);
  std::string dot() const; // one cluster per submodel
};

// Flow id used to kick off the start submodel when an instance boots.
inline const char* kGenesisFlow = "__genesis__";
// Internal flow family driving exclusive dispatch trees.
std::string dispatch_flow(const std::string& submodel_id);

// Builds the DE-FSM sub-model for one LSI region. Classification is by entry
// node: plain chain, exclusive fork (single FSM with a balanced binary
// dispatch prefix over the guards), or inclusive fork (control FSM plus one
// concurrent FSM per outgoing stream).
DeFsmSubmodel build_submodel(const SeseSubgraph& sub, const Dag& dag, const BpmnModel& model,
                             const std::string& id);

// Wires sub-models along the decomposition interconnect, identifies the start
// submodel and verifies loop freedom.
DeHsmModel assemble_dehsm(const LsiDecomposition& decomp, std::vector<DeFsmSubmodel> submodels,
                          const Dag& dag);

} // namespace bpcc
