#pragma once

#include "bpcc/dag.hpp"
#include "bpcc/fsm.hpp"
#include "bpcc/sese.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bpcc {

enum class WorkspaceMode { ScAll, Sc2m, Sc2s, Sc2sCrypto };

const char* workspace_mode_name(WorkspaceMode m);
WorkspaceMode workspace_mode_from_name(const std::string& s);

struct TxEntry {
  std::string id;           // subgraph name, e.g. "S5"
  std::string subgraph_ref; // same name; kept separate for clarity in JSON
  std::set<std::string> members;
  std::set<std::string> participants;
  WorkspaceMode mode = WorkspaceMode::ScAll;
  std::optional<std::string> sidechain;
  std::vector<std::string> children; // tx ids
};

struct TransactionPlan {
  std::vector<TxEntry> entries;    // parents precede their children
  std::vector<std::string> roots;

  const TxEntry* find(const std::string& id) const;
  nlohmann::json to_json() const;
  static TransactionPlan from_json(const nlohmann::json& j);
};

struct SelectionConfig {
  struct Sel {
    std::string subgraph;
    std::string mode = "sc-all";
    std::optional<std::string> sidechain;
    std::vector<Sel> children;
  };
  std::vector<Sel> selections;

  static SelectionConfig from_json(const nlohmann::json& j);
  static SelectionConfig load(const std::string& path);
};

// Validates a selection against the analysis lattice: children must be SESE
// subgraphs strictly contained in their parent, the selection forms a forest,
// and distinct roots may not share vertices.
TransactionPlan select_transactions(const Dag& dag, const AnalysisResult& analysis,
                                    const SelectionConfig& sel);

enum class PatternKind { BeginTx, EndTx, CacheRewrite, AccessCheck, TwoPcCoordinator, TwoPcParticipant };

const char* pattern_kind_name(PatternKind k);

struct Pattern {
  PatternKind kind;
  std::vector<std::string> args;
};

struct MethodDescriptor {
  std::string id;
  bool tx_owned = false;
  std::string owner;                 // actor name or tx id
  std::vector<std::string> fsm_ids;  // FSMs hosted by the method
  std::vector<Pattern> augmentations;
  std::string chain = "main";
  std::string contract = "c0";

  nlohmann::json to_json() const;
  static MethodDescriptor from_json(const nlohmann::json& j);
};

struct FlowRow {
  std::string id;
  std::string source, target;
  std::string source_pool, target_pool;
  FlowKind kind = FlowKind::Sequence;
  bool timer_gated = false;
  std::optional<std::string> payload_schema;
};

// The deployable artifact: interpreter tables plus routing and deployment
// information. Self-contained; the runtime needs nothing else.
struct ContractPackage {
  std::vector<MethodDescriptor> methods;
  DeHsmModel dehsm;
  std::map<std::string, FlowRow> flows;
  std::map<std::string, std::string> tasks;              // task id -> script ref
  std::map<std::string, std::string> api_map;            // message flow -> method id
  std::map<std::string, std::string> fsm_method;         // fsm id -> hosting method
  std::map<std::string, std::vector<std::string>> first_call_read_sets;
  TransactionPlan plan;
  std::string mainchain = "main";

  const MethodDescriptor* method(const std::string& id) const;
  nlohmann::json to_json() const;
  static ContractPackage from_json(const nlohmann::json& j);
};

ContractPackage generate_methods(const DeHsmModel& dehsm, const TransactionPlan& plan,
                                 const BpmnModel& model, const Dag& dag,
                                 const AnalysisResult& analysis);

struct SidechainTopology {
  std::string mainchain = "main";
  std::set<std::string> sidechains;
};

// Chain and contract assignment per workspace mode, plus the static read-set
// scan used to prime sidechain caches on first call.
void plan_deployment(ContractPackage& pkg, const SidechainTopology& topo);

} // namespace bpcc
