#pragma once

#include "bpcc/annotations.hpp"
#include "bpcc/guard.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bpcc {

enum class ElementKind {
  StartEvent,
  EndEvent,
  IntermediateEvent,
  Task,
  Subprocess,
  ExclusiveGateway,
  InclusiveGateway,
  ParallelGateway,
};

enum class EventDimension { None, Message, Timer, Conditional, Signal, Terminate };

const char* element_kind_name(ElementKind k);
const char* event_dimension_name(EventDimension d);

struct Boundary {
  std::string attached_to;
  bool interrupting = true;
  std::string label;
};

struct BpmnElement {
  std::string id;
  std::string name;
  ElementKind kind = ElementKind::Task;
  std::string pool;
  std::optional<std::string> lane;
  EventDimension dimension = EventDimension::None;
  std::optional<Boundary> boundary;

  bool is_gateway() const {
    return kind == ElementKind::ExclusiveGateway || kind == ElementKind::InclusiveGateway ||
           kind == ElementKind::ParallelGateway;
  }
};

enum class FlowKind { Sequence, Message };

struct Flow {
  std::string id;
  FlowKind kind = FlowKind::Sequence;
  std::string source;
  std::string target;
  std::optional<GuardExpr> guard;
  std::optional<std::string> payload_schema; // key into BpmnModel::payload_schemas
};

struct BpmnModel {
  std::vector<BpmnElement> elements;
  std::vector<Flow> flows;
  std::vector<std::string> actors;
  std::map<std::string, std::string> task_bindings;        // task id -> script ref
  std::map<std::string, nlohmann::json> payload_schemas;   // schema ref -> schema object

  const BpmnElement* find(const std::string& id) const;
  const BpmnElement& at(const std::string& id) const;
  const Flow* find_flow(const std::string& id) const;
  std::vector<const Flow*> out_flows(const std::string& id) const;
  std::vector<const Flow*> in_flows(const std::string& id) const;

  // Structural checks: flow endpoints resolve, message flows cross pools,
  // sequence flows stay inside one pool.
  void validate() const;

  nlohmann::json to_json() const;
  static BpmnModel from_json(const nlohmann::json& j);
};

BpmnModel parse_bpmn(const std::string& xml_text);
BpmnModel parse_bpmn_file(const std::string& path);

BpmnModel normalize(const BpmnModel& model, const AnnotationConfig& annotations);

} // namespace bpcc
