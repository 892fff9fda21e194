#pragma once

#include <json.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace bpcc {

// Modeler-supplied facts the BPMN XML alone does not carry: gateway guards,
// payload schemas, boundary label pairing and task script bindings.
// Loaded from a JSON file keyed by element/flow id.
struct AnnotationConfig {
  std::map<std::string, std::string> guards;              // flow id -> guard text
  std::map<std::string, nlohmann::json> payload_schemas;  // flow id -> {field: type}
  std::map<std::string, std::string> boundary_throws;     // label -> throwing element id
  std::set<std::string> boundary_begins;                  // boundary events that throw on activity start
  std::map<std::string, std::string> task_scripts;        // task id -> script ref

  static AnnotationConfig from_json(const nlohmann::json& j);
  static AnnotationConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

} // namespace bpcc
