#include "bpcc/annotations.hpp"

#include "bpcc/errors.hpp"

#include <fstream>

namespace bpcc {

AnnotationConfig AnnotationConfig::from_json(const nlohmann::json& j) {
  AnnotationConfig cfg;
  if (j.contains("guards"))
    for (auto& [k, v] : j.at("guards").items()) cfg.guards[k] = v.get<std::string>();
  if (j.contains("payload_schemas"))
    for (auto& [k, v] : j.at("payload_schemas").items()) cfg.payload_schemas[k] = v;
  if (j.contains("boundary_throws"))
    for (auto& [k, v] : j.at("boundary_throws").items()) cfg.boundary_throws[k] = v.get<std::string>();
  if (j.contains("boundary_begins"))
    for (auto& v : j.at("boundary_begins")) cfg.boundary_begins.insert(v.get<std::string>());
  if (j.contains("task_scripts"))
    for (auto& [k, v] : j.at("task_scripts").items()) cfg.task_scripts[k] = v.get<std::string>();
  return cfg;
}

AnnotationConfig AnnotationConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigInvalid, "cannot open annotation file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigInvalid, "annotation file " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json AnnotationConfig::to_json() const {
  nlohmann::json j;
  j["guards"] = guards;
  j["payload_schemas"] = payload_schemas;
  j["boundary_throws"] = boundary_throws;
  j["boundary_begins"] = boundary_begins;
  j["task_scripts"] = task_scripts;
  return j;
}

} // namespace bpcc
