#include "bpcc/tasks.hpp"

#include "bpcc/errors.hpp"

#include <sstream>

namespace bpcc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace

TaskScript parse_task_script(const std::string& ref) {
  TaskScript script;
  for (const auto& op : split(ref, ';')) {
    if (op == "identity") continue;
    auto colon = op.find(':');
    if (colon == std::string::npos)
      fail(Errc::ConfigInvalid, "task script op '" + op + "' has no argument");
    std::string verb = op.substr(0, colon);
    std::string arg = op.substr(colon + 1);
    if (verb == "read") {
      for (const auto& k : split(arg, ',')) script.reads.push_back(k);
    } else if (verb == "write") {
      for (const auto& k : split(arg, ',')) script.writes.push_back(k);
    } else if (verb == "annotate") {
      auto eq = arg.find('=');
      if (eq == std::string::npos)
        fail(Errc::ConfigInvalid, "annotate op needs key=value, got '" + arg + "'");
      script.annotations.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
    } else {
      fail(Errc::ConfigInvalid, "unknown task script op '" + verb + "'");
    }
  }
  return script;
}

Payload apply_task_script(const TaskScript& script, Payload payload) {
  if (!payload.is_object()) payload = Payload::object();
  for (const auto& [k, v] : script.annotations) payload[k] = v;
  return payload;
}

} // namespace bpcc
