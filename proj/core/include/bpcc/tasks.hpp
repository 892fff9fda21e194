#pragma once

#include "bpcc/guard.hpp"

#include <string>
#include <vector>

namespace bpcc {

// Task scripts are named payload transforms with declared ledger access.
// A script ref is a semicolon-separated op list, e.g.
//   "read:inventory;annotate:stage=demand"
// Ops:
//   identity              no-op (default binding)
//   read:<k1,k2,...>      read the listed ledger keys before transforming
//   write:<k1,k2,...>     write the payload under the listed keys as well
//   annotate:<key>=<val>  set a string field on the payload
struct TaskScript {
  std::vector<std::string> reads;
  std::vector<std::string> writes;
  std::vector<std::pair<std::string, std::string>> annotations;
};

TaskScript parse_task_script(const std::string& ref);

// Pure part of the transform; ledger reads/writes are interpreted by the
// runtime around this call.
Payload apply_task_script(const TaskScript& script, Payload payload);

} // namespace bpcc
