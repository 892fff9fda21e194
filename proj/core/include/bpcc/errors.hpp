#pragma once

#include <stdexcept>
#include <string>

namespace bpcc {

enum class Errc {
  // model / parsing
  XmlMalformed,
  UnsupportedElement,
  DanglingFlow,
  MissingAnnotation,
  UnmatchedBoundaryLabel,
  LoopingConstructUnsupported,
  CycleDetected,
  ConfigInvalid,
  // graph analysis
  NotNormalized,
  NotADag,
  TheoremViolation,
  TooLarge,
  // model building
  NotLsi,
  GuardMissing,
  InterconnectLoop,
  OrphanSubmodel,
  // contract generation
  UnknownSubgraph,
  IllegalNesting,
  OverlappingSelections,
  IndependenceViolation,
  NoSuchSidechain,
  MissingCalibrationEntry,
  // ledger
  NoExecutionContext,
  NotFound,
  ExecutionFailed,
  HashMismatch,
  UnknownHash,
  // runtime
  ChainMissing,
  PackageCorrupt,
  UnknownCall,
  AccessDenied,
  NoEnabledBranch,
  AmbiguousBranch,
  GuardEvaluation,
  TxNotActive,
  BridgeFailure,
  ParticipantUnresponsive,
  MethodNotOnChain,
  AttestationRejected,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message);
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace bpcc
