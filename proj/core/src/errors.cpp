#include "bpcc/errors.hpp"

namespace bpcc {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::XmlMalformed: return "XmlMalformed";
    case Errc::UnsupportedElement: return "UnsupportedElement";
    case Errc::DanglingFlow: return "DanglingFlow";
    case Errc::MissingAnnotation: return "MissingAnnotation";
    case Errc::UnmatchedBoundaryLabel: return "UnmatchedBoundaryLabel";
    case Errc::LoopingConstructUnsupported: return "LoopingConstructUnsupported";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NotADag: return "NotADag";
    case Errc::TheoremViolation: return "TheoremViolation";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotLsi: return "NotLsi";
    case Errc::GuardMissing: return "GuardMissing";
    case Errc::InterconnectLoop: return "InterconnectLoop";
    case Errc::OrphanSubmodel: return "OrphanSubmodel";
    case Errc::UnknownSubgraph: return "UnknownSubgraph";
    case Errc::IllegalNesting: return "IllegalNesting";
    case Errc::OverlappingSelections: return "OverlappingSelections";
    case Errc::IndependenceViolation: return "IndependenceViolation";
    case Errc::NoSuchSidechain: return "NoSuchSidechain";
    case Errc::MissingCalibrationEntry: return "MissingCalibrationEntry";
    case Errc::NoExecutionContext: return "NoExecutionContext";
    case Errc::NotFound: return "NotFound";
    case Errc::ExecutionFailed: return "ExecutionFailed";
    case Errc::HashMismatch: return "HashMismatch";
    case Errc::UnknownHash: return "UnknownHash";
    case Errc::ChainMissing: return "ChainMissing";
    case Errc::PackageCorrupt: return "PackageCorrupt";
    case Errc::UnknownCall: return "UnknownCall";
    case Errc::AccessDenied: return "AccessDenied";
    case Errc::NoEnabledBranch: return "NoEnabledBranch";
    case Errc::AmbiguousBranch: return "AmbiguousBranch";
    case Errc::GuardEvaluation: return "GuardEvaluation";
    case Errc::TxNotActive: return "TxNotActive";
    case Errc::BridgeFailure: return "BridgeFailure";
    case Errc::ParticipantUnresponsive: return "ParticipantUnresponsive";
    case Errc::MethodNotOnChain: return "MethodNotOnChain";
    case Errc::AttestationRejected: return "AttestationRejected";
  }
  return "UnknownError";
}

Error::Error(Errc code, std::string message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + std::move(message)), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

} // namespace bpcc
