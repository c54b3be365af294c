#ifndef MELLA_BRIDGE_PROVER_HPP
#define MELLA_BRIDGE_PROVER_HPP

#include <atomic>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "mella/bridge/reconstruct.hpp"

namespace mella::bridge {

struct ExternalProverError : std::runtime_error {
  enum class Kind { Spawn, Timeout, ExitStatus, Output };
  ExternalProverError(Kind kind, const std::string& message, std::string stderr_text = {});
  Kind kind;
  std::string stderr_text;
};

/// Writes the problem to a temporary file and runs `command --details <file>`,
/// killing it after `timeout` seconds. Returns standard output.
std::string run_external(const std::string& command, const ProblemFile& problem, double timeout);

/// The command named by MELLA_EXTERNAL_PROVER, if set and non-empty.
std::optional<std::string> external_prover_from_env();

struct ProverConfig {
  std::optional<std::string> external;  // bundled completion when empty
  ReconstructOptions reconstruct;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(const rw::Progress&)> progress;
};

enum class ProveStatus { Proved, Timeout, Unprovable, SearchError, ReconstructionFailed };
std::string_view to_string(ProveStatus s);

struct ProveReport {
  ProveStatus status = ProveStatus::SearchError;
  std::string prover;      // "bundled" or the external command
  std::string trace_text;  // detailed proof output
  std::optional<ParsedTrace> trace;
  std::optional<ReconstructionResult> result;
  rw::Statistics search;
  double search_seconds = 0;
  double reconstruct_seconds = 0;
  std::string message;
};

/// Serialise, search, parse the proof output and reconstruct it. Never throws
/// for prover or reconstruction failures; they end up in the report.
ProveReport prove(const Translation& tr, const ProverConfig& config = {});

}  // namespace mella::bridge

#endif
