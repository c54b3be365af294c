#ifndef MELLA_SCRIPT_SESSION_HPP
#define MELLA_SCRIPT_SESSION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mella/bridge/prover.hpp"
#include "mella/kernel/check.hpp"
#include "mella/script/command.hpp"

namespace mella::script {

struct OpenTheorem {
  std::string name;
  k::Term type;
  k::Term proof;        // with Meta nodes for the open holes
  k::CheckState state;  // one continuation per hole, oldest first
};

struct SessionState {
  k::NamedContext named;
  std::optional<OpenTheorem> open;
  /// The most recently finished theorem, for `describe proof` after qed.
  std::optional<std::pair<std::string, k::Term>> last;
  std::vector<std::string> transcript;  // successful commands

  friend bool operator==(const SessionState& a, const SessionState& b);
};

/// Gamma holds the equational basis, nothing is open.
SessionState initial_state();

struct Response {
  Response() = default;
  Response(bool ok, std::string output, std::optional<k::SourceLoc> loc = std::nullopt)
      : ok(ok), output(std::move(output)), loc(loc) {}

  bool ok = true;
  std::string output;
  /// Where a failure was detected: the offending term position, else the command.
  std::optional<k::SourceLoc> loc;
};

struct SessionConfig {
  bridge::ProverConfig prover;
};

/// Runs one command. On failure the returned state equals `state`. `undo`
/// is handled by Session and rejected here.
std::pair<SessionState, Response> execute(const Command& cmd, const SessionState& state,
                                          const SessionConfig& config = {});

/// Human-readable list of open holes.
std::string render_goals(const SessionState& state);

/// A session with an undo stack of full snapshots.
class Session {
 public:
  explicit Session(SessionConfig config = {}) : config_(std::move(config)), state_(initial_state()) {}

  Response execute(const Command& cmd);
  /// Parses and runs a script; stops at the first failing command. A parse
  /// error yields a single failed response.
  std::vector<Response> run(const std::string& text);

  const SessionState& state() const { return state_; }
  std::size_t undo_depth() const { return history_.size(); }
  SessionConfig& config() { return config_; }

 private:
  SessionConfig config_;
  SessionState state_;
  std::vector<SessionState> history_;
};

}  // namespace mella::script

#endif
