#ifndef MELLA_CLI_PROTOCOL_HPP
#define MELLA_CLI_PROTOCOL_HPP

#include <atomic>
#include <functional>
#include <string>

#include <json.hpp>

#include "mella/script/session.hpp"

namespace mella::cli {

using json = nlohmann::ordered_json;

inline constexpr int kProtocolVersion = 1;

/// Gamma, the open theorem with its partial proof and holes, and the last
/// `tail` transcript entries.
json state_view(const script::SessionState& state, std::size_t tail = 10);

/// One client's session behind the line protocol:
///
///   {"version":1,"kind":"execute","command":"intro A."}
///   {"version":1,"kind":"ok","state":{...}}
///
/// Requests: loadScript(text), execute(command), undo, state, shutdown.
/// Responses: ok(state), error(error{kind,message,location}, state) and
/// proverProgress(elapsed, equations) before the terminal one.
class ProtocolSession {
 public:
  using Emit = std::function<bool(const json&)>;

  explicit ProtocolSession(script::SessionConfig config = {});

  /// Handles one request line and returns its terminal response. Progress
  /// goes to `emit`, at most four times a second; when `emit` fails the
  /// running search is cancelled.
  json handle(const std::string& line, const Emit& emit = {});

  bool shutdown_requested() const { return shutdown_; }
  /// Asks a running search to stop.
  void cancel() { stop_ = true; }
  const script::Session& session() const { return session_; }

 private:
  json ok() const;
  json error(const std::string& kind, const std::string& message,
             std::optional<kernel::SourceLoc> loc = std::nullopt) const;

  script::Session session_;
  std::atomic<bool> stop_{false};
  bool shutdown_ = false;
};

}  // namespace mella::cli

#endif
