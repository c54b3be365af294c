#include "mella/cli/protocol.hpp"

#include <chrono>

#include "mella/kernel/pretty.hpp"
#include "mella/script/command.hpp"
#include "mella/script/syntax.hpp"

namespace mella::cli {

namespace k = kernel;

namespace {

json context_view(const k::UnnamedContext& delta, const k::NamedContext& gamma) {
  json out = json::array();
  k::UnnamedContext prefix;
  for (std::size_t i = delta.size(); i-- > 0;) {
    const auto& e = delta.at(i);
    out.push_back({{"name", e.tag.name}, {"type", k::pretty(e.type, prefix.names(), &gamma)}});
    prefix.push(e.tag, e.type);
  }
  return out;
}

json location(const k::SourceLoc& loc) { return {{"line", loc.line}, {"column", loc.column}}; }

}  // namespace

json state_view(const script::SessionState& state, std::size_t tail) {
  json gamma = json::array();
  for (const auto& e : state.named.entries()) {
    json entry{{"name", e.name}, {"type", k::pretty(e.binding.type, {}, &state.named)}};
    if (e.binding.definiens) entry["definiens"] = k::pretty(*e.binding.definiens, {}, &state.named);
    gamma.push_back(std::move(entry));
  }
  json view{{"gamma", std::move(gamma)}, {"theorem", nullptr}, {"metas", json::array()}};
  if (state.open) {
    const auto& o = *state.open;
    view["theorem"] = {{"name", o.name},
                       {"goal", k::pretty(o.type, {}, &state.named)},
                       {"proof", k::pretty(o.proof, {}, &state.named)}};
    for (const auto& m : o.state.metas)
      view["metas"].push_back({{"id", m.meta_id},
                               {"type", k::pretty(m.expected, m.captured_unnamed.names(), &state.named)},
                               {"context", context_view(m.captured_unnamed, state.named)}});
  }
  const auto& t = state.transcript;
  std::size_t from = t.size() > tail ? t.size() - tail : 0;
  view["transcript"] = json(std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(from), t.end()));
  return view;
}

ProtocolSession::ProtocolSession(script::SessionConfig config) : session_(std::move(config)) {
  session_.config().prover.stop = &stop_;
}

json ProtocolSession::ok() const {
  return {{"version", kProtocolVersion}, {"kind", "ok"}, {"state", state_view(session_.state())}};
}

json ProtocolSession::error(const std::string& kind, const std::string& message,
                            std::optional<k::SourceLoc> loc) const {
  std::string text = message;
  while (!text.empty() && text.back() == '\n') text.pop_back();
  json err{{"kind", kind}, {"message", text}, {"location", loc ? location(*loc) : json(nullptr)}};
  return {{"version", kProtocolVersion}, {"kind", "error"}, {"error", std::move(err)},
          {"state", state_view(session_.state())}};
}

json ProtocolSession::handle(const std::string& line, const Emit& emit) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::exception& e) {
    return error("protocol", std::string("malformed JSON: ") + e.what());
  }
  if (!req.is_object()) return error("protocol", "request must be an object");
  if (!req.contains("version") || req["version"] != kProtocolVersion)
    return error("protocol", "unsupported or missing version");
  if (!req.contains("kind") || !req["kind"].is_string()) return error("protocol", "missing kind");
  const std::string kind = req["kind"];

  auto text_field = [&](const char* name) -> std::optional<std::string> {
    if (!req.contains(name) || !req[name].is_string()) return std::nullopt;
    return req[name].get<std::string>();
  };

  stop_ = false;
  using clock = std::chrono::steady_clock;
  auto last = clock::now() - std::chrono::seconds(1);
  session_.config().prover.progress = [&](const rewriting::Progress& p) {
    if (!emit || stop_) return;
    auto now = clock::now();
    if (now - last < std::chrono::milliseconds(250)) return;
    last = now;
    json msg{{"version", kProtocolVersion}, {"kind", "proverProgress"}, {"elapsed", p.elapsed},
             {"equations", p.equations}};
    if (!emit(msg)) stop_ = true;
  };

  // Runs commands in order, stopping at the first failure.
  auto run = [&](const std::vector<script::Command>& commands) -> json {
    for (const auto& c : commands) {
      script::Response r = session_.execute(c);
      if (!r.ok) return error("command", r.output, r.loc);
    }
    return ok();
  };
  auto parse = [&](const std::string& text, std::vector<script::Command>& out) -> std::optional<json> {
    try {
      out = script::parse_outer(text);
      return std::nullopt;
    } catch (const script::SyntaxError& e) {
      return error("syntax", e.what(), k::SourceLoc{e.line, e.column});
    }
  };

  json result;
  std::vector<script::Command> commands;
  if (kind == "loadScript") {
    auto text = text_field("text");
    if (!text) return error("protocol", "loadScript needs a string field 'text'");
    if (auto bad = parse(*text, commands)) return *bad;
    result = run(commands);
  } else if (kind == "execute") {
    auto text = text_field("command");
    if (!text) return error("protocol", "execute needs a string field 'command'");
    if (auto bad = parse(*text, commands)) return *bad;
    if (commands.size() != 1) return error("protocol", "execute takes exactly one command");
    result = run(commands);
  } else if (kind == "undo") {
    script::Command c;
    c.kind = script::Command::Kind::Undo;
    result = run({c});
  } else if (kind == "state") {
    result = ok();
  } else if (kind == "shutdown") {
    shutdown_ = true;
    result = ok();
  } else {
    result = error("protocol", "unknown request kind '" + kind + "'");
  }
  session_.config().prover.progress = nullptr;
  return result;
}

}  // namespace mella::cli
