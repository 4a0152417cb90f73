#pragma once

// Backend-agnostic decision interface for the three prompting scopes.
//
// Wire protocol (POST {base_url}/decide, application/json):
//   request  {"protocol_version":1,"method":...,"round":n,"agent_id":"m3",
//             "internal":{"hungry":..,"hours_since_meal":..},
//             "environment":{"edible":..,"regrowing":..}|null,
//             "agents":[{"id":"m1","mood":"unhappy"}]|null,
//             "encountered":"m1"|null,"available_actions":[...]}
//   response {"decision":{"actions":[{"type":"greet","target":"m1"},{"type":"eat"}]}}
//            or {"request_info":"environment"|"agents"}

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qforma/core_model.hpp"
#include "qforma/json.hpp"

namespace qforma::decision {

inline constexpr int kProtocolVersion = 1;
inline constexpr int kDefaultMaxRounds = 3;

enum class InfoRequest { Environment, Agents };
std::string_view to_string(InfoRequest r);

struct DecisionRequest {
  int protocol_version = kProtocolVersion;
  Scope method = Scope::Internal;
  int round = 1;
  AgentId agent_id = 0;
  ContextSnapshot context;
  std::vector<std::string> available_actions;
};

struct DecisionResponse {
  std::variant<std::vector<TaskAction>, InfoRequest> value;

  static DecisionResponse act(std::vector<TaskAction> actions) { return {std::move(actions)}; }
  static DecisionResponse ask(InfoRequest what) { return {what}; }

  bool is_actions() const { return std::holds_alternative<std::vector<TaskAction>>(value); }
  const std::vector<TaskAction>& actions() const { return std::get<std::vector<TaskAction>>(value); }
  InfoRequest info() const { return std::get<InfoRequest>(value); }
};

/// Action names a backend may answer with under each scope.
std::vector<std::string> available_actions(Scope scope);

std::string wire_agent_id(AgentId id);
/// Parses "m<digits>"; nullopt on anything else.
std::optional<AgentId> parse_wire_agent_id(std::string_view s);

Json to_wire(const DecisionRequest& req);
Json to_wire(const DecisionResponse& resp);
/// Throws BackendError on malformed or unknown content.
DecisionResponse response_from_wire(const Json& j);

DecisionResponse scripted_method1(const ContextSnapshot& ctx);
DecisionResponse scripted_method2(const ContextSnapshot& ctx);
DecisionResponse scripted_method3(const ContextSnapshot& ctx);
DecisionResponse scripted_for(Scope scope, const ContextSnapshot& ctx);

class DecisionBackend {
 public:
  virtual ~DecisionBackend() = default;
  /// Throws Error(BackendError) on transport or protocol failure.
  virtual DecisionResponse decide(const DecisionRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

class ScriptedBackend final : public DecisionBackend {
 public:
  DecisionResponse decide(const DecisionRequest& request) override;
  std::string_view name() const override { return "scripted"; }
};

class HttpBackend final : public DecisionBackend {
 public:
  /// `base_url` is "http://host[:port][/prefix]". Throws BackendStartup when it cannot be parsed.
  explicit HttpBackend(std::string base_url, std::chrono::milliseconds timeout = std::chrono::seconds(30));

  DecisionResponse decide(const DecisionRequest& request) override;
  std::string_view name() const override { return "http"; }

  const std::string& host_url() const { return host_url_; }
  const std::string& path() const { return path_; }

 private:
  std::string host_url_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

/// Supplies the parts of the context a backend may ask for.
struct ContextProvider {
  std::function<EnvView()> environment;
  std::function<AgentView()> agents;
};

using LogSink = std::function<void(Json)>;

struct LoopResult {
  std::vector<TaskAction> actions;
  int backend_calls = 0;
  int provider_calls = 0;
  bool fell_back = false;
};

struct LoopOptions {
  int max_rounds = kDefaultMaxRounds;
  LogSink prompt_log;  // one entry per backend exchange
  LogSink event_log;   // fallback and warning events
  Json log_tags;       // merged into every log entry (day, slot, ...)
};

/// Asks `backend` starting from the internal view only, answering info requests from
/// `provider` when the scope allows. Falls back to the scripted oracle after
/// `max_rounds` unanswered rounds or on any backend failure. Never returns an empty list.
LoopResult decide_loop(DecisionBackend& backend, Scope scope, AgentId agent, const ContextSnapshot& internal_ctx,
                       const ContextProvider& provider, const LoopOptions& options = {});

}  // namespace qforma::decision
