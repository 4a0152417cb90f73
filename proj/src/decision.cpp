#include "qforma/decision.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include "qforma/error.hpp"

namespace qforma::decision {

std::string_view to_string(InfoRequest r) { return r == InfoRequest::Environment ? "environment" : "agents"; }

std::vector<std::string> available_actions(Scope scope) {
  switch (scope) {
    case Scope::Internal: return {"eat", "idle"};
    case Scope::EnvironmentAware: return {"eat", "water", "idle"};
    case Scope::InterAgentAware: return {"eat", "water", "greet", "idle"};
  }
  return {"idle"};
}

std::string wire_agent_id(AgentId id) { return "m" + std::to_string(id); }

std::optional<AgentId> parse_wire_agent_id(std::string_view s) {
  if (s.size() < 2 || s.front() != 'm') return std::nullopt;
  AgentId id = 0;
  const auto* first = s.data() + 1;
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, id);
  if (ec != std::errc{} || ptr != last || id < 0) return std::nullopt;
  return id;
}

Json to_wire(const DecisionRequest& req) {
  Json j;
  j["protocol_version"] = req.protocol_version;
  j["method"] = to_string(req.method);
  j["round"] = req.round;
  j["agent_id"] = wire_agent_id(req.agent_id);
  j["internal"] = {{"hungry", req.context.internal.hungry},
                   {"hours_since_meal", req.context.internal.hours_since_meal}};
  if (req.context.environment) {
    j["environment"] = {{"edible", req.context.environment->edible_count},
                        {"regrowing", req.context.environment->regrowing_count}};
  } else {
    j["environment"] = nullptr;
  }
  if (req.context.agents) {
    Json others = Json::array();
    for (const auto& o : req.context.agents->others)
      others.push_back({{"id", wire_agent_id(o.id)}, {"mood", to_string(o.mood)}});
    j["agents"] = std::move(others);
    if (req.context.agents->encountered)
      j["encountered"] = wire_agent_id(*req.context.agents->encountered);
    else
      j["encountered"] = nullptr;
  } else {
    j["agents"] = nullptr;
    j["encountered"] = nullptr;
  }
  j["available_actions"] = req.available_actions;
  return j;
}

Json to_wire(const DecisionResponse& resp) {
  if (!resp.is_actions()) return {{"request_info", to_string(resp.info())}};
  Json actions = Json::array();
  for (const auto& a : resp.actions()) {
    Json item{{"type", action_name(a)}};
    if (const auto* g = std::get_if<action::Greet>(&a)) item["target"] = wire_agent_id(g->target);
    actions.push_back(std::move(item));
  }
  return {{"decision", {{"actions", std::move(actions)}}}};
}

namespace {

[[noreturn]] void bad_response(const std::string& why) { throw Error(ErrorKind::BackendError, why); }

TaskAction action_from_wire(const Json& item) {
  if (!item.is_object() || !item.contains("type") || !item["type"].is_string()) bad_response("action without a type");
  const auto type = item["type"].get<std::string>();
  if (type == "eat") return action::Eat{};
  if (type == "water") return action::Water{};
  if (type == "idle") return action::Idle{};
  if (type == "query_environment") return action::QueryEnvironment{};
  if (type == "query_agents") return action::QueryAgents{};
  if (type == "greet") {
    if (!item.contains("target") || !item["target"].is_string()) bad_response("greet without a target");
    auto id = parse_wire_agent_id(item["target"].get<std::string>());
    if (!id) bad_response("greet target is not an agent id");
    return action::Greet{*id};
  }
  bad_response("unknown action '" + type + "'");
}

}  // namespace

DecisionResponse response_from_wire(const Json& j) {
  if (!j.is_object()) bad_response("response is not a JSON object");
  const bool has_decision = j.contains("decision");
  const bool has_request = j.contains("request_info");
  if (has_decision == has_request) bad_response("response must carry exactly one of decision or request_info");

  if (has_request) {
    const auto& r = j["request_info"];
    if (r == "environment") return DecisionResponse::ask(InfoRequest::Environment);
    if (r == "agents") return DecisionResponse::ask(InfoRequest::Agents);
    bad_response("unknown request_info value");
  }
  const auto& d = j["decision"];
  if (!d.is_object() || !d.contains("actions") || !d["actions"].is_array()) bad_response("decision without actions");
  std::vector<TaskAction> actions;
  for (const auto& item : d["actions"]) actions.push_back(action_from_wire(item));
  if (actions.empty()) bad_response("decision with an empty action list");
  return DecisionResponse::act(std::move(actions));
}

DecisionResponse scripted_method1(const ContextSnapshot& ctx) {
  if (!ctx.internal.hungry) return DecisionResponse::act({action::Idle{}});
  return DecisionResponse::act({action::Eat{}});
}

DecisionResponse scripted_method2(const ContextSnapshot& ctx) {
  if (!ctx.environment) return DecisionResponse::ask(InfoRequest::Environment);
  if (ctx.environment->edible_count > 0) return DecisionResponse::act({action::Eat{}, action::Water{}});
  return DecisionResponse::act({action::Idle{}});
}

DecisionResponse scripted_method3(const ContextSnapshot& ctx) {
  if (!ctx.environment) return DecisionResponse::ask(InfoRequest::Environment);
  if (!ctx.agents) return DecisionResponse::ask(InfoRequest::Agents);
  if (!ctx.agents->encountered) return scripted_method2(ctx);
  const action::Greet greet{*ctx.agents->encountered};
  if (ctx.environment->edible_count > 0) return DecisionResponse::act({greet, action::Eat{}, action::Water{}});
  return DecisionResponse::act({greet, action::Idle{}});
}

DecisionResponse scripted_for(Scope scope, const ContextSnapshot& ctx) {
  switch (scope) {
    case Scope::Internal: return scripted_method1(ctx);
    case Scope::EnvironmentAware: return scripted_method2(ctx);
    case Scope::InterAgentAware: return scripted_method3(ctx);
  }
  return scripted_method1(ctx);
}

DecisionResponse ScriptedBackend::decide(const DecisionRequest& request) {
  return scripted_for(request.method, request.context);
}

HttpBackend::HttpBackend(std::string base_url, std::chrono::milliseconds timeout) : timeout_(timeout) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos || base_url.substr(0, scheme_end) != "http")
    throw Error(ErrorKind::BackendStartup, "backend url must start with http:// (got '" + base_url + "')");
  const auto path_start = base_url.find('/', scheme_end + 3);
  host_url_ = base_url.substr(0, path_start);
  if (host_url_.size() <= scheme_end + 3) throw Error(ErrorKind::BackendStartup, "backend url has no host");
  std::string prefix = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/decide";
}

DecisionResponse HttpBackend::decide(const DecisionRequest& request) {
  httplib::Client client(host_url_);
  if (!client.is_valid()) throw Error(ErrorKind::BackendError, "invalid backend host " + host_url_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(path_, to_wire(request).dump(), "application/json");
  if (!res) throw Error(ErrorKind::BackendError, "POST " + host_url_ + path_ + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorKind::BackendError, "backend answered HTTP " + std::to_string(res->status));
  Json body = Json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorKind::BackendError, "backend returned malformed JSON");
  return response_from_wire(body);
}

namespace {

void validate_actions(const std::vector<TaskAction>& actions, Scope scope, AgentId agent) {
  if (actions.empty()) bad_response("empty action list");
  const auto allowed = available_actions(scope);
  for (const auto& a : actions) {
    if (std::find(allowed.begin(), allowed.end(), action_name(a)) == allowed.end())
      bad_response("action '" + std::string(action_name(a)) + "' is outside the " + std::string(to_string(scope)) +
                   " scope");
    if (const auto* g = std::get_if<action::Greet>(&a); g && g->target == agent) bad_response("agent greeted itself");
  }
}

Json tagged(const Json& tags, Json body) {
  Json out = tags.is_object() ? tags : Json::object();
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

}  // namespace

LoopResult decide_loop(DecisionBackend& backend, Scope scope, AgentId agent, const ContextSnapshot& internal_ctx,
                       const ContextProvider& provider, const LoopOptions& options) {
  if (options.max_rounds < 1) throw Error(ErrorKind::ConfigError, "max_rounds must be >= 1");

  LoopResult result;
  ContextSnapshot ctx = internal_ctx;
  ctx.environment.reset();
  ctx.agents.reset();

  auto emit_event = [&](Json body) {
    if (options.event_log) options.event_log(tagged(options.log_tags, std::move(body)));
  };

  std::string fallback_reason = "round limit reached";
  for (int round = 1; round <= options.max_rounds; ++round) {
    DecisionRequest req{kProtocolVersion, scope, round, agent, ctx, available_actions(scope)};
    Json entry{{"backend", backend.name()}, {"request", to_wire(req)}};
    ++result.backend_calls;
    bool logged = false;
    try {
      DecisionResponse resp = backend.decide(req);
      entry["response"] = to_wire(resp);
      if (options.prompt_log) options.prompt_log(tagged(options.log_tags, entry));
      logged = true;
      if (resp.is_actions()) {
        validate_actions(resp.actions(), scope, agent);
        result.actions = resp.actions();
        return result;
      }
      if (resp.info() == InfoRequest::Environment && includes_environment(scope) && !ctx.environment &&
          provider.environment) {
        ctx.environment = provider.environment();
        ++result.provider_calls;
      } else if (resp.info() == InfoRequest::Agents && includes_agents(scope) && !ctx.agents && provider.agents) {
        ctx.agents = provider.agents();
        ++result.provider_calls;
      }
    } catch (const std::exception& e) {
      if (!logged) {
        entry["error"] = e.what();
        if (options.prompt_log) options.prompt_log(tagged(options.log_tags, std::move(entry)));
      }
      emit_event({{"type", "backend_warning"}, {"agent", wire_agent_id(agent)}, {"message", e.what()}});
      fallback_reason = "backend failure";
      break;
    }
  }

  ContextSnapshot full = internal_ctx;
  full.environment.reset();
  full.agents.reset();
  if (includes_environment(scope) && provider.environment) full.environment = provider.environment();
  if (includes_agents(scope) && provider.agents) full.agents = provider.agents();
  DecisionResponse oracle = scripted_for(scope, full);
  result.actions = oracle.is_actions() ? oracle.actions() : std::vector<TaskAction>{action::Idle{}};
  result.fell_back = true;
  emit_event({{"type", "fallback"}, {"agent", wire_agent_id(agent)}, {"reason", fallback_reason}});
  return result;
}

}  // namespace qforma::decision
